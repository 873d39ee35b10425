use minfes::homology::{small_pleasures_brute, small_pleasures_dim};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::render::{Render, Rows};
use crate::CliError;

/// Reference values of `dim B^k_0(I^3)` for the minimal compatible system containing
/// `P_rΛ•`, rows `k = 0..=3`, columns `r = 4..=10`.
pub const REFERENCE: [[usize; 7]; 4] = [
    [0, 1, 4, 10, 20, 35, 56],
    [11, 27, 54, 95, 153, 231, 332],
    [45, 81, 133, 204, 297, 415, 561],
    [35, 56, 84, 120, 165, 220, 286],
];

pub const R_RANGE: std::ops::RangeInclusive<usize> = 4..=10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub k: usize,
    pub r: usize,
    pub closed_form: usize,
    pub ranks: usize,
    pub reference: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1 {
    pub augmented: bool,
    pub entries: Vec<TableEntry>,
}

impl Table1 {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn get(&self, k: usize, r: usize) -> Option<&TableEntry> {
        self.entries.iter().find(|e| e.k == k && e.r == r)
    }
}

/// The table computed by the closed form and by ranks on `P_rΛ•_0(I^3)`, column by column
/// in parallel.
pub fn cmd_table1(cfg: &RunConfig) -> Result<Table1, CliError> {
    let columns: Vec<(usize, Vec<usize>)> = R_RANGE
        .into_par_iter()
        .map(|r| Ok((r, small_pleasures_brute(3, r, cfg.unaugmented)?)))
        .collect::<Result<_, CliError>>()?;
    let mut entries = Vec::with_capacity(28);
    for k in 0..=3 {
        for (r, ranks) in &columns {
            let closed_form = small_pleasures_dim(3, *r, k);
            let reference = REFERENCE[k][r - R_RANGE.start()];
            let pass = closed_form == reference && ranks[k] == reference;
            entries.push(TableEntry { k, r: *r, closed_form, ranks: ranks[k], reference, pass });
        }
    }
    Ok(Table1 { augmented: !cfg.unaugmented, entries })
}

impl Render for Table1 {
    fn rows(&self) -> Rows {
        let header = ["k", "r", "closed_form", "ranks", "reference", "pass"];
        let body = self
            .entries
            .iter()
            .map(|e| {
                vec![
                    e.k.to_string(),
                    e.r.to_string(),
                    e.closed_form.to_string(),
                    e.ranks.to_string(),
                    e.reference.to_string(),
                    e.pass.to_string(),
                ]
            })
            .collect();
        Rows::new(&header, body)
    }

    fn pretty(&self) -> String {
        let mut out = String::from("dim B^k_0(I^3)\n   k\\r");
        for r in R_RANGE {
            out += &format!("{r:>6}");
        }
        out.push('\n');
        for k in 0..=3 {
            out += &format!("{k:>6} ");
            for r in R_RANGE {
                let e = self.get(k, r).expect("full table");
                let mark = if e.pass { " " } else { "!" };
                out += &format!("{:>5}{mark}", e.ranks);
            }
            out.push('\n');
        }
        for e in self.entries.iter().filter(|e| !e.pass) {
            out += &format!(
                "mismatch k={} r={}: closed form {}, ranks {}, reference {}\n",
                e.k, e.r, e.closed_form, e.ranks, e.reference
            );
        }
        out += if self.passed() { "all 28 values match\n" } else { "FAILED\n" };
        out
    }

    fn passed(&self) -> bool {
        Table1::passed(self)
    }
}
