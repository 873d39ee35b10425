use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use minfes::cells::Shape;
use minfes::construct::Complement;
use serde::Serialize;

use crate::CliError;

/// Largest `n` and `r` accepted unless the cost guard is lifted.
pub const MAX_N: usize = 4;
pub const MAX_R: usize = 10;

/// An inclusive range written `a..b`, or a single value `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub fn new(lo: usize, hi: usize) -> Self {
        Self { lo, hi }
    }

    pub fn iter(self) -> RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| CliError::Config(format!("bad range {s:?}")));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => (num(s)?, num(s)?),
        };
        if lo > hi {
            return Err(CliError::Config(format!("empty range {s:?}")));
        }
        Ok(Self { lo, hi })
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Pretty,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub n: Option<Span>,
    pub r: Option<Span>,
    pub k: Option<Span>,
    pub cell: Option<Shape>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub unaugmented: bool,
    /// Lifts the `n ≤ 4`, `r ≤ 10` guard.
    pub max_cost: bool,
    pub complement: Complement,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: None,
            r: None,
            k: None,
            cell: None,
            format: Format::Pretty,
            out: None,
            unaugmented: false,
            max_cost: false,
            complement: Complement::Pivot,
        }
    }
}

impl RunConfig {
    /// The configured `n` range, or `default`, checked against the cost guard.
    pub fn n_span(&self, default: Span) -> Result<Span, CliError> {
        let s = self.n.unwrap_or(default);
        if !self.max_cost && s.hi > MAX_N {
            return Err(CliError::Config(format!("n up to {} exceeds the guard n <= {MAX_N}; pass --max-cost", s.hi)));
        }
        Ok(s)
    }

    pub fn r_span(&self, default: Span) -> Result<Span, CliError> {
        let s = self.r.unwrap_or(default);
        if !self.max_cost && s.hi > MAX_R {
            return Err(CliError::Config(format!("r up to {} exceeds the guard r <= {MAX_R}; pass --max-cost", s.hi)));
        }
        Ok(s)
    }

    /// Degrees `0..=n` restricted to `--k`.
    pub fn degrees(&self, n: usize) -> Vec<usize> {
        (0..=n).filter(|k| self.k.is_none_or(|s| s.iter().contains(k))).collect()
    }

    pub fn shapes(&self, default: &[Shape]) -> Vec<Shape> {
        self.cell.map_or_else(|| default.to_vec(), |s| vec![s])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!("2..5".parse::<Span>().unwrap(), Span::new(2, 5));
        assert_eq!("1..=3".parse::<Span>().unwrap(), Span::new(1, 3));
        assert_eq!("4".parse::<Span>().unwrap(), Span::new(4, 4));
        assert!("5..2".parse::<Span>().is_err());
        assert!("a..2".parse::<Span>().is_err());
    }

    #[test]
    fn cost_guard() {
        let cfg = RunConfig { n: Some(Span::new(1, 5)), ..RunConfig::default() };
        assert!(cfg.n_span(Span::new(1, 3)).is_err());
        let cfg = RunConfig { max_cost: true, ..cfg };
        assert_eq!(cfg.n_span(Span::new(1, 3)).unwrap(), Span::new(1, 5));
        let cfg = RunConfig { k: Some(Span::new(1, 1)), ..RunConfig::default() };
        assert_eq!(cfg.degrees(3), vec![1]);
    }
}
