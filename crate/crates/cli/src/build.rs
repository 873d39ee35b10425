use minfes::cells::{RefCell, Shape};
use minfes::construct::{build_mcfes_polynomial, build_tnt};
use minfes::homology::{boundary_cohomology, boundary_dims, compatibility_report, minimal_dims};
use minfes::serial::{fes_json, FesJson};
use minfes::{QFes, Rational};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, Span};
use crate::render::{align, Render, Rows};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// Minimal compatible system containing `P_rΛ•`.
    Mcfes,
    /// Tensor-product system containing `Q_rΛ•` on cubes.
    Tnt,
}

/// The self-checks attached to every built system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub element_system: bool,
    /// `has_extensions` per cell and degree.
    pub extensions: Vec<Vec<bool>>,
    /// Trace-free cohomology vanishes on every cell.
    pub cohomology_zero: bool,
    pub locally_exact: bool,
    pub boundary_dims: Vec<Vec<usize>>,
    pub minimal_dims: Vec<Vec<usize>>,
}

impl Certificate {
    pub fn compute(fes: &QFes, unaugmented: bool) -> Result<Self, CliError> {
        let report = compatibility_report(fes)?;
        let mut cohomology_zero = true;
        for c in 0..fes.complex().len() {
            cohomology_zero &= boundary_cohomology(fes, c, unaugmented)?.is_acyclic();
        }
        Ok(Self {
            element_system: fes.is_element_system(),
            extensions: report.cells.iter().map(|c| c.extensions.clone()).collect(),
            cohomology_zero,
            locally_exact: report.locally_exact(),
            boundary_dims: boundary_dims(fes),
            minimal_dims: minimal_dims(fes, unaugmented)?,
        })
    }

    pub fn passed(&self) -> bool {
        self.element_system
            && self.extensions.iter().flatten().all(|&e| e)
            && self.cohomology_zero
            && self.locally_exact
            && self.boundary_dims == self.minimal_dims
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Built {
    pub target: Target,
    pub cell: RefCell,
    pub r: usize,
    pub certificate: Certificate,
    pub fes: FesJson,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BuildReport {
    pub builds: Vec<Built>,
}

impl BuildReport {
    pub fn top_dims(&self, n: usize, r: usize) -> Option<&Vec<usize>> {
        let b = self.builds.iter().find(|b| b.cell.dim() == n && b.r == r)?;
        b.certificate.boundary_dims.last()
    }
}

fn build_one(target: Target, cell: RefCell, r: usize, cfg: &RunConfig) -> Result<Built, CliError> {
    let fes = match target {
        Target::Mcfes => build_mcfes_polynomial::<Rational>(cell, r, cfg.complement)?,
        Target::Tnt => build_tnt::<Rational>(cell.dim(), r)?,
    };
    Ok(Built { target, cell, r, certificate: Certificate::compute(&fes, cfg.unaugmented)?, fes: fes_json(&fes) })
}

pub fn cmd_build(target: Target, cfg: &RunConfig) -> Result<BuildReport, CliError> {
    let n = cfg.n_span(Span::new(2, 2))?;
    let r = cfg.r_span(Span::new(1, 1))?;
    let shape = match target {
        Target::Tnt => Shape::Cube,
        Target::Mcfes => cfg.cell.unwrap_or(Shape::Cube),
    };
    if target == Target::Tnt && cfg.cell == Some(Shape::Simplex) {
        return Err(CliError::Config("the tensor-product system lives on cubes".into()));
    }
    let cases: Vec<(usize, usize)> = n.iter().filter(|&n| n >= 1).flat_map(|n| r.iter().map(move |r| (n, r))).collect();
    let builds = cases
        .par_iter()
        .map(|&(n, r)| build_one(target, RefCell::new(shape, n), r, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BuildReport { builds })
}

impl Render for BuildReport {
    fn rows(&self) -> Rows {
        let header = ["target", "cell", "n", "r", "top_boundary_dims", "minimal_dims", "element_system", "extensions", "cohomology_zero", "pass"];
        let body = self
            .builds
            .iter()
            .map(|b| {
                let c = &b.certificate;
                vec![
                    format!("{:?}", b.target).to_lowercase(),
                    format!("{:?}", b.cell.shape()).to_lowercase(),
                    b.cell.dim().to_string(),
                    b.r.to_string(),
                    format!("{:?}", c.boundary_dims.last().expect("nonempty")),
                    format!("{:?}", c.minimal_dims.last().expect("nonempty")),
                    c.element_system.to_string(),
                    c.extensions.iter().flatten().all(|&e| e).to_string(),
                    c.cohomology_zero.to_string(),
                    c.passed().to_string(),
                ]
            })
            .collect();
        Rows::new(&header, body)
    }

    fn pretty(&self) -> String {
        let mut out = align(&self.rows());
        out += if self.passed() { "certificate: all checks pass\n" } else { "certificate: FAILED\n" };
        out
    }

    fn passed(&self) -> bool {
        !self.builds.is_empty() && self.builds.iter().all(|b| b.certificate.passed())
    }
}
