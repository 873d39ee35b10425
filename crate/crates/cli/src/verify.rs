use std::fmt;

use minfes::cells::{CellComplex, Fes, RefCell, Shape, SpaceFamily};
use minfes::construct::verify_tnt;
use minfes::homology::{
    serendipity_zero_complex, verify_kunneth, verify_trimmed_identity, verify_zero_sequence, CochainComplex,
};
use minfes::vem::{verify_vem_dim_identity, verify_zero_dual};
use minfes::Rational;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, Span};
use crate::render::{align, Render, Rows};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Trimmed spaces on simplices are the minimal compatible ones.
    Trimmed,
    /// Trace-free cohomology and duality behind the serendipity characterization.
    Serendipity,
    /// The tensor-product system on cubes.
    Tnt,
    /// Z-space dimension identities.
    Vem,
    /// Exactness of the trace-free sequences on cubes and their duality pairing.
    Zeroce,
    /// Cohomology of tensor complexes as graded products.
    Kunneth,
    /// Global dimension against the sum of trace-free dimensions on two-cell meshes.
    Extdim,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

/// One checked case and the two values it compares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case {
    pub n: usize,
    pub r: usize,
    pub k: Option<usize>,
    pub label: String,
    pub left: String,
    pub right: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub passed: usize,
    pub failed: usize,
    pub cases: Vec<Case>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0 && !self.cases.is_empty()
    }
}

struct Job {
    n: usize,
    r: usize,
    k: Option<usize>,
    shape: Shape,
}

fn case(job: &Job, label: impl Into<String>, left: impl fmt::Debug, right: impl fmt::Debug, pass: bool) -> Case {
    Case { n: job.n, r: job.r, k: job.k, label: label.into(), left: format!("{left:?}"), right: format!("{right:?}"), pass }
}

fn jobs(suite: Suite, cfg: &RunConfig) -> Result<Vec<Job>, CliError> {
    let (n, r, per_k, shapes): (Span, Span, bool, Vec<Shape>) = match suite {
        Suite::Trimmed => (Span::new(1, 3), Span::new(1, 4), true, vec![Shape::Simplex]),
        Suite::Serendipity | Suite::Zeroce => (Span::new(1, 3), Span::new(1, 6), true, vec![Shape::Cube]),
        Suite::Tnt | Suite::Kunneth => (Span::new(1, 3), Span::new(1, 3), false, vec![Shape::Cube]),
        Suite::Vem => (Span::new(1, 3), Span::new(1, 3), true, vec![Shape::Simplex]),
        Suite::Extdim => (Span::new(1, 3), Span::new(1, 2), true, cfg.shapes(&[Shape::Cube, Shape::Simplex])),
    };
    let (n, r) = (cfg.n_span(n)?, cfg.r_span(r)?);
    let mut out = Vec::new();
    for shape in shapes {
        for n in n.iter().filter(|&n| n >= 1) {
            // the serendipity statements start at r = n
            let low = if matches!(suite, Suite::Serendipity | Suite::Zeroce) { n } else { 1 };
            for r in r.iter().filter(|&r| r >= low) {
                if per_k {
                    out.extend(cfg.degrees(n).into_iter().map(|k| Job { n, r, k: Some(k), shape }));
                } else {
                    out.push(Job { n, r, k: None, shape });
                }
            }
        }
    }
    Ok(out)
}

/// Two copies of the reference cell glued along a facet.
pub fn two_cell_mesh(cell: RefCell) -> CellComplex<Rational> {
    let n = cell.dim();
    let count = cell.vertex_count();
    let second: Vec<usize> = match cell.shape() {
        // the x_0 = 0 facet of the second cube is the x_0 = 1 facet of the first
        Shape::Cube => (0..count).map(|v| if v & 1 == 0 { v | 1 } else { count + v / 2 }).collect(),
        // vertex 0 is replaced, the opposite facet is shared
        Shape::Simplex => std::iter::once(n + 1).chain(1..=n).collect(),
    };
    CellComplex::from_top_cells(&[(cell, (0..count).collect()), (cell, second)]).expect("two-cell mesh")
}

fn run(suite: Suite, job: &Job) -> Result<Vec<Case>, CliError> {
    let (n, r) = (job.n, job.r);
    Ok(match suite {
        Suite::Trimmed => {
            let c = verify_trimmed_identity(n, r, job.k.expect("per degree"))?;
            vec![
                case(job, "dim identity", c.trimmed_dim, c.minimal_dim, c.trimmed_dim == c.minimal_dim),
                case(job, "d-images equal", c.images_equal, true, c.images_equal),
            ]
        }
        Suite::Serendipity => {
            let k = job.k.expect("per degree");
            let spaces = serendipity_zero_complex::<Rational>(n, r)?;
            let h = CochainComplex::full(spaces, false, true)?.cohomology_dims()?.at(k + 1);
            let mut out = vec![case(job, "H^{k+1}(P_{r-•} zero)", h, 0, h == 0)];
            let p = verify_zero_dual(n, r - k, k)?;
            out.push(case(job, "pairing rank", (p.rank, p.rows), p.cols, p.invertible()));
            out
        }
        Suite::Zeroce => {
            let k = job.k.expect("per degree");
            let s = verify_zero_sequence(n, r, k)?;
            let p = verify_zero_dual(n, r, k)?;
            let label = if k == n { "exact, ending in integration" } else { "exact" };
            vec![
                case(job, label, s.defect, 0, s.defect == 0),
                case(job, "pairing rank", (p.rank, p.rows), p.cols, p.invertible()),
            ]
        }
        Suite::Tnt => {
            let c = verify_tnt(n, r)?;
            vec![
                case(job, "trace-free dims", &c.dims, &c.expected, c.dims == c.expected),
                case(job, "element system", c.element_system, true, c.element_system),
                case(job, "extensions", c.extensions, true, c.extensions),
                case(job, "locally exact", c.locally_exact, true, c.locally_exact),
                case(job, "d g_J = |J| f_J", c.generators, true, c.generators),
                case(job, "symmetric", c.symmetric, true, c.symmetric),
            ]
        }
        Suite::Vem => {
            let c = verify_vem_dim_identity(n, r, job.k.expect("per degree"))?;
            vec![case(job, "dim Z^k + dim Z^{k-1}", c.lhs, c.rhs, c.holds())]
        }
        Suite::Kunneth => {
            let c = verify_kunneth(n, r)?;
            vec![case(job, "H(tensor) = graded product", &c.direct, &c.product, c.holds())]
        }
        Suite::Extdim => {
            let k = job.k.expect("per degree");
            let cell = RefCell::new(job.shape, n);
            let mesh = two_cell_mesh(cell);
            let families: &[SpaceFamily] = match job.shape {
                Shape::Cube => &[SpaceFamily::Pr, SpaceFamily::Qr, SpaceFamily::QrMinus],
                Shape::Simplex => &[SpaceFamily::Pr, SpaceFamily::PrMinus],
            };
            let mut out = Vec::new();
            for &family in families {
                let fes = Fes::polynomial(mesh.clone(), family, r)?;
                let extends = (0..mesh.len()).all(|c| mesh.cell(c).dim() < k || fes.has_extensions(c, k));
                let (global, sum) = (fes.global_space_dim(k), fes.boundary_dim_sum(k));
                let label = format!("{:?} {family:?} extends={extends}", job.shape);
                out.push(case(job, label, global, sum, extends == (global == sum)));
            }
            out
        }
    })
}

/// Runs every case of a suite over the configured ranges; cases run in parallel and the
/// report is sorted by `(n, r, k, label)`.
pub fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let jobs = jobs(suite, cfg)?;
    let mut cases: Vec<Case> = jobs
        .par_iter()
        .map(|j| run(suite, j))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    cases.sort_by(|a, b| (a.n, a.r, a.k, &a.label).cmp(&(b.n, b.r, b.k, &b.label)));
    let passed = cases.iter().filter(|c| c.pass).count();
    Ok(VerifyReport { suite, passed, failed: cases.len() - passed, cases })
}

impl Render for VerifyReport {
    fn rows(&self) -> Rows {
        let header = ["suite", "n", "r", "k", "check", "left", "right", "pass"];
        let body = self
            .cases
            .iter()
            .map(|c| {
                vec![
                    self.suite.to_string(),
                    c.n.to_string(),
                    c.r.to_string(),
                    c.k.map_or_else(String::new, |k| k.to_string()),
                    c.label.clone(),
                    c.left.clone(),
                    c.right.clone(),
                    c.pass.to_string(),
                ]
            })
            .collect();
        Rows::new(&header, body)
    }

    fn pretty(&self) -> String {
        let mut out = align(&self.rows());
        out += &format!("{}: {} passed, {} failed\n", self.suite, self.passed, self.failed);
        out
    }

    fn passed(&self) -> bool {
        self.all_pass()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meshes_share_one_facet() {
        for cell in [RefCell::cube(1), RefCell::cube(2), RefCell::cube(3), RefCell::simplex(2), RefCell::simplex(3)] {
            let mesh = two_cell_mesh(cell);
            let tops = mesh.maximal_cells();
            assert_eq!(tops.len(), 2);
            let shared = mesh.common_faces(tops[0], tops[1]);
            let facets = shared.iter().filter(|&&f| mesh.cell(f).dim() + 1 == cell.dim()).count();
            assert_eq!(facets, 1, "{cell:?}");
        }
    }

    #[test]
    fn suite_names() {
        assert_eq!(Suite::Zeroce.to_string(), "zeroce");
    }
}
