use serde::Serialize;

use crate::cells::{Fes, FormSpace};
use crate::error::Result;
use crate::homology::complex::{contains_constants, CochainComplex, Cohomology};
use crate::scalar::Scalar;

/// Per-cell results of the compatibility checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub cell: usize,
    pub dim: usize,
    /// `has_extensions` for `k = 0..=dim`.
    pub extensions: Vec<bool>,
    /// `0 → ℝ → A^0(T) → … → A^n(T) → 0` exact.
    pub locally_exact: bool,
    /// Constants lie in `A^0(T)`.
    pub has_constants: bool,
    /// `0 → A^0_0(T) → … → A^n_0(T) → ℝ → 0` exact.
    pub boundary_exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub cells: Vec<CellReport>,
}

impl CompatibilityReport {
    pub fn has_extensions(&self) -> bool {
        self.cells.iter().all(|c| c.extensions.iter().all(|&e| e))
    }

    pub fn locally_exact(&self) -> bool {
        self.cells.iter().all(|c| c.locally_exact)
    }

    /// Extensions everywhere and local exactness on every cell.
    pub fn is_compatible(&self) -> bool {
        self.has_extensions() && self.locally_exact()
    }

    /// The equivalent criterion: extensions, constants, and exactness of the trace-free
    /// sequences ending in integration.
    pub fn is_compatible_by_boundary(&self) -> bool {
        self.has_extensions() && self.cells.iter().all(|c| c.has_constants && c.boundary_exact)
    }
}

/// The trace-free spaces `A^k_0(T)` for `k = 0..=dim T`.
pub fn boundary_spaces<S: Scalar>(fes: &Fes<S>, cell: usize) -> Vec<FormSpace<S>> {
    let dim = fes.complex().cell(cell).dim();
    (0..=dim).map(|k| fes.boundary_restricted(cell, k)).collect()
}

/// Cohomology of `A•_0(T)`, end-augmented by integration unless `unaugmented`.
pub fn boundary_cohomology<S: Scalar>(fes: &Fes<S>, cell: usize, unaugmented: bool) -> Result<Cohomology> {
    CochainComplex::full(boundary_spaces(fes, cell), false, !unaugmented)?.cohomology_dims()
}

pub fn compatibility_report<S: Scalar>(fes: &Fes<S>) -> Result<CompatibilityReport> {
    let mut cells = Vec::with_capacity(fes.complex().len());
    for id in 0..fes.complex().len() {
        let dim = fes.complex().cell(id).dim();
        let extensions = (0..=dim).map(|k| fes.has_extensions(id, k)).collect();
        let has_constants = contains_constants(fes.space(id, 0));
        let locally_exact = has_constants
            && CochainComplex::full(fes.spaces(id).to_vec(), true, false)?.cohomology_dims()?.is_acyclic();
        let boundary_exact = boundary_cohomology(fes, id, false)?.is_acyclic();
        cells.push(CellReport { cell: id, dim, extensions, locally_exact, has_constants, boundary_exact });
    }
    Ok(CompatibilityReport { cells })
}

pub fn is_compatible<S: Scalar>(fes: &Fes<S>) -> Result<bool> {
    Ok(compatibility_report(fes)?.is_compatible())
}

/// Lower bounds `dim A^k_0(T) + dim H^{k+1}(A•_0(T))` for every cell and degree, the
/// trace-free dimensions of any compatible system containing `fes`.
///
/// `H^{n+1}` is the terminal slot of the end-augmented complex; with `unaugmented` the
/// complex ends at `A^n_0` and `H^{n+1} = 0`.
pub fn minimal_dims<S: Scalar>(fes: &Fes<S>, unaugmented: bool) -> Result<Vec<Vec<usize>>> {
    (0..fes.complex().len()).map(|id| minimal_dims_on(fes, id, unaugmented)).collect()
}

pub fn minimal_dims_on<S: Scalar>(fes: &Fes<S>, cell: usize, unaugmented: bool) -> Result<Vec<usize>> {
    let spaces = boundary_spaces(fes, cell);
    let h = CochainComplex::full(spaces.clone(), false, !unaugmented)?.cohomology_dims()?;
    Ok(spaces.iter().enumerate().map(|(k, x)| x.dim() + h.at(k + 1)).collect())
}

/// Trace-free dimensions `dim A^k_0(T)` of every cell.
pub fn boundary_dims<S: Scalar>(fes: &Fes<S>) -> Vec<Vec<usize>> {
    (0..fes.complex().len())
        .map(|id| boundary_spaces(fes, id).iter().map(FormSpace::dim).collect())
        .collect()
}
