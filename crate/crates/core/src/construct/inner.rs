use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cells::{CellComplex, FamilyLayout, FormBasis, RefCell};
use crate::error::{FesError, Result};
use crate::linalg::{Mat, SparseVec, Subspace};
use crate::scalar::Scalar;

/// Scalar product on the form spaces of each cell.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerProduct {
    /// The monomial forms `x^α dx_J` are orthonormal.
    #[default]
    Monomial,
    /// `∫_T ⟨u, v⟩` with the Euclidean pointwise product.
    L2,
}

impl InnerProduct {
    /// `(u, v)` for coordinate vectors of `basis` on `cell`.
    pub fn pair<S: Scalar>(&self, basis: &FormBasis, cell: RefCell, u: &SparseVec<S>, v: &SparseVec<S>) -> S {
        match self {
            InnerProduct::Monomial => u.dot(v),
            InnerProduct::L2 => {
                let p = basis.decode(u).pointwise_dot(&basis.decode(v));
                if cell.is_cube() {
                    p.integrate_cube()
                } else {
                    p.integrate_simplex()
                }
            }
        }
    }

    /// Sum of the per-cell products over the blocks of a family layout.
    pub fn pair_family<S: Scalar>(
        &self,
        complex: &CellComplex<S>,
        layout: &FamilyLayout,
        u: &SparseVec<S>,
        v: &SparseVec<S>,
    ) -> S {
        if *self == InnerProduct::Monomial {
            return u.dot(v);
        }
        let (bu, bv) = (layout.blocks(u), layout.blocks(v));
        let mut acc = S::zero();
        for (i, &cell) in layout.cells().iter().enumerate() {
            if bu[i].is_zero() || bv[i].is_zero() {
                continue;
            }
            let (_, basis) = layout.block(i);
            acc += &self.pair(&basis, complex.cell(cell).shape, &bu[i], &bv[i]);
        }
        acc
    }

    /// Gram matrix of `vectors`.
    pub fn gram<S: Scalar>(&self, basis: &FormBasis, cell: RefCell, vectors: &[SparseVec<S>]) -> Mat<S> {
        let n = vectors.len();
        let mut g = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = self.pair(basis, cell, &vectors[i], &vectors[j]);
                g[(j, i)] = v.clone();
                g[(i, j)] = v;
            }
        }
        g
    }

    /// Fails unless the Gram matrix of `vectors` is symmetric positive definite.
    pub fn check<S: Scalar>(&self, basis: &FormBasis, cell: RefCell, vectors: &[SparseVec<S>]) -> Result<()> {
        if self.gram(basis, cell, vectors).is_positive_definite() {
            Ok(())
        } else {
            Err(FesError::NotPositiveDefinite)
        }
    }
}

/// How the minimal-system construction picks the spaces it adds. Every choice gives the
/// same dimensions and the same trace-free spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Complement {
    /// Zero-trace parts orthogonal to derivatives, lifts by mixed extensions.
    Orthogonal(InnerProduct),
    /// Any complement, picked greedily from the monomial basis of the ambient system. Keeps
    /// coefficients small in exact arithmetic.
    Pivot,
}

impl Default for Complement {
    fn default() -> Self {
        Complement::Orthogonal(InnerProduct::Monomial)
    }
}

impl From<InnerProduct> for Complement {
    fn from(ip: InnerProduct) -> Self {
        Complement::Orthogonal(ip)
    }
}

impl fmt::Display for Complement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Complement::Orthogonal(InnerProduct::Monomial) => "monomial",
            Complement::Orthogonal(InnerProduct::L2) => "l2",
            Complement::Pivot => "pivot",
        })
    }
}

impl FromStr for Complement {
    type Err = FesError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monomial" => Ok(Complement::Orthogonal(InnerProduct::Monomial)),
            "l2" => Ok(Complement::Orthogonal(InnerProduct::L2)),
            "pivot" => Ok(Complement::Pivot),
            _ => Err(FesError::InvalidParameter(format!("unknown complement rule {s:?}"))),
        }
    }
}

/// Elements of `space` orthogonal to every vector of `others`, for the product on one cell.
pub fn orthogonal_part<S: Scalar>(
    ip: InnerProduct,
    basis: &FormBasis,
    cell: RefCell,
    space: &Subspace<S>,
    others: &[SparseVec<S>],
) -> Subspace<S> {
    space.orthogonal_within(others, |x, w| ip.pair(basis, cell, x, w))
}
