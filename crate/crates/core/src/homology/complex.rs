use serde::Serialize;

use crate::cells::{FormBasis, FormSpace, RefCell};
use crate::error::{FesError, Result};
use crate::linalg::{rank_of, split_map, SparseVec};
use crate::polyforms::{PolyForm, Polynomial};
use crate::scalar::Scalar;

/// A sequence `X^a → X^{a+1} → … → X^b` of form spaces on one cell, linked by `d`.
///
/// `augment_start` prepends `ℝ → X^0` (constants), `augment_end` appends `X^n → ℝ`
/// (integration). Each flag needs the sequence to reach the corresponding end.
#[derive(Clone, Debug)]
pub struct CochainComplex<S> {
    spaces: Vec<FormSpace<S>>,
    augment_start: bool,
    augment_end: bool,
}

/// Cohomology dimensions, one per space of the complex, plus the `ℝ` slot after integration
/// when the end is augmented.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cohomology {
    /// Form degree of `dims[0]`.
    pub first_degree: usize,
    pub dims: Vec<usize>,
    /// `dim ℝ / ∫ X^n`, present only with end augmentation.
    pub terminal: Option<usize>,
    pub augment_start: bool,
    pub augment_end: bool,
}

impl Cohomology {
    /// `H^k`; degrees outside the complex are zero, `n+1` is the terminal slot.
    pub fn at(&self, k: usize) -> usize {
        if k < self.first_degree {
            return 0;
        }
        let i = k - self.first_degree;
        match i.cmp(&self.dims.len()) {
            std::cmp::Ordering::Less => self.dims[i],
            std::cmp::Ordering::Equal => self.terminal.unwrap_or(0),
            std::cmp::Ordering::Greater => 0,
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.dims.iter().all(|&d| d == 0) && self.terminal.unwrap_or(0) == 0
    }
}

impl<S: Scalar> CochainComplex<S> {
    pub fn new(spaces: Vec<FormSpace<S>>, augment_start: bool, augment_end: bool) -> Result<Self> {
        let Some(first) = spaces.first() else {
            return Err(FesError::InvalidParameter("empty complex".into()));
        };
        let cell = first.cell();
        for (i, s) in spaces.iter().enumerate() {
            if s.cell() != cell || s.degree() != first.degree() + i {
                return Err(FesError::InvalidParameter("complex spaces must have consecutive degrees".into()));
            }
        }
        if augment_start && first.degree() != 0 {
            return Err(FesError::InvalidParameter("start augmentation needs degree 0".into()));
        }
        if augment_end && spaces.last().map(FormSpace::degree) != Some(cell.dim()) {
            return Err(FesError::InvalidParameter("end augmentation needs the top degree".into()));
        }
        Ok(Self { spaces, augment_start, augment_end })
    }

    /// The full sequence `X^0 → … → X^n` of a cell.
    pub fn full(spaces: Vec<FormSpace<S>>, augment_start: bool, augment_end: bool) -> Result<Self> {
        let n = spaces.first().map(|s| s.cell().dim());
        if spaces.len() != n.map_or(0, |n| n + 1) {
            return Err(FesError::DimensionMismatch { expected: n.map_or(1, |n| n + 1), found: spaces.len() });
        }
        Self::new(spaces, augment_start, augment_end)
    }

    pub fn spaces(&self) -> &[FormSpace<S>] {
        &self.spaces
    }

    pub fn cell(&self) -> RefCell {
        self.spaces[0].cell()
    }

    pub fn augment_start(&self) -> bool {
        self.augment_start
    }

    pub fn augment_end(&self) -> bool {
        self.augment_end
    }

    /// Kernel and image dimension of `d` on each space; the kernel at the top degree is that
    /// of integration when the end is augmented.
    fn kernels_and_images(&self) -> Result<(Vec<usize>, Vec<usize>, Option<usize>)> {
        let n = self.cell().dim();
        let mut kernels = Vec::with_capacity(self.spaces.len());
        let mut images = Vec::with_capacity(self.spaces.len());
        let mut terminal_rank = None;
        for (i, x) in self.spaces.iter().enumerate() {
            let k = x.degree();
            if k == n {
                if self.augment_end {
                    let rank = integral_rank(x);
                    terminal_rank = Some(rank);
                    kernels.push(x.dim() - rank);
                    images.push(rank);
                } else {
                    kernels.push(x.dim());
                    images.push(0);
                }
                continue;
            }
            let dx = x.derivative_vectors(x.vectors());
            if let Some(next) = self.spaces.get(i + 1) {
                if !dx.iter().all(|v| next.contains_vector(v)) {
                    return Err(FesError::NotAComplex { degree: k });
                }
            }
            let target = FormBasis::new(n, k + 1, x.bound()).dim();
            let split = split_map(x.vectors(), &dx, target);
            images.push(split.image.rank());
            kernels.push(split.kernel.len());
        }
        Ok((kernels, images, terminal_rank))
    }

    /// `dim ker d|X^k − dim d X^{k−1}` in every degree of the complex.
    pub fn cohomology_dims(&self) -> Result<Cohomology> {
        let (kernels, images, integral_rank) = self.kernels_and_images()?;
        let first = &self.spaces[0];
        let incoming = if self.augment_start {
            if !contains_constants(first) {
                return Err(FesError::MissingConstants);
            }
            1
        } else {
            0
        };
        let mut dims = Vec::with_capacity(kernels.len());
        for i in 0..kernels.len() {
            let before = if i == 0 { incoming } else { images[i - 1] };
            dims.push(kernels[i] - before);
        }
        Ok(Cohomology {
            first_degree: first.degree(),
            dims,
            terminal: integral_rank.map(|r| 1 - r),
            augment_start: self.augment_start,
            augment_end: self.augment_end,
        })
    }
}

/// Whether `prev → mid → next` is exact at `mid`. A missing `next` means `mid` is top-degree
/// and is followed by integration.
pub fn exact_at<S: Scalar>(prev: Option<&FormSpace<S>>, mid: &FormSpace<S>, next: Option<&FormSpace<S>>) -> Result<bool> {
    let n = mid.cell().dim();
    let kernel_dim = match next {
        Some(next) => {
            let dx = mid.derivative_vectors(mid.vectors());
            if !dx.iter().all(|v| next.contains_vector(v)) {
                return Err(FesError::NotAComplex { degree: mid.degree() });
            }
            mid.kernel_of_d().dim()
        }
        None if mid.degree() == n => mid.dim() - integral_rank(mid),
        None => mid.kernel_of_d().dim(),
    };
    let image_dim = match prev {
        Some(prev) => {
            let dp = prev.derivative_vectors(prev.vectors());
            if !dp.iter().all(|v| mid.contains_vector(v)) {
                return Err(FesError::NotAComplex { degree: prev.degree() });
            }
            rank_of(dp)
        }
        None => 0,
    };
    Ok(kernel_dim == image_dim)
}

/// Rank of integration on a top-degree space, `0` or `1`.
pub fn integral_rank<S: Scalar>(x: &FormSpace<S>) -> usize {
    usize::from(x.integrals().iter().any(|c| !c.is_zero()))
}

/// Whether a 0-form space contains the constant functions.
pub fn contains_constants<S: Scalar>(x: &FormSpace<S>) -> bool {
    x.contains_form(&PolyForm::function(Polynomial::one(x.cell().dim())))
}

/// Graded product of two cohomology sequences, as in the Künneth formula.
pub fn kunneth_product(a: &[usize], b: &[usize]) -> Vec<usize> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// The `d`-images of `vectors` from a `k`-form space, as a `(k+1)`-form space.
pub fn derivative_space<S: Scalar>(x: &FormSpace<S>, vectors: &[SparseVec<S>]) -> FormSpace<S> {
    FormSpace::from_vectors(x.cell(), x.degree() + 1, x.bound(), x.derivative_vectors(vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{make_space, SpaceFamily};
    use crate::Rational;

    fn zero_trace(cell: RefCell, family: SpaceFamily, r: usize) -> Vec<FormSpace<Rational>> {
        (0..=cell.dim()).map(|k| make_space(cell, k, r, family).unwrap().boundary_restricted()).collect()
    }

    #[test]
    fn interval_zero_trace_cohomology() {
        for r in 1..=5 {
            let x = zero_trace(RefCell::cube(1), SpaceFamily::Pr, r);
            let plain = CochainComplex::full(x.clone(), false, false).unwrap().cohomology_dims().unwrap();
            assert_eq!(plain.dims, vec![0, 2]);
            let aug = CochainComplex::full(x, false, true).unwrap().cohomology_dims().unwrap();
            assert_eq!(aug.dims, vec![0, 1]);
            assert_eq!(aug.terminal, Some(0));
        }
    }

    #[test]
    fn cube_tensor_cohomology() {
        for n in 1..=3usize {
            let x = zero_trace(RefCell::cube(n), SpaceFamily::Qr, 1);
            let aug = CochainComplex::full(x.clone(), false, true).unwrap().cohomology_dims().unwrap();
            let plain = CochainComplex::full(x, false, false).unwrap().cohomology_dims().unwrap();
            let mut expected = vec![0; n + 1];
            expected[n] = (1 << n) - 1;
            assert_eq!(aug.dims, expected);
            expected[n] = 1 << n;
            assert_eq!(plain.dims, expected);
        }
    }

    #[test]
    fn start_augmentation_needs_constants() {
        let x = zero_trace(RefCell::cube(1), SpaceFamily::Pr, 2);
        let c = CochainComplex::full(x, true, false).unwrap();
        assert_eq!(c.cohomology_dims(), Err(FesError::MissingConstants));
        let full: Vec<FormSpace<Rational>> =
            (0..=2).map(|k| make_space(RefCell::simplex(2), k, 2, SpaceFamily::PrMinus).unwrap()).collect();
        let h = CochainComplex::full(full, true, false).unwrap().cohomology_dims().unwrap();
        assert!(h.is_acyclic());
        // full P_r is not exact: d P_r misses the degree-r part of P_rΛ^1
        let full: Vec<FormSpace<Rational>> =
            (0..=2).map(|k| make_space(RefCell::simplex(2), k, 2, SpaceFamily::Pr).unwrap()).collect();
        let h = CochainComplex::full(full, true, false).unwrap().cohomology_dims().unwrap();
        assert!(!h.is_acyclic());
    }

    #[test]
    fn non_complex_is_rejected() {
        let cell = RefCell::cube(1);
        let x = vec![
            make_space::<Rational>(cell, 0, 2, SpaceFamily::Pr).unwrap(),
            make_space(cell, 1, 0, SpaceFamily::Pr).unwrap(),
        ];
        let c = CochainComplex::full(x, false, false).unwrap();
        assert_eq!(c.cohomology_dims(), Err(FesError::NotAComplex { degree: 0 }));
    }

    #[test]
    fn kunneth_convolution() {
        assert_eq!(kunneth_product(&[0, 2], &[0, 2]), vec![0, 0, 4]);
        assert_eq!(kunneth_product(&[1, 0], &[1, 0, 0]), vec![1, 0, 0, 0]);
    }
}
