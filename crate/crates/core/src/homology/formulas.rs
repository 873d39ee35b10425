use serde::Serialize;

use crate::cells::{make_space, tensor_spaces, FormSpace, RefCell, SpaceFamily};
use crate::error::{FesError, Result};
use crate::homology::complex::{exact_at, kunneth_product, CochainComplex, Cohomology};
use crate::scalar::{binomial, Scalar};

fn c(a: i64, b: i64) -> usize {
    binomial(a, b) as usize
}

/// `dim P_rΛ^k_0(I^n) = C(n,k) · C(r − 2(n−k) + n, n)`: the zero-trace forms are
/// `u Π_{j∉J} x_j(1−x_j) dx_J` with `u` of degree `r − 2(n−k)`.
pub fn zero_trace_dim(n: usize, r: usize, k: usize) -> usize {
    let (n, r, k) = (n as i64, r as i64, k as i64);
    let s = r - 2 * (n - k);
    if s < 0 {
        return 0;
    }
    c(n, k) * c(s + n, n)
}

/// Closed form of `dim H^k(P_rΛ•_0(I^n))` with the sequence ending in integration:
/// `C(r+2k−n−1, k−1) · C(r+k−n−1, n−k)`.
pub fn small_pleasures_cohomology(n: usize, r: usize, k: usize) -> usize {
    let (n, r, k) = (n as i64, r as i64, k as i64);
    c(r + 2 * k - n - 1, k - 1) * c(r + k - n - 1, n - k)
}

/// Trace-free dimension in degree `k` of the minimal compatible system on `I^n` containing
/// `P_rΛ•`, by the closed form.
pub fn small_pleasures_dim(n: usize, r: usize, k: usize) -> usize {
    zero_trace_dim(n, r, k) + small_pleasures_cohomology(n, r, k + 1)
}

/// The trace-free complex `P_rΛ•_0(T)` computed by rank.
pub fn zero_trace_complex<S: Scalar>(cell: RefCell, r: usize, family: SpaceFamily) -> Result<Vec<FormSpace<S>>> {
    (0..=cell.dim()).map(|k| Ok(make_space(cell, k, r, family)?.boundary_restricted())).collect()
}

/// The complex `P_rΛ^0_0 → P_{r−1}Λ^1_0 → … → P_{r−n}Λ^n_0` on `I^n`, whose degree `k`
/// space is the trace-free part of the serendipity space `P_{r−k}Λ^k`.
pub fn serendipity_zero_complex<S: Scalar>(n: usize, r: usize) -> Result<Vec<FormSpace<S>>> {
    let cell = RefCell::cube(n);
    (0..=n)
        .map(|k| match r.checked_sub(k) {
            Some(q) => Ok(make_space(cell, k, q, SpaceFamily::Pr)?.boundary_restricted()),
            None => Ok(FormSpace::zero(cell, k, 0)),
        })
        .collect()
}

/// Brute-force counterpart of [`small_pleasures_dim`]: rank computations on `P_rΛ•_0(I^n)`.
pub fn small_pleasures_brute(n: usize, r: usize, unaugmented: bool) -> Result<Vec<usize>> {
    let spaces = zero_trace_complex::<crate::Rational>(RefCell::cube(n), r, SpaceFamily::Pr)?;
    let h = CochainComplex::full(spaces.clone(), false, !unaugmented)?.cohomology_dims()?;
    Ok((0..=n).map(|k| spaces[k].dim() + h.at(k + 1)).collect())
}

/// Brute-force `H^•(P_rΛ•_0(I^n))` for comparison with [`small_pleasures_cohomology`].
pub fn small_pleasures_cohomology_brute(n: usize, r: usize, unaugmented: bool) -> Result<Cohomology> {
    let spaces = zero_trace_complex::<crate::Rational>(RefCell::cube(n), r, SpaceFamily::Pr)?;
    CochainComplex::full(spaces, false, !unaugmented)?.cohomology_dims()
}

/// The two sides of the trimmed-forms identity on a simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrimmedCheck {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    /// `dim P_r^-Λ^k_0`.
    pub trimmed_dim: usize,
    /// `dim P_{r−1}Λ^k_0 + dim H^{k+1}(P_{r−1}Λ•_0)`, end-augmented.
    pub minimal_dim: usize,
    /// `d P_r^-Λ^k_0 = d P_rΛ^k_0` as spaces.
    pub images_equal: bool,
}

impl TrimmedCheck {
    pub fn holds(&self) -> bool {
        self.trimmed_dim == self.minimal_dim && self.images_equal
    }
}

pub fn verify_trimmed_identity(n: usize, r: usize, k: usize) -> Result<TrimmedCheck> {
    if r == 0 || k > n {
        return Err(FesError::InvalidParameter(format!("trimmed identity needs r >= 1 and k <= n, got r={r} k={k}")));
    }
    let cell = RefCell::simplex(n);
    let trimmed = make_space::<crate::Rational>(cell, k, r, SpaceFamily::PrMinus)?.boundary_restricted();
    let full = make_space::<crate::Rational>(cell, k, r, SpaceFamily::Pr)?.boundary_restricted();
    let lower = zero_trace_complex::<crate::Rational>(cell, r - 1, SpaceFamily::Pr)?;
    let h = CochainComplex::full(lower.clone(), false, true)?.cohomology_dims()?;
    let images_equal = if k == n { true } else { trimmed.derivative().same_span(&full.derivative())? };
    Ok(TrimmedCheck {
        n,
        r,
        k,
        trimmed_dim: trimmed.dim(),
        minimal_dim: lower[k].dim() + h.at(k + 1),
        images_equal,
    })
}

/// One exactness statement of the trace-free serendipity sequences on `I^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroSequenceCheck {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    /// Kernel at the middle space minus the incoming image; zero iff exact.
    pub defect: usize,
}

/// Exactness of `P_{r+1}Λ^{k−1}_0 → P_rΛ^k_0 → P_{r−1}Λ^{k+1}_0` on `I^n` for `k < n`,
/// and of `P_{r+1}Λ^{n−1}_0 → P_rΛ^n_0 → ℝ` (integration) for `k = n`.
pub fn verify_zero_sequence(n: usize, r: usize, k: usize) -> Result<ZeroSequenceCheck> {
    if k > n {
        return Err(FesError::FormDegree { degree: k, dim: n });
    }
    let cell = RefCell::cube(n);
    let zero = |k: usize, r: usize| -> Result<FormSpace<crate::Rational>> {
        Ok(make_space(cell, k, r, SpaceFamily::Pr)?.boundary_restricted())
    };
    let prev = if k == 0 { None } else { Some(zero(k - 1, r + 1)?) };
    let mid = zero(k, r)?;
    let next = if k == n || r == 0 { None } else { Some(zero(k + 1, r - 1)?) };
    let next = match (k == n, next) {
        (true, _) => None,
        (false, Some(x)) => Some(x),
        // P_{-1} is the zero space: exactness means d vanishes on the middle space
        (false, None) => Some(FormSpace::zero(cell, k + 1, 0)),
    };
    let exact = exact_at(prev.as_ref(), &mid, next.as_ref());
    let exact = match exact {
        Err(FesError::NotAComplex { .. }) => false,
        other => other?,
    };
    Ok(ZeroSequenceCheck { n, r, k, defect: usize::from(!exact) })
}

/// Cohomology of the trace-free tensor complex on `I^n` against the graded product of the
/// factor cohomologies, all without augmentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KunnethCheck {
    pub n: usize,
    pub r: usize,
    pub direct: Vec<usize>,
    pub product: Vec<usize>,
    /// Every intermediate `I^m` also matches its two-factor product.
    pub stepwise: bool,
    /// The tensor complex is `Q_rΛ•_0(I^n)`.
    pub same_spaces: bool,
}

impl KunnethCheck {
    pub fn holds(&self) -> bool {
        self.direct == self.product && self.stepwise && self.same_spaces
    }
}

/// Builds `Q_rΛ•_0(I^n)` as the `n`-fold tensor power of `P_rΛ•_0(I)`, comparing at each
/// step with the product of the cohomology of the two factors.
pub fn verify_kunneth(n: usize, r: usize) -> Result<KunnethCheck> {
    if n == 0 {
        return Err(FesError::InvalidParameter("Künneth check needs n >= 1".into()));
    }
    let dims = |spaces: &[FormSpace<crate::Rational>]| -> Result<Vec<usize>> {
        Ok(CochainComplex::full(spaces.to_vec(), false, false)?.cohomology_dims()?.dims)
    };
    let interval = zero_trace_complex::<crate::Rational>(RefCell::cube(1), r, SpaceFamily::Pr)?;
    let h1 = dims(&interval)?;
    let mut current = interval.clone();
    let mut product = h1.clone();
    let mut stepwise = true;
    for m in 2..=n {
        let next = (0..=m).map(|k| tensor_spaces(&current, &interval, k)).collect::<Result<Vec<_>>>()?;
        stepwise &= dims(&next)? == kunneth_product(&dims(&current)?, &h1);
        product = kunneth_product(&product, &h1);
        current = next;
    }
    let q = zero_trace_complex::<crate::Rational>(RefCell::cube(n), r, SpaceFamily::Qr)?;
    let mut same_spaces = true;
    for (a, b) in current.iter().zip(&q) {
        same_spaces &= a.same_span(b)?;
    }
    Ok(KunnethCheck { n, r, direct: dims(&current)?, product, stepwise, same_spaces })
}
