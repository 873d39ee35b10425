//! Polynomial data spaces of mixed virtual elements, their dimension identities, and exact
//! wedge pairings between form spaces.

use serde::Serialize;

use crate::cells::{make_space, FormSpace, RefCell, SpaceFamily};
use crate::error::{FesError, Result};
use crate::linalg::{rank_and_echelon, Mat};
use crate::polyforms::{FormIndex, MultiIndex, PolyForm, Polynomial};
use crate::scalar::Scalar;

/// `Z^k(T) = {f ∈ P_{r−1}Λ^k(T) : d⋆f = 0}`, and `Z^{dim T}(T) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSpace<S: Scalar> {
    pub cell: RefCell,
    pub k: usize,
    pub r: usize,
    pub space: FormSpace<S>,
}

impl<S: Scalar> ZSpace<S> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Every basis form is annihilated by the codifferential.
    pub fn members_are_coclosed(&self) -> bool {
        self.space.forms().iter().all(|f| f.codifferential().is_zero())
    }
}

pub fn z_space<S: Scalar>(cell: RefCell, r: usize, k: usize) -> Result<ZSpace<S>> {
    let n = cell.dim();
    if r == 0 {
        return Err(FesError::InvalidParameter("Z-spaces need r >= 1".into()));
    }
    if k > n {
        return Err(FesError::FormDegree { degree: k, dim: n });
    }
    let full: FormSpace<S> = make_space(cell, k, r - 1, SpaceFamily::Pr)?;
    if k == n {
        return Ok(ZSpace { cell, k, r, space: FormSpace::zero(cell, k, r - 1) });
    }
    let basis = full.basis();
    // the codifferential lowers both degrees; k = 0 maps to the zero 0-form
    let target = crate::cells::FormBasis::new(n, k.saturating_sub(1), r - 1);
    let images = full
        .vectors()
        .iter()
        .map(|v| target.encode(&basis.decode(v).codifferential()))
        .collect::<Result<Vec<_>>>()?;
    let space = full.subspace().kernel_of_map(&images, target.dim());
    Ok(ZSpace { cell, k, r, space: FormSpace::from_subspace(cell, k, r - 1, space)? })
}

/// Both sides of `dim Z^k + dim Z^{k−1} = dim P_r^-Λ^{n−k}`, with `1` in place of `dim Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VemCheck {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub lhs: usize,
    pub rhs: usize,
}

impl VemCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Computed on the reference simplex; every count involved is shape independent.
pub fn verify_vem_dim_identity(n: usize, r: usize, k: usize) -> Result<VemCheck> {
    if k > n {
        return Err(FesError::FormDegree { degree: k, dim: n });
    }
    let cell = RefCell::simplex(n);
    let top = if k == n { 1 } else { z_space::<crate::Rational>(cell, r, k)?.dim() };
    let below = if k == 0 { 0 } else { z_space::<crate::Rational>(cell, r, k - 1)?.dim() };
    let rhs = make_space::<crate::Rational>(cell, n - k, r, SpaceFamily::PrMinus)?.dim();
    Ok(VemCheck { n, r, k, lhs: top + below, rhs })
}

/// `(∫_T u_i ∧ v_j)_{ij}` over the bases of `u` and `v`.
pub fn pairing_matrix<S: Scalar>(u: &FormSpace<S>, v: &FormSpace<S>) -> Result<Mat<S>> {
    let cell = u.cell();
    if v.cell() != cell {
        return Err(FesError::InvalidParameter("pairing needs spaces on the same cell".into()));
    }
    if u.degree() + v.degree() != cell.dim() {
        return Err(FesError::DegreeOverflow { left: u.degree(), right: v.degree(), dim: cell.dim() });
    }
    let (us, vs) = (u.forms(), v.forms());
    let mut m = Mat::zeros(us.len(), vs.len());
    for (i, a) in us.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            m[(i, j)] = a.wedge(b)?.integrate(&cell)?;
        }
    }
    Ok(m)
}

/// Size and rank of a pairing matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingCheck {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

impl PairingCheck {
    pub fn invertible(&self) -> bool {
        self.rows == self.cols && self.rank == self.rows
    }
}

/// Pairs `P_rΛ^k_0(I^n)` with `P_{r−2(n−k)}Λ^{n−k}(I^n)`; the second space is zero when
/// `r < 2(n−k)`.
pub fn verify_zero_dual(n: usize, r: usize, k: usize) -> Result<PairingCheck> {
    if k > n {
        return Err(FesError::FormDegree { degree: k, dim: n });
    }
    let cell = RefCell::cube(n);
    let u = make_space::<crate::Rational>(cell, k, r, SpaceFamily::Pr)?.boundary_restricted();
    let (rows, cols, rank) = match r.checked_sub(2 * (n - k)) {
        Some(s) => {
            let v = make_space::<crate::Rational>(cell, n - k, s, SpaceFamily::Pr)?;
            let m = pairing_matrix(&u, &v)?;
            (m.rows(), m.cols(), rank_and_echelon(&m).0)
        }
        None => (u.dim(), 0, 0),
    };
    Ok(PairingCheck { n, r, k, rows, cols, rank })
}

/// `p / (x_i (1 − x_i))`, or `None` if the division is not exact.
fn divide_bubble<S: Scalar>(p: &Polynomial<S>, i: usize) -> Option<Polynomial<S>> {
    use std::collections::BTreeMap;
    let n = p.nvars();
    // coefficients in x_i, grouped by the other exponents
    let mut rows: BTreeMap<Vec<u16>, Vec<S>> = BTreeMap::new();
    for (alpha, c) in p.terms() {
        let e = alpha.get(i) as usize;
        if e == 0 {
            return None;
        }
        let mut rest = alpha.exponents().to_vec();
        rest[i] = 0;
        let row = rows.entry(rest).or_default();
        if row.len() < e {
            row.resize(e, S::zero());
        }
        row[e - 1] = c.clone();
    }
    let mut out = Polynomial::zero(n);
    for (rest, c) in rows {
        // (1 − x) q = c: q_e = c_0 + … + c_e, and the full sum must vanish
        let mut acc = S::zero();
        for (e, ce) in c.iter().enumerate() {
            acc += ce;
            if e + 1 < c.len() && !acc.is_zero() {
                let mut m = rest.clone();
                m[i] = e as u16;
                out.add_term(MultiIndex::new(&m), acc.clone());
            }
        }
        if !acc.is_zero() {
            return None;
        }
    }
    Some(out)
}

/// For a trace-free `u ∈ P_rΛ^k_0(I^n)` write `u_J = Π_{i∉J} x_i(1 − x_i) w_J`; returns
/// `v = Σ_J ε_J w_J dx_{J′}` with `ε_J dx_J ∧ dx_{J′}` the volume form, so that
/// `∫ u ∧ v = Σ_J ∫ Π x_i(1 − x_i) w_J² > 0` unless `u = 0`.
pub fn zero_dual_element<S: Scalar>(u: &PolyForm<S>) -> Result<PolyForm<S>> {
    let n = u.nvars();
    let k = u.degree();
    let mut v = PolyForm::zero(n, n - k);
    for (j, p) in u.terms() {
        let mut w = p.clone();
        for i in j.complement(n).elements() {
            w = divide_bubble(&w, i).ok_or_else(|| {
                FesError::InvalidParameter("form does not vanish on the boundary of the cube".into())
            })?;
        }
        let eps = if volume_sign(n, *j) < 0 { -S::one() } else { S::one() };
        v.add_term(j.complement(n), w.scaled(&eps));
    }
    Ok(v)
}

/// `ε_J` with `ε_J dx_J ∧ dx_{J′} = dx_1 ∧ … ∧ dx_n`.
pub fn volume_sign(n: usize, j: FormIndex) -> i8 {
    j.wedge_sign(j.complement(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn small_z_spaces() {
        let t = RefCell::simplex(2);
        let z0 = z_space::<Rational>(t, 1, 0).unwrap();
        assert_eq!(z0.dim(), 1);
        let z1 = z_space::<Rational>(t, 1, 1).unwrap();
        assert_eq!(z1.dim(), 2);
        assert!(z1.members_are_coclosed());
        assert!(z_space::<Rational>(t, 3, 2).unwrap().space.is_zero());
        // P_1Λ^1 in 2D: 6 forms, codifferential onto constants P_0Λ^0
        assert_eq!(z_space::<Rational>(t, 2, 1).unwrap().dim(), 5);
    }

    #[test]
    fn identities_small() {
        assert_eq!(verify_vem_dim_identity(2, 1, 1).unwrap(), VemCheck { n: 2, r: 1, k: 1, lhs: 3, rhs: 3 });
        assert_eq!(verify_vem_dim_identity(2, 1, 2).unwrap(), VemCheck { n: 2, r: 1, k: 2, lhs: 3, rhs: 3 });
        assert!(verify_vem_dim_identity(3, 2, 1).unwrap().holds());
    }

    #[test]
    fn pairing_on_the_interval() {
        let i = RefCell::cube(1);
        let dx = FormSpace::<Rational>::new(i, 1, 0, vec![PolyForm::volume(1)]).unwrap();
        let one = make_space::<Rational>(i, 0, 0, SpaceFamily::Pr).unwrap();
        let m = pairing_matrix(&dx, &one).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert_eq!(m[(0, 0)], Rational::int(1));
        assert!(pairing_matrix(&dx, &dx).is_err());
        // a 1×2 pairing is rank deficient, not an error
        let lin = make_space::<Rational>(i, 0, 1, SpaceFamily::Pr).unwrap();
        let bubble = make_space::<Rational>(i, 1, 2, SpaceFamily::Pr).unwrap().boundary_restricted();
        let m = pairing_matrix(&bubble, &lin).unwrap();
        assert_eq!((m.rows(), m.cols(), rank_and_echelon(&m).0), (3, 2, 2));
    }

    #[test]
    fn bubble_division() {
        let x = Polynomial::<Rational>::var(2, 0);
        let y = Polynomial::<Rational>::var(2, 1);
        let b = x.mul(&Polynomial::one(2).sub(&x));
        let w = y.mul(&y).add(&x);
        assert_eq!(divide_bubble(&b.mul(&w), 0), Some(w));
        assert_eq!(divide_bubble(&x, 0), None);
        assert_eq!(divide_bubble(&y, 0), None);
    }

    #[test]
    fn dual_elements_pair_positively() {
        for (n, r, k) in [(1, 3, 0), (2, 4, 1), (2, 3, 2), (2, 5, 0)] {
            let u = make_space::<Rational>(RefCell::cube(n), k, r, SpaceFamily::Pr).unwrap().boundary_restricted();
            for f in u.forms() {
                let v = zero_dual_element(&f).unwrap();
                assert!(v.poly_degree().unwrap_or(0) + 2 * (n - k) <= r);
                let s = f.wedge(&v).unwrap().integrate(&RefCell::cube(n)).unwrap();
                assert!(s > Rational::int(0), "n={n} r={r} k={k}");
            }
        }
    }
}
