use std::collections::BTreeMap;
use std::fmt;

use crate::cells::{RefCell, Shape};
use crate::error::{FesError, Result};
use crate::polyforms::monomial::{FormIndex, MultiIndex};
use crate::polyforms::polynomial::Polynomial;
use crate::scalar::Scalar;

/// A differential `k`-form `Σ_J p_J dx_J` on `ℝ^n` with polynomial coefficients.
///
/// Index sets are stored increasing; zero coefficients are never stored. The degree may be
/// `n + 1` only for the zero form produced by differentiating a top form.
#[derive(Clone, PartialEq)]
pub struct PolyForm<S> {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<FormIndex, Polynomial<S>>,
}

/// Selector for [`hodge_and_codifferential`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HodgeOp {
    Star,
    Delta,
}

fn sign<S: Scalar>(odd: bool) -> S {
    if odd {
        -S::one()
    } else {
        S::one()
    }
}

impl<S: Scalar> PolyForm<S> {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        Self { nvars, degree, terms: BTreeMap::new() }
    }

    /// `p dx_J`.
    pub fn term(index: FormIndex, p: Polynomial<S>) -> Self {
        let mut u = Self::zero(p.nvars(), index.len());
        u.add_term(index, p);
        u
    }

    /// `c x^alpha dx_J`.
    pub fn monomial(index: FormIndex, alpha: MultiIndex, c: S) -> Self {
        Self::term(index, Polynomial::monomial(alpha, c))
    }

    /// A 0-form.
    pub fn function(p: Polynomial<S>) -> Self {
        Self::term(FormIndex::EMPTY, p)
    }

    /// The constant form `dx_J`.
    pub fn basic(nvars: usize, index: FormIndex) -> Self {
        Self::term(index, Polynomial::one(nvars))
    }

    /// `dx_1 ∧ … ∧ dx_n`.
    pub fn volume(nvars: usize) -> Self {
        Self::basic(nvars, FormIndex::full(nvars))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormIndex, &Polynomial<S>)> {
        self.terms.iter()
    }

    pub fn component(&self, index: FormIndex) -> Polynomial<S> {
        self.terms.get(&index).cloned().unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree of a coefficient; `None` for the zero form.
    pub fn poly_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(Polynomial::degree).max()
    }

    pub fn add_term(&mut self, index: FormIndex, p: Polynomial<S>) {
        assert_eq!(index.len(), self.degree, "index set of the wrong size");
        assert_eq!(p.nvars(), self.nvars);
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(index).or_insert_with(|| Polynomial::zero(self.nvars));
        slot.add_scaled(&S::one(), &p);
        if slot.is_zero() {
            self.terms.remove(&index);
        }
    }

    pub fn add_scaled(&mut self, c: &S, other: &Self) {
        assert_eq!((self.nvars, self.degree), (other.nvars, other.degree));
        for (j, p) in &other.terms {
            self.add_term(*j, p.scaled(c));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&S::one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-S::one(), other);
        out
    }

    pub fn scaled(&self, c: &S) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        out.add_scaled(c, self);
        out
    }

    /// Multiplies every coefficient by the polynomial `p`.
    pub fn mul_poly(&self, p: &Polynomial<S>) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        for (j, q) in &self.terms {
            out.add_term(*j, q.mul(p));
        }
        out
    }

    /// Homogeneous component of polynomial degree `s`.
    pub fn homogeneous_part(&self, s: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        for (j, p) in &self.terms {
            out.add_term(*j, p.homogeneous_part(s));
        }
        out
    }

    /// Exterior derivative. Differentiating a top form yields the zero `(n+1)`-form.
    pub fn exterior_derivative(&self) -> Self {
        let mut out = Self::zero(self.nvars, self.degree + 1);
        for (j, p) in &self.terms {
            for i in (0..self.nvars).filter(|&i| !j.contains(i)) {
                let dp = p.derivative(i);
                if dp.is_zero() {
                    continue;
                }
                out.add_term(j.insert(i), dp.scaled(&sign(j.count_below(i) % 2 == 1)));
            }
        }
        out
    }

    /// Koszul operator: contraction with the radial field `x ↦ x`.
    pub fn koszul(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(FesError::ZeroFormOperator { op: "koszul" });
        }
        let mut out = Self::zero(self.nvars, self.degree - 1);
        for (j, p) in &self.terms {
            for (l, i) in j.elements().enumerate() {
                let xp = p.mul(&Polynomial::var(self.nvars, i));
                out.add_term(j.remove(i), xp.scaled(&sign(l % 2 == 1)));
            }
        }
        Ok(out)
    }

    /// Poincaré homotopy with base point at the origin: `Σ_s κ u_s / (s + k)`.
    pub fn homotopy(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(FesError::ZeroFormOperator { op: "homotopy" });
        }
        let mut out = Self::zero(self.nvars, self.degree - 1);
        for s in 0..=self.poly_degree().unwrap_or(0) {
            let piece = self.homogeneous_part(s);
            if piece.is_zero() {
                continue;
            }
            let weight = S::one().over(&S::int((s + self.degree) as i64));
            out.add_scaled(&weight, &piece.koszul()?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(FesError::AmbientMismatch { left: self.nvars, right: other.nvars });
        }
        if self.degree + other.degree > self.nvars {
            return Err(FesError::DegreeOverflow {
                left: self.degree,
                right: other.degree,
                dim: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                let s = a.wedge_sign(*b);
                if s != 0 {
                    out.add_term(a.union(*b), p.mul(q).scaled(&sign(s < 0)));
                }
            }
        }
        Ok(out)
    }

    /// Euclidean Hodge star: `⋆ dx_J = ε(J, J^c) dx_{J^c}`.
    pub fn hodge_star(&self) -> Self {
        let n = self.nvars;
        let mut out = Self::zero(n, n - self.degree.min(n));
        for (j, p) in &self.terms {
            let c = j.complement(n);
            out.add_term(c, p.scaled(&sign(j.wedge_sign(c) < 0)));
        }
        out
    }

    /// Codifferential `δ = (-1)^{n(k+1)+1} ⋆ d ⋆`; the zero 0-form on functions.
    pub fn codifferential(&self) -> Self {
        if self.degree == 0 {
            return Self::zero(self.nvars, 0);
        }
        let n = self.nvars;
        let odd = (n * (self.degree + 1) + 1) % 2 == 1;
        self.hodge_star().exterior_derivative().hodge_star().scaled(&sign(odd))
    }

    /// Pointwise Euclidean inner product `Σ_J u_J v_J`.
    pub fn pointwise_dot(&self, other: &Self) -> Polynomial<S> {
        let mut out = Polynomial::zero(self.nvars);
        for (j, p) in &self.terms {
            if let Some(q) = other.terms.get(j) {
                out.add_scaled(&S::one(), &p.mul(q));
            }
        }
        out
    }

    /// `∫_cell u` for a top-degree form given in the cell's own coordinates.
    pub fn integrate(&self, cell: &RefCell) -> Result<S> {
        if self.nvars != cell.dim() || self.degree != cell.dim() {
            return Err(FesError::IntegrationDegree { degree: self.degree, dim: cell.dim() });
        }
        let p = self.component(FormIndex::full(self.nvars));
        Ok(match cell.shape() {
            Shape::Cube => p.integrate_cube(),
            Shape::Simplex => p.integrate_simplex(),
        })
    }
}

/// Hodge star or codifferential, chosen by `which`.
pub fn hodge_and_codifferential<S: Scalar>(u: &PolyForm<S>, which: HodgeOp) -> PolyForm<S> {
    match which {
        HodgeOp::Star => u.hodge_star(),
        HodgeOp::Delta => u.codifferential(),
    }
}

impl<S: Scalar> fmt::Debug for PolyForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for PolyForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(j, p)| format!("[{p}] {j:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type F = PolyForm<Rational>;
    type P = Polynomial<Rational>;

    fn q(a: i64, b: i64) -> Rational {
        Rational::ratio(a, b)
    }

    fn dx(n: usize, els: &[usize]) -> F {
        F::basic(n, FormIndex::from_elements(els))
    }

    fn x(n: usize, i: usize) -> P {
        P::var(n, i)
    }

    #[test]
    fn derivative_examples() {
        // d(x dy) = dx ∧ dy
        assert_eq!(dx(2, &[1]).mul_poly(&x(2, 0)).exterior_derivative(), dx(2, &[0, 1]));
        assert!(F::function(P::constant(2, q(3, 1))).exterior_derivative().is_zero());
        let u = F::function(x(2, 0).mul(&x(2, 0)).mul(&x(2, 1)));
        let expected = dx(2, &[0])
            .mul_poly(&x(2, 0).mul(&x(2, 1)).scaled(&q(2, 1)))
            .add(&dx(2, &[1]).mul_poly(&x(2, 0).mul(&x(2, 0))));
        assert_eq!(u.exterior_derivative(), expected);
    }

    #[test]
    fn koszul_examples() {
        let expected = dx(2, &[1]).mul_poly(&x(2, 0)).sub(&dx(2, &[0]).mul_poly(&x(2, 1)));
        assert_eq!(dx(2, &[0, 1]).koszul().unwrap(), expected);
        assert_eq!(dx(1, &[0]).koszul().unwrap(), F::function(x(1, 0)));
        assert!(F::function(x(1, 0)).koszul().is_err());
    }

    #[test]
    fn homotopy_examples() {
        assert_eq!(dx(1, &[0]).homotopy().unwrap(), F::function(x(1, 0)));
        let h = dx(2, &[0, 1]).homotopy().unwrap();
        assert_eq!(h, dx(2, &[0, 1]).koszul().unwrap().scaled(&q(1, 2)));
        let u = dx(2, &[1]).mul_poly(&x(2, 0));
        let back = u.homotopy().unwrap().exterior_derivative().add(&u.exterior_derivative().homotopy().unwrap());
        assert_eq!(back, u);
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(dx(2, &[0]).wedge(&dx(2, &[1])).unwrap(), dx(2, &[0, 1]));
        assert_eq!(dx(2, &[1]).wedge(&dx(2, &[0])).unwrap(), dx(2, &[0, 1]).scaled(&q(-1, 1)));
        let a = dx(2, &[0]).mul_poly(&x(2, 0));
        let b = dx(2, &[1]).mul_poly(&x(2, 1));
        assert_eq!(a.wedge(&b).unwrap(), dx(2, &[0, 1]).mul_poly(&x(2, 0).mul(&x(2, 1))));
        assert!(matches!(dx(2, &[0, 1]).wedge(&dx(2, &[0])), Err(FesError::DegreeOverflow { .. })));
    }

    #[test]
    fn star_and_codifferential_examples() {
        assert_eq!(F::function(P::one(2)).hodge_star(), dx(2, &[0, 1]));
        let u = dx(1, &[0]).mul_poly(&x(1, 0));
        assert_eq!(u.codifferential(), F::function(P::constant(1, q(-1, 1))));
        assert!(dx(3, &[2]).codifferential().is_zero());
        assert_eq!(
            hodge_and_codifferential(&dx(3, &[1]), HodgeOp::Star),
            dx(3, &[0, 2]).scaled(&q(-1, 1))
        );
    }

    #[test]
    fn integration_examples() {
        let square = RefCell::cube(2);
        assert_eq!(dx(2, &[0, 1]).integrate(&square).unwrap(), q(1, 1));
        assert_eq!(dx(1, &[0]).mul_poly(&x(1, 0)).integrate(&RefCell::cube(1)).unwrap(), q(1, 2));
        let tri = RefCell::simplex(2);
        assert_eq!(
            dx(2, &[0, 1]).mul_poly(&x(2, 0).mul(&x(2, 1))).integrate(&tri).unwrap(),
            q(1, 24)
        );
        assert!(dx(2, &[0]).integrate(&square).is_err());
    }

    #[test]
    fn top_form_derivative_is_zero_of_next_degree() {
        let d = dx(2, &[0, 1]).mul_poly(&x(2, 0)).exterior_derivative();
        assert!(d.is_zero());
        assert_eq!(d.degree(), 3);
    }
}
