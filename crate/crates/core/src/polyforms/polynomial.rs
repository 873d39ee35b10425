use std::collections::BTreeMap;
use std::fmt;

use crate::polyforms::monomial::MultiIndex;
use crate::scalar::Scalar;

/// Sparse multivariate polynomial in `n` variables.
#[derive(Clone, PartialEq)]
pub struct Polynomial<S> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::monomial(MultiIndex::zero(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    pub fn monomial(exps: MultiIndex, c: S) -> Self {
        let nvars = exps.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { nvars, terms }
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(nvars, i), S::one())
    }

    /// `Σ coeffs[e] x_i^e` as a polynomial in `nvars` variables.
    pub fn univariate(nvars: usize, i: usize, coeffs: &[S]) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in coeffs.iter().enumerate() {
            p.add_term(MultiIndex::zero(nvars).with(i, e as u16), c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, S)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &MultiIndex) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn add_term(&mut self, m: MultiIndex, c: S) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &S, other: &Self) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), c.times(v));
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
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.times(c))).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-S::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.product(b), x.times(y));
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.get(i);
            if e > 0 {
                out.add_term(m.with(i, e - 1), c.times(&S::int(e as i64)));
            }
        }
        out
    }

    /// Homogeneous component of degree `s`.
    pub fn homogeneous_part(&self, s: usize) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == s)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn evaluate(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars);
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += &t;
        }
        acc
    }

    /// Composition `p(q_1, …, q_n)` where every `q_i` is a polynomial in a common set of
    /// variables.
    pub fn compose(&self, subs: &[Polynomial<S>]) -> Polynomial<S> {
        self.compose_cached(&mut PowerCache::new(subs.to_vec()))
    }

    /// Composition reusing the powers stored in `cache`.
    pub fn compose_cached(&self, cache: &mut PowerCache<S>) -> Polynomial<S> {
        assert_eq!(cache.subs.len(), self.nvars);
        let target = cache.target;
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.mul(cache.power(i, e as usize));
                }
            }
            out.add_scaled(&S::one(), &t);
        }
        out
    }

    /// `∫_{[0,1]^n} p`.
    pub fn integrate_cube(&self) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut den = S::one();
            for &e in m.exponents() {
                den *= &S::int(e as i64 + 1);
            }
            acc += &c.over(&den);
        }
        acc
    }

    /// `∫` over the unit simplex `{x_i ≥ 0, Σ x_i ≤ 1}`: `∫ x^a = (Π a_i!) / (n + |a|)!`.
    pub fn integrate_simplex(&self) -> S {
        let n = self.nvars as i64;
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            // (Π a_i!) / (n+|a|)! as a product of small ratios.
            let mut num_factors: Vec<i64> = Vec::new();
            for &e in m.exponents() {
                num_factors.extend(1..=e as i64);
            }
            let top = n + m.degree() as i64;
            let mut value = c.clone();
            let mut den_iter = 1..=top;
            for f in num_factors {
                value *= &S::int(f);
                if let Some(d) = den_iter.next() {
                    value /= &S::int(d);
                }
            }
            for d in den_iter {
                value /= &S::int(d);
            }
            acc += &value;
        }
        acc
    }
}

/// Substitution `x_i ↦ q_i` together with the powers `q_i^e` computed so far.
pub struct PowerCache<S> {
    subs: Vec<Polynomial<S>>,
    target: usize,
    powers: Vec<Vec<Polynomial<S>>>,
}

impl<S: Scalar> PowerCache<S> {
    /// All substitutes must share the same number of variables; `target` is that number.
    pub fn with_target(subs: Vec<Polynomial<S>>, target: usize) -> Self {
        assert!(subs.iter().all(|q| q.nvars == target));
        let powers = subs.iter().map(|_| vec![Polynomial::one(target)]).collect();
        Self { subs, target, powers }
    }

    pub fn new(subs: Vec<Polynomial<S>>) -> Self {
        let target = subs.first().map_or(0, |q| q.nvars);
        Self::with_target(subs, target)
    }

    pub fn power(&mut self, i: usize, e: usize) -> &Polynomial<S> {
        while self.powers[i].len() <= e {
            let next = self.powers[i].last().unwrap().mul(&self.subs[i]);
            self.powers[i].push(next);
        }
        &self.powers[i][e]
    }
}

impl<S: Scalar> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "x{}", i + 1)?,
                    _ => write!(f, "x{}^{e}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type P = Polynomial<Rational>;

    fn q(a: i64, b: i64) -> Rational {
        Rational::ratio(a, b)
    }

    #[test]
    fn arithmetic_and_derivative() {
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        let p = x.mul(&x).mul(&y); // x^2 y
        assert_eq!(p.derivative(0), x.mul(&y).scaled(&q(2, 1)));
        assert_eq!(p.derivative(1), x.mul(&x));
        assert_eq!(p.degree(), Some(3));
        assert_eq!(x.sub(&x), P::zero(2));
        assert_eq!(x.add(&y).pow(2).nterms(), 3);
    }

    #[test]
    fn integration_formulas() {
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        assert_eq!(x.mul(&y).integrate_simplex(), q(1, 24));
        assert_eq!(x.mul(&y).integrate_cube(), q(1, 4));
        assert_eq!(P::one(3).integrate_simplex(), q(1, 6));
        assert_eq!(P::var(1, 0).integrate_cube(), q(1, 2));
        // x^2 on the 3-simplex: 2!/5! = 1/60
        assert_eq!(P::var(3, 0).pow(2).integrate_simplex(), q(1, 60));
    }

    #[test]
    fn composition_substitutes() {
        // p(x, y) = x y, substitute x = 1, y = t
        let p = P::var(2, 0).mul(&P::var(2, 1));
        let subs = vec![P::one(1), P::var(1, 0)];
        assert_eq!(p.compose(&subs), P::var(1, 0));
    }

    #[test]
    fn float_instantiation_evaluates() {
        let p = Polynomial::<f64>::univariate(1, 0, &[1.0, -3.0, 2.0]);
        assert_eq!(p.evaluate(&[0.5]), 0.0);
        assert!((p.integrate_cube() - (1.0 - 1.5 + 2.0 / 3.0)).abs() < 1e-12);
    }
}
