use std::collections::HashMap;

use serde::Serialize;

use crate::cells::{faces, make_space, CellComplex, Face, Fes, FormSpace, RefCell, SpaceFamily};
use crate::error::{FesError, Result};
use crate::homology::compatibility_report;
use crate::linalg::Mat;
use crate::polyforms::{AffineMap, FormIndex, MultiIndex, PolyForm, Polynomial};
use crate::scalar::{binomial, Scalar};

/// The forms `f_J`, `g_J` for one nonempty `J ⊆ {0..n−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TntPair<S: Scalar> {
    pub j: FormIndex,
    /// `Π_{i∈J} P(x_i) dx_1 ∧ … ∧ dx_n`.
    pub f: PolyForm<S>,
    /// `Σ_{i∈J} (−1)^i Q(x_i) Π_{J∖i} P(x_j) dx_{[n]∖i}`, with `i` counted from 0.
    pub g: PolyForm<S>,
}

/// Generators of the cohomology of `Q_rΛ•_0(I^n)` in top degree and their primitives.
#[derive(Clone, Debug, PartialEq)]
pub struct TntGenerators<S: Scalar> {
    pub n: usize,
    pub r: usize,
    /// Shifted Legendre polynomial of degree `r` on `[0, 1]`, one variable.
    pub p: Polynomial<S>,
    /// `Q(x) = ∫_0^x P`.
    pub q: Polynomial<S>,
    pub pairs: Vec<TntPair<S>>,
}

fn coefficients<S: Scalar>(p: &Polynomial<S>) -> Vec<S> {
    let deg = p.degree().unwrap_or(0);
    (0..=deg).map(|e| p.coeff(&MultiIndex::new(&[e as u16]))).collect()
}

/// `P_r(x) = Σ_j (−1)^{r+j} C(r,j) C(r+j,j) x^j`.
pub fn shifted_legendre<S: Scalar>(r: usize) -> Polynomial<S> {
    let coeffs: Vec<S> = (0..=r as i64)
        .map(|j| {
            let c = (binomial(r as i64, j) * binomial(r as i64 + j, j)) as i64;
            S::int(if (r as i64 + j) % 2 == 0 { c } else { -c })
        })
        .collect();
    Polynomial::univariate(1, 0, &coeffs)
}

impl<S: Scalar> TntGenerators<S> {
    /// `P(x_i)` as a polynomial in `n` variables.
    pub fn p_at(&self, i: usize) -> Polynomial<S> {
        Polynomial::univariate(self.n, i, &coefficients(&self.p))
    }

    pub fn q_at(&self, i: usize) -> Polynomial<S> {
        Polynomial::univariate(self.n, i, &coefficients(&self.q))
    }

    /// `∫P = 0`, reflection parity of `P`, `Q(0) = Q(1) = 0`, `Q′ = P`, `d g_J = |J| f_J`.
    pub fn invariants_hold(&self) -> bool {
        let one = [S::one()];
        let zero = [S::zero()];
        let reflected = self.p.compose(&[Polynomial::univariate(1, 0, &[S::one(), -S::one()])]);
        let sign = if self.r.is_multiple_of(2) { S::one() } else { -S::one() };
        self.p.integrate_cube().is_zero()
            && reflected == self.p.scaled(&sign)
            && self.q.evaluate(&zero).is_zero()
            && self.q.evaluate(&one).is_zero()
            && self.q.derivative(0) == self.p
            && self
                .pairs
                .iter()
                .all(|t| t.g.exterior_derivative() == t.f.scaled(&S::int(t.j.len() as i64)))
    }
}

pub fn tnt_generators<S: Scalar>(n: usize, r: usize) -> Result<TntGenerators<S>> {
    if r == 0 || n == 0 {
        return Err(FesError::InvalidParameter(format!("generators need n >= 1 and r >= 1, got n={n} r={r}")));
    }
    let p: Polynomial<S> = shifted_legendre(r);
    let pc = coefficients(&p);
    let mut qc = vec![S::zero()];
    for (e, c) in pc.iter().enumerate() {
        qc.push(c.over(&S::int(e as i64 + 1)));
    }
    let q = Polynomial::univariate(1, 0, &qc);
    let mut gens = TntGenerators { n, r, p, q, pairs: Vec::new() };
    for mask in 1u32..(1 << n) {
        let j = FormIndex::from_mask(mask);
        let prod = |skip: Option<usize>| {
            j.elements().filter(|&i| Some(i) != skip).fold(Polynomial::one(n), |acc, i| acc.mul(&gens.p_at(i)))
        };
        let f = PolyForm::term(FormIndex::full(n), prod(None));
        let mut g = PolyForm::zero(n, n - 1);
        for i in j.elements() {
            let mut c = gens.q_at(i).mul(&prod(Some(i)));
            if i % 2 == 1 {
                c = c.neg();
            }
            g.add_term(FormIndex::full(n).remove(i), c);
        }
        gens.pairs.push(TntPair { j, f, g });
    }
    Ok(gens)
}

/// Extends a form on a face of `I^n` to the cube: constant along the pinned directions,
/// times `x_i` or `1 − x_i` for each coordinate pinned to `1` or `0`.
pub fn tnt_extend<S: Scalar>(u: &PolyForm<S>, face: &Face) -> Result<PolyForm<S>> {
    let Face::Cube { parent_dim: n, free, .. } = *face else {
        return Err(FesError::InvalidParameter("face extension needs a cube face".into()));
    };
    if u.nvars() != free.len() {
        return Err(FesError::DimensionMismatch { expected: free.len(), found: u.nvars() });
    }
    let free: Vec<usize> = free.elements().collect();
    let mut weight = Polynomial::one(n);
    for i in 0..n {
        let x = Polynomial::var(n, i);
        match face.pin(i) {
            Some(1) => weight = weight.mul(&x),
            Some(_) => weight = weight.mul(&Polynomial::one(n).sub(&x)),
            None => {}
        }
    }
    let mut out = PolyForm::zero(n, u.degree());
    for (j, p) in u.terms() {
        // the face coordinates keep their order, so no sign arises
        let index = FormIndex::from_elements(&j.elements().map(|e| free[e]).collect::<Vec<_>>());
        let lifted = Polynomial::from_terms(
            n,
            p.terms().map(|(alpha, c)| {
                let mut e = vec![0u16; n];
                for (t, &i) in free.iter().enumerate() {
                    e[i] = alpha.get(t);
                }
                (MultiIndex::new(&e), c.clone())
            }),
        );
        out.add_term(index, lifted.mul(&weight));
    }
    Ok(out)
}

/// `B^k(I^d) = Q_rΛ^k(I^d) + Σ_{dim T = k+1} span{ g̃_J^T }` over the `(k+1)`-faces `T`.
pub fn tnt_space<S: Scalar>(d: usize, k: usize, r: usize) -> Result<FormSpace<S>> {
    let cell = RefCell::cube(d);
    let base: FormSpace<S> = make_space(cell, k, r, SpaceFamily::Qr)?;
    if k >= d {
        return Ok(base);
    }
    let gens = tnt_generators::<S>(k + 1, r)?;
    let mut forms = base.forms();
    for face in faces(&cell, k + 1)? {
        for t in &gens.pairs {
            forms.push(tnt_extend(&t.g, &face)?);
        }
    }
    let bound = forms.iter().filter_map(PolyForm::poly_degree).max().unwrap_or(0).max(base.bound());
    FormSpace::new(cell, k, bound, forms)
}

/// The tensor-product system `Q_rΛ•` on the lattice of `I^n`, completed by the extended
/// primitives `g_J` to a minimal compatible system.
pub fn build_tnt<S: Scalar>(n: usize, r: usize) -> Result<Fes<S>> {
    if n == 0 || r == 0 {
        return Err(FesError::InvalidParameter(format!("build_tnt needs n >= 1 and r >= 1, got n={n} r={r}")));
    }
    let mut cache: HashMap<(usize, usize), FormSpace<S>> = HashMap::new();
    Fes::from_fn(CellComplex::from_reference(RefCell::cube(n)), |_, cell, k| {
        let key = (cell.dim(), k);
        if let Some(s) = cache.get(&key) {
            return Ok(s.clone());
        }
        let s = tnt_space(cell.dim(), k, r)?;
        cache.insert(key, s.clone());
        Ok(s)
    })
}

/// Generators of the symmetry group of `I^n`: swaps of neighbouring coordinates and
/// `x_0 ↦ 1 − x_0`.
pub fn cube_symmetry_generators<S: Scalar>(n: usize) -> Vec<AffineMap<S>> {
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut m = Mat::identity(n);
        m[(i, i)] = S::zero();
        m[(i + 1, i + 1)] = S::zero();
        m[(i, i + 1)] = S::one();
        m[(i + 1, i)] = S::one();
        out.push(AffineMap::new(m, vec![S::zero(); n]).expect("square"));
    }
    if n > 0 {
        let mut m = Mat::identity(n);
        m[(0, 0)] = -S::one();
        let mut b = vec![S::zero(); n];
        b[0] = S::one();
        out.push(AffineMap::new(m, b).expect("square"));
    }
    out
}

/// Every space on the top cube is mapped onto itself by the cube symmetries.
pub fn top_spaces_symmetric<S: Scalar>(fes: &Fes<S>) -> Result<bool> {
    let top = fes.top_cell();
    let n = fes.complex().cell(top).dim();
    for map in cube_symmetry_generators::<S>(n) {
        for s in fes.spaces(top) {
            if !s.pulled_back(&map)?.same_span(s)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Everything asserted about the tensor-product system on `I^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TntCheck {
    pub n: usize,
    pub r: usize,
    pub element_system: bool,
    pub extensions: bool,
    pub locally_exact: bool,
    /// `dim B^k_0(I^n)`.
    pub dims: Vec<usize>,
    /// `dim Q_rΛ^k_0(I^n)`, plus `2^n − 1` for `k = n − 1`.
    pub expected: Vec<usize>,
    pub generators: bool,
    pub symmetric: bool,
}

impl TntCheck {
    pub fn holds(&self) -> bool {
        self.element_system
            && self.extensions
            && self.locally_exact
            && self.dims == self.expected
            && self.generators
            && self.symmetric
    }
}

pub fn verify_tnt(n: usize, r: usize) -> Result<TntCheck> {
    let fes = build_tnt::<crate::Rational>(n, r)?;
    let report = compatibility_report(&fes)?;
    let top = fes.top_cell();
    let dims: Vec<usize> = (0..=n).map(|k| fes.boundary_restricted(top, k).dim()).collect();
    let mut expected = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let q = make_space::<crate::Rational>(RefCell::cube(n), k, r, SpaceFamily::Qr)?.boundary_restricted().dim();
        expected.push(if k + 1 == n { q + (1 << n) - 1 } else { q });
    }
    Ok(TntCheck {
        n,
        r,
        element_system: fes.is_element_system(),
        extensions: report.has_extensions(),
        locally_exact: report.locally_exact(),
        dims,
        expected,
        generators: tnt_generators::<crate::Rational>(n, r)?.invariants_hold(),
        symmetric: top_spaces_symmetric(&fes)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::int(n)
    }

    #[test]
    fn first_generators() {
        let g = tnt_generators::<Rational>(2, 1).unwrap();
        assert_eq!(g.p, Polynomial::univariate(1, 0, &[q(-1), q(2)]));
        assert_eq!(g.q, Polynomial::univariate(1, 0, &[q(0), q(-1), q(1)]));
        let both = g.pairs.iter().find(|t| t.j.len() == 2).unwrap();
        let mut expected = PolyForm::zero(2, 1);
        expected.add_term(FormIndex::from_elements(&[1]), g.q_at(0).mul(&g.p_at(1)));
        expected.add_term(FormIndex::from_elements(&[0]), g.q_at(1).mul(&g.p_at(0)).neg());
        assert_eq!(both.g, expected);
        assert_eq!(both.g.exterior_derivative(), both.f.scaled(&q(2)));
    }

    #[test]
    fn generator_invariants() {
        for n in 1..=3 {
            for r in 1..=3 {
                assert!(tnt_generators::<Rational>(n, r).unwrap().invariants_hold(), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn primitives_vanish_on_the_boundary() {
        for n in 1..=3 {
            let g = tnt_generators::<Rational>(n, 2).unwrap();
            for face in faces(&RefCell::cube(n), n - 1).unwrap() {
                let map = face.inclusion::<Rational>();
                for t in &g.pairs {
                    assert!(map.pullback(&t.g).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn edge_extension() {
        let g = tnt_generators::<Rational>(1, 1).unwrap();
        let edge = faces(&RefCell::cube(2), 1)
            .unwrap()
            .into_iter()
            .find(|f| f.pin(1) == Some(0))
            .unwrap();
        let u = PolyForm::function(g.q.clone());
        let ext = tnt_extend(&u, &edge).unwrap();
        let x = Polynomial::var(2, 0);
        let q2 = x.mul(&x).sub(&x);
        let expected = q2.mul(&Polynomial::one(2).sub(&Polynomial::var(2, 1)));
        assert_eq!(ext, PolyForm::function(expected));
        let whole = faces(&RefCell::cube(2), 2).unwrap()[0];
        let v = PolyForm::function(Polynomial::<Rational>::var(2, 1));
        assert_eq!(tnt_extend(&v, &whole).unwrap(), v);
    }

    #[test]
    fn extension_traces() {
        for n in 2..=3 {
            for d in 1..n {
                let g = tnt_generators::<Rational>(d, 2).unwrap();
                let all = faces(&RefCell::cube(n), d).unwrap();
                for face in &all {
                    for t in &g.pairs {
                        let ext = tnt_extend(&t.g, face).unwrap();
                        for other in &all {
                            let tr = other.inclusion::<Rational>().pullback(&ext).unwrap();
                            if other == face {
                                assert_eq!(tr, t.g);
                            } else {
                                assert!(tr.is_zero());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_system_on_the_square() {
        let c = verify_tnt(2, 1).unwrap();
        assert!(c.holds(), "{c:?}");
        // Q_1Λ^1_0(I^2) = 0, so the three generators are all of B^1_0
        assert_eq!(c.dims[1], 3);
    }

    #[test]
    fn symmetry_detects_a_lopsided_space() {
        let mut fes = build_tnt::<Rational>(2, 1).unwrap();
        let top = fes.top_cell();
        let x = PolyForm::function(Polynomial::<Rational>::var(2, 0));
        let lop = FormSpace::new(RefCell::cube(2), 0, 1, vec![PolyForm::function(Polynomial::one(2)), x]).unwrap();
        fes.replace(top, 0, lop).unwrap();
        assert!(!top_spaces_symmetric(&fes).unwrap());
    }
}
