use std::collections::HashMap;

use crate::error::{FesError, Result};
use crate::linalg::SparseVec;
use crate::polyforms::{monomial_count, AffineMap, FormIndex, MultiIndex, PolyForm, Polynomial};
use crate::scalar::{binomial, Scalar};

/// Coordinates on the monomial forms `x^α dx_J` in `n` variables, form degree `k`, and
/// polynomial degree at most `bound`.
///
/// The index of `x^α dx_J` is `rank(α) · C(n,k) + rank(J)`: monomials in graded order
/// first, index sets lexicographically within. The index does not depend on `bound`, so
/// raising the bound only enlarges the ambient space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormBasis {
    nvars: usize,
    degree: usize,
    bound: usize,
}

impl FormBasis {
    pub fn new(nvars: usize, degree: usize, bound: usize) -> Self {
        Self { nvars, degree, bound }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Number of index sets `J`.
    pub fn index_sets(&self) -> usize {
        binomial(self.nvars as i64, self.degree as i64) as usize
    }

    pub fn dim(&self) -> usize {
        monomial_count(self.nvars, self.bound) * self.index_sets()
    }

    /// Indices of all monomial forms of polynomial degree below `s`.
    pub fn degree_below(&self, s: usize) -> std::ops::Range<usize> {
        let count = if s == 0 { 0 } else { monomial_count(self.nvars, s - 1) };
        0..count * self.index_sets()
    }

    pub fn index(&self, j: FormIndex, alpha: &MultiIndex) -> usize {
        alpha.rank() * self.index_sets() + j.rank(self.nvars)
    }

    pub fn element(&self, index: usize) -> (FormIndex, MultiIndex) {
        let sets = self.index_sets();
        (
            FormIndex::unrank(self.nvars, self.degree, index % sets),
            MultiIndex::unrank(self.nvars, index / sets),
        )
    }

    pub fn encode<S: Scalar>(&self, u: &PolyForm<S>) -> Result<SparseVec<S>> {
        if u.nvars() != self.nvars {
            return Err(FesError::AmbientMismatch { left: self.nvars, right: u.nvars() });
        }
        if u.degree() != self.degree {
            return Err(FesError::FormDegree { degree: u.degree(), dim: self.degree });
        }
        if let Some(d) = u.poly_degree().filter(|&d| d > self.bound) {
            return Err(FesError::DegreeBound { degree: d, bound: self.bound });
        }
        let mut entries = Vec::new();
        for (j, p) in u.terms() {
            for (alpha, c) in p.terms() {
                entries.push((self.index(*j, alpha), c.clone()));
            }
        }
        Ok(SparseVec::from_entries(entries))
    }

    pub fn decode<S: Scalar>(&self, v: &SparseVec<S>) -> PolyForm<S> {
        let mut u = PolyForm::zero(self.nvars, self.degree);
        for (i, c) in v.iter() {
            let (j, alpha) = self.element(i);
            u.add_term(j, Polynomial::monomial(alpha, c.clone()));
        }
        u
    }

    /// Exterior derivative in coordinates; the result lives in the degree `k+1` basis with
    /// the same bound.
    pub fn derivative<S: Scalar>(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let next = FormBasis::new(self.nvars, self.degree + 1, self.bound);
        let mut entries = Vec::new();
        for (idx, c) in v.iter() {
            let (j, alpha) = self.element(idx);
            for i in (0..self.nvars).filter(|&i| !j.contains(i)) {
                let e = alpha.get(i);
                if e == 0 {
                    continue;
                }
                let mut coeff = c.times(&S::int(e as i64));
                if j.count_below(i) % 2 == 1 {
                    coeff = -coeff;
                }
                entries.push((next.index(j.insert(i), &alpha.with(i, e - 1)), coeff));
            }
        }
        SparseVec::from_entries(entries)
    }

    /// `∫` of a top-degree coordinate vector over the cube or simplex.
    pub fn integral<S: Scalar>(&self, v: &SparseVec<S>, cube: bool) -> S {
        assert_eq!(self.degree, self.nvars, "integration needs top-degree forms");
        let p = self.decode(v).component(FormIndex::full(self.nvars));
        if cube {
            p.integrate_cube()
        } else {
            p.integrate_simplex()
        }
    }
}

/// Pullback along an affine map, applied to coordinate vectors with a per-coordinate cache.
pub struct PullbackMap<S> {
    map: AffineMap<S>,
    source: FormBasis,
    target: FormBasis,
    axis: Option<Vec<AxisRow<S>>>,
    cache: HashMap<usize, SparseVec<S>>,
}

/// Row `i` of an axis-aligned map: `x_i = t_col` or `x_i = value`.
#[derive(Clone)]
enum AxisRow<S> {
    Free(usize),
    Pinned(S),
}

impl<S: Scalar> PullbackMap<S> {
    /// Pulls back degree-`k` forms from the map's target space to its source space, keeping
    /// the polynomial degree bound.
    pub fn new(map: &AffineMap<S>, degree: usize, bound: usize) -> Self {
        let source = FormBasis::new(map.target_dim(), degree, bound);
        let target = FormBasis::new(map.source_dim(), degree, bound);
        Self { axis: axis_rows(map), map: map.clone(), source, target, cache: HashMap::new() }
    }

    pub fn target_basis(&self) -> FormBasis {
        self.target
    }

    fn column(&mut self, idx: usize) -> SparseVec<S> {
        if let Some(v) = self.cache.get(&idx) {
            return v.clone();
        }
        let (j, alpha) = self.source.element(idx);
        let image = match &self.axis {
            Some(rows) => axis_pullback(rows, &self.target, j, &alpha),
            None => {
                let u = PolyForm::monomial(j, alpha, S::one());
                let pulled = self.map.pullback(&u).expect("dimensions checked at construction");
                self.target.encode(&pulled).expect("pullback keeps the degree bound")
            }
        };
        self.cache.insert(idx, image.clone());
        image
    }

    pub fn apply(&mut self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut out = SparseVec::new();
        for (idx, c) in v.iter() {
            let col = self.column(idx);
            out.add_scaled(c, &col);
        }
        out
    }
}

fn axis_rows<S: Scalar>(map: &AffineMap<S>) -> Option<Vec<AxisRow<S>>> {
    let a = map.matrix();
    let mut rows = Vec::with_capacity(a.rows());
    let mut used = vec![false; a.cols()];
    for i in 0..a.rows() {
        let nonzero: Vec<usize> = (0..a.cols()).filter(|&j| !a[(i, j)].is_zero()).collect();
        match nonzero.as_slice() {
            [] => rows.push(AxisRow::Pinned(map.offset()[i].clone())),
            [j] if a[(i, *j)].is_one() && map.offset()[i].is_zero() && !used[*j] => {
                used[*j] = true;
                rows.push(AxisRow::Free(*j));
            }
            _ => return None,
        }
    }
    used.iter().all(|&u| u).then_some(rows)
}

fn axis_pullback<S: Scalar>(
    rows: &[AxisRow<S>],
    target: &FormBasis,
    j: FormIndex,
    alpha: &MultiIndex,
) -> SparseVec<S> {
    let mut coeff = S::one();
    let mut beta = MultiIndex::zero(target.nvars());
    let mut cols = Vec::with_capacity(j.len());
    for (i, row) in rows.iter().enumerate() {
        let e = alpha.get(i);
        match row {
            AxisRow::Pinned(value) => {
                if j.contains(i) {
                    return SparseVec::new();
                }
                for _ in 0..e {
                    coeff *= value;
                }
                if coeff.is_zero() {
                    return SparseVec::new();
                }
            }
            AxisRow::Free(col) => {
                beta = beta.with(*col, e);
                if j.contains(i) {
                    cols.push(*col);
                }
            }
        }
    }
    // sign of the permutation sorting the images of J
    let inversions = (0..cols.len())
        .flat_map(|a| (a + 1..cols.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| cols[a] > cols[b])
        .count();
    if inversions % 2 == 1 {
        coeff = -coeff;
    }
    let l = FormIndex::from_elements(&cols);
    SparseVec::from_entries(vec![(target.index(l, &beta), coeff)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{faces, RefCell};
    use crate::Rational;

    type F = PolyForm<Rational>;

    #[test]
    fn encode_decode_roundtrip() {
        let b = FormBasis::new(3, 1, 4);
        for idx in 0..b.dim() {
            let v = SparseVec::<Rational>::unit(idx);
            let u = b.decode(&v);
            assert_eq!(b.encode(&u).unwrap(), v);
        }
        assert_eq!(b.dim(), 105);
    }

    #[test]
    fn coordinate_derivative_matches_forms() {
        let b = FormBasis::new(3, 1, 3);
        let next = FormBasis::new(3, 2, 3);
        for idx in 0..b.dim() {
            let v = SparseVec::<Rational>::unit(idx);
            assert_eq!(next.decode(&b.derivative(&v)), b.decode(&v).exterior_derivative());
        }
    }

    #[test]
    fn axis_fast_path_matches_general_pullback() {
        let cube = RefCell::cube(3);
        for d in 0..=3 {
            for f in faces(&cube, d).unwrap() {
                let map: AffineMap<Rational> = f.inclusion();
                for k in 0..=d {
                    let mut fast = PullbackMap::new(&map, k, 3);
                    assert!(fast.axis.is_some());
                    let b = FormBasis::new(3, k, 3);
                    for idx in 0..b.dim() {
                        let v = SparseVec::unit(idx);
                        let general = map.pullback(&b.decode(&v)).unwrap();
                        assert_eq!(fast.target_basis().decode(&fast.apply(&v)), general);
                    }
                }
            }
        }
    }

    #[test]
    fn encode_rejects_excess_degree() {
        let u = F::function(Polynomial::var(2, 0).pow(3));
        assert!(matches!(FormBasis::new(2, 0, 2).encode(&u), Err(FesError::DegreeBound { .. })));
    }
}
