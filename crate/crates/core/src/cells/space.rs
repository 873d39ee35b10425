use crate::cells::basis::{FormBasis, PullbackMap};
use crate::cells::refcell::{faces, RefCell, Shape};
use crate::error::{FesError, Result};
use crate::linalg::{split_map, SparseVec, Subspace};
use crate::polyforms::{AffineMap, FormIndex, MultiIndex, PolyForm, Polynomial};
use crate::scalar::Scalar;

/// A finite-dimensional space of `k`-forms on a reference cell, stored canonically in the
/// monomial-form coordinates of polynomial degree at most `bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormSpace<S> {
    cell: RefCell,
    degree: usize,
    bound: usize,
    space: Subspace<S>,
}

/// The polynomial families of [`make_space`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceFamily {
    /// All forms with coefficients of degree at most `r`.
    Pr,
    /// `{u ∈ P_r : κu ∈ P_r}`.
    PrMinus,
    /// Coefficients of degree at most `r` in each variable separately (cubes only).
    Qr,
    /// Tensor product of the trimmed interval spaces `P_r^-Λ•(I)`: `x^α dx_J` with
    /// `α_i ≤ r` off `J` and `α_i ≤ r − 1` on `J` (cubes only).
    QrMinus,
    /// Homogeneous coefficients of degree exactly `r`.
    HomogeneousHt,
}

impl<S: Scalar> FormSpace<S> {
    pub fn from_subspace(cell: RefCell, degree: usize, bound: usize, space: Subspace<S>) -> Result<Self> {
        let basis = FormBasis::new(cell.dim(), degree, bound);
        if space.ambient_dim() != basis.dim() {
            return Err(FesError::DimensionMismatch { expected: basis.dim(), found: space.ambient_dim() });
        }
        Ok(Self { cell, degree, bound, space })
    }

    pub fn new(
        cell: RefCell,
        degree: usize,
        bound: usize,
        forms: impl IntoIterator<Item = PolyForm<S>>,
    ) -> Result<Self> {
        let basis = FormBasis::new(cell.dim(), degree, bound);
        let vectors = forms.into_iter().map(|u| basis.encode(&u)).collect::<Result<Vec<_>>>()?;
        Ok(Self { cell, degree, bound, space: Subspace::new(basis.dim(), vectors) })
    }

    pub fn from_vectors(
        cell: RefCell,
        degree: usize,
        bound: usize,
        vectors: impl IntoIterator<Item = SparseVec<S>>,
    ) -> Self {
        let dim = FormBasis::new(cell.dim(), degree, bound).dim();
        Self { cell, degree, bound, space: Subspace::new(dim, vectors) }
    }

    pub fn zero(cell: RefCell, degree: usize, bound: usize) -> Self {
        Self::from_vectors(cell, degree, bound, [])
    }

    pub fn cell(&self) -> RefCell {
        self.cell
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn basis(&self) -> FormBasis {
        FormBasis::new(self.cell.dim(), self.degree, self.bound)
    }

    pub fn subspace(&self) -> &Subspace<S> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    pub fn vectors(&self) -> &[SparseVec<S>] {
        self.space.vectors()
    }

    /// Canonical basis decoded as forms.
    pub fn forms(&self) -> Vec<PolyForm<S>> {
        let b = self.basis();
        self.vectors().iter().map(|v| b.decode(v)).collect()
    }

    pub fn encode(&self, u: &PolyForm<S>) -> Result<SparseVec<S>> {
        self.basis().encode(u)
    }

    pub fn contains_form(&self, u: &PolyForm<S>) -> bool {
        match self.encode(u) {
            Ok(v) => self.space.contains(&v),
            Err(_) => u.is_zero(),
        }
    }

    /// Same space described with a different degree bound.
    pub fn with_bound(&self, bound: usize) -> Result<Self> {
        let dim = FormBasis::new(self.cell.dim(), self.degree, bound).dim();
        if let Some(m) = self.vectors().iter().filter_map(SparseVec::max_index).max() {
            if m >= dim {
                return Err(FesError::DegreeBound { degree: self.bound, bound });
            }
        }
        Ok(Self {
            cell: self.cell,
            degree: self.degree,
            bound,
            space: self.space.reindexed(dim, |i| i),
        })
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        if self.cell != other.cell || self.degree != other.degree {
            return Err(FesError::InvalidParameter(format!(
                "spaces live on {} degree {} and {} degree {}",
                self.cell, self.degree, other.cell, other.degree
            )));
        }
        let b = self.bound.max(other.bound);
        Ok((self.with_bound(b)?, other.with_bound(b)?))
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let space = a.space.sum(&b.space)?;
        Ok(Self { space, ..a })
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let space = a.space.intersect(&b.space)?;
        Ok(Self { space, ..a })
    }

    pub fn contains_space(&self, other: &Self) -> Result<bool> {
        let (a, b) = self.aligned(other)?;
        Ok(a.space.contains_space(&b.space))
    }

    /// Set equality regardless of the stored bound.
    pub fn same_span(&self, other: &Self) -> Result<bool> {
        let (a, b) = self.aligned(other)?;
        Ok(a.space == b.space)
    }

    pub fn contains_vector(&self, v: &SparseVec<S>) -> bool {
        if v.max_index().is_some_and(|m| m >= self.space.ambient_dim()) {
            return false;
        }
        self.space.contains(v)
    }

    pub fn derivative_vectors(&self, vectors: &[SparseVec<S>]) -> Vec<SparseVec<S>> {
        let b = self.basis();
        vectors.iter().map(|v| b.derivative(v)).collect()
    }

    /// `d` of this space, as a space of `(k+1)`-forms.
    pub fn derivative(&self) -> Self {
        let images = self.derivative_vectors(self.vectors());
        Self::from_vectors(self.cell, self.degree + 1, self.bound, images)
    }

    /// Closed forms in this space.
    pub fn kernel_of_d(&self) -> Self {
        let images = self.derivative_vectors(self.vectors());
        let target = FormBasis::new(self.cell.dim(), self.degree + 1, self.bound).dim();
        let split = split_map(self.vectors(), &images, target);
        Self::from_vectors(self.cell, self.degree, self.bound, split.kernel)
    }

    /// Integrals of the canonical basis vectors of a top-degree space.
    pub fn integrals(&self) -> Vec<S> {
        let b = self.basis();
        self.vectors().iter().map(|v| b.integral(v, self.cell.is_cube())).collect()
    }

    /// Images of `vectors` under pullback by `map` (face coordinates to this cell).
    pub fn pullback_vectors(&self, map: &AffineMap<S>, vectors: &[SparseVec<S>]) -> Vec<SparseVec<S>> {
        let mut pb = PullbackMap::new(map, self.degree, self.bound);
        vectors.iter().map(|v| pb.apply(v)).collect()
    }

    /// Trace onto a face given by its inclusion map and its own reference cell.
    pub fn trace(&self, map: &AffineMap<S>, face: RefCell) -> Result<Self> {
        if map.target_dim() != self.cell.dim() || map.source_dim() != face.dim() {
            return Err(FesError::NotIncident);
        }
        let images = self.pullback_vectors(map, self.vectors());
        Ok(Self::from_vectors(face, self.degree, self.bound, images))
    }

    /// Pullback of the space along a map of the cell onto itself.
    pub fn pulled_back(&self, map: &AffineMap<S>) -> Result<Self> {
        self.trace(map, self.cell)
    }

    /// Subspace of forms whose traces vanish on every facet of the reference cell.
    pub fn boundary_restricted(&self) -> Self {
        let n = self.cell.dim();
        if n == 0 || self.degree >= n {
            return self.clone();
        }
        let facets = faces(&self.cell, n - 1).expect("n >= 1");
        let mut maps: Vec<PullbackMap<S>> =
            facets.iter().map(|f| PullbackMap::new(&f.inclusion(), self.degree, self.bound)).collect();
        let block = FormBasis::new(n - 1, self.degree, self.bound).dim();
        let images: Vec<SparseVec<S>> = self
            .vectors()
            .iter()
            .map(|v| {
                let mut out = SparseVec::new();
                for (i, pb) in maps.iter_mut().enumerate() {
                    out = out.concat(i * block, &pb.apply(v));
                }
                out
            })
            .collect();
        let split = split_map(self.vectors(), &images, block * facets.len());
        Self::from_vectors(self.cell, self.degree, self.bound, split.kernel)
    }

    /// Forms embedded into a product cell: the variables of this cell become the variables
    /// `offset..offset + dim` out of `total`.
    fn embedded_forms(&self, total: usize, offset: usize) -> Vec<PolyForm<S>> {
        self.forms().iter().map(|u| embed_form(u, total, offset)).collect()
    }
}

fn embed_form<S: Scalar>(u: &PolyForm<S>, total: usize, offset: usize) -> PolyForm<S> {
    let mut out = PolyForm::zero(total, u.degree());
    for (j, p) in u.terms() {
        let shifted = FormIndex::from_mask(j.mask() << offset);
        let q = Polynomial::from_terms(
            total,
            p.terms().map(|(alpha, c)| {
                let mut e = vec![0u16; total];
                e[offset..offset + alpha.nvars()].copy_from_slice(alpha.exponents());
                (MultiIndex::new(&e), c.clone())
            }),
        );
        out.add_term(shifted, q);
    }
    out
}

/// Graded tensor product of spaces on two cubes: `Σ_l B^l ⊗ C^{k-l}` as forms on the
/// product cube, with `u ⊗ v = p_U^* u ∧ p_V^* v`.
pub fn tensor_spaces<S: Scalar>(b: &[FormSpace<S>], c: &[FormSpace<S>], k: usize) -> Result<FormSpace<S>> {
    let (Some(b0), Some(c0)) = (b.first(), c.first()) else {
        return Err(FesError::InvalidParameter("empty graded space".into()));
    };
    if !b0.cell.is_cube() || !c0.cell.is_cube() {
        return Err(FesError::TensorNeedsCubes);
    }
    let (m, p) = (b0.cell.dim(), c0.cell.dim());
    let bound_b = b.iter().map(|s| s.bound).max().unwrap_or(0);
    let bound_c = c.iter().map(|s| s.bound).max().unwrap_or(0);
    let cell = RefCell::cube(m + p);
    let mut forms = Vec::new();
    for l in 0..=k.min(m) {
        if k - l > p {
            continue;
        }
        let left = b[l].embedded_forms(m + p, 0);
        let right = c[k - l].embedded_forms(m + p, m);
        for u in &left {
            for v in &right {
                forms.push(u.wedge(v)?);
            }
        }
    }
    FormSpace::new(cell, k, bound_b + bound_c, forms)
}

/// The standard polynomial form spaces on a reference cell.
pub fn make_space<S: Scalar>(cell: RefCell, k: usize, r: usize, family: SpaceFamily) -> Result<FormSpace<S>> {
    let n = cell.dim();
    if k > n {
        return Err(FesError::FormDegree { degree: k, dim: n });
    }
    match family {
        SpaceFamily::Pr => {
            let b = FormBasis::new(n, k, r);
            Ok(FormSpace::from_vectors(cell, k, r, (0..b.dim()).map(SparseVec::unit)))
        }
        SpaceFamily::HomogeneousHt => {
            let b = FormBasis::new(n, k, r);
            let low = b.degree_below(r).end;
            Ok(FormSpace::from_vectors(cell, k, r, (low..b.dim()).map(SparseVec::unit)))
        }
        SpaceFamily::Qr => {
            if cell.shape() != Shape::Cube {
                return Err(FesError::QrOnSimplex);
            }
            let bound = n * r;
            let b = FormBasis::new(n, k, bound);
            let units = (0..b.dim())
                .filter(|&i| b.element(i).1.exponents().iter().all(|&e| e as usize <= r))
                .map(SparseVec::unit);
            Ok(FormSpace::from_vectors(cell, k, bound, units))
        }
        SpaceFamily::QrMinus => {
            if cell.shape() != Shape::Cube {
                return Err(FesError::QrOnSimplex);
            }
            let bound = n * r;
            let b = FormBasis::new(n, k, bound);
            let units = (0..b.dim())
                .filter(|&i| {
                    let (j, alpha) = b.element(i);
                    (0..n).all(|v| {
                        let cap = if j.contains(v) { r.checked_sub(1) } else { Some(r) };
                        cap.is_some_and(|c| alpha.get(v) as usize <= c)
                    })
                })
                .map(SparseVec::unit);
            Ok(FormSpace::from_vectors(cell, k, bound, units))
        }
        SpaceFamily::PrMinus => {
            let b = FormBasis::new(n, k, r);
            if k == 0 {
                return make_space(cell, 0, r, SpaceFamily::Pr);
            }
            let lower = b.degree_below(r);
            let top: Vec<SparseVec<S>> = (lower.end..b.dim()).map(SparseVec::unit).collect();
            let overflow = FormBasis::new(n, k - 1, r + 1);
            let images: Vec<SparseVec<S>> = top
                .iter()
                .map(|v| {
                    let kappa = b.decode(v).koszul().expect("k >= 1");
                    overflow.encode(&kappa).expect("koszul raises the degree by one")
                })
                .collect();
            let split = split_map(&top, &images, overflow.dim());
            let vectors = lower.map(SparseVec::unit).chain(split.kernel);
            Ok(FormSpace::from_vectors(cell, k, r, vectors))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type Q = FormSpace<Rational>;

    fn space(cell: RefCell, k: usize, r: usize, family: SpaceFamily) -> Q {
        make_space(cell, k, r, family).unwrap()
    }

    #[test]
    fn dimensions_of_standard_spaces() {
        assert_eq!(space(RefCell::cube(3), 1, 4, SpaceFamily::Pr).dim(), 105);
        assert_eq!(space(RefCell::simplex(3), 1, 1, SpaceFamily::PrMinus).dim(), 6);
        assert_eq!(space(RefCell::cube(3), 0, 1, SpaceFamily::Qr).dim(), 8);
        assert_eq!(space(RefCell::simplex(2), 1, 2, SpaceFamily::HomogeneousHt).dim(), 6);
        assert!(matches!(
            make_space::<Rational>(RefCell::simplex(2), 0, 1, SpaceFamily::Qr),
            Err(FesError::QrOnSimplex)
        ));
    }

    #[test]
    fn trimmed_dimensions_match_the_classical_count() {
        // P_r^- Λ^k = P_{r-1}Λ^k + κ H_{r-1}Λ^{k+1}
        for n in 1..=3 {
            for r in 1..=3 {
                for k in 0..=n {
                    let trimmed = space(RefCell::simplex(n), k, r, SpaceFamily::PrMinus);
                    let low = space(RefCell::simplex(n), k, r - 1, SpaceFamily::Pr);
                    let kappa: Vec<PolyForm<Rational>> = if k < n {
                        space(RefCell::simplex(n), k + 1, r - 1, SpaceFamily::HomogeneousHt)
                            .forms()
                            .iter()
                            .map(|u| u.koszul().unwrap())
                            .collect()
                    } else {
                        Vec::new()
                    };
                    let expected = low
                        .sum(&Q::new(RefCell::simplex(n), k, r, kappa).unwrap())
                        .unwrap();
                    assert!(trimmed.same_span(&expected).unwrap(), "n={n} r={r} k={k}");
                }
            }
        }
    }

    #[test]
    fn tensor_trimmed_matches_interval_tensor() {
        let interval: Vec<Q> = (0..=1).map(|k| space(RefCell::cube(1), k, 3, SpaceFamily::PrMinus)).collect();
        let square: Vec<Q> = (0..=2).map(|k| tensor_spaces(&interval, &interval, k).unwrap()).collect();
        for k in 0..=2 {
            assert!(square[k].same_span(&space(RefCell::cube(2), k, 3, SpaceFamily::QrMinus)).unwrap());
        }
        let cube: Vec<Q> = (0..=3).map(|k| tensor_spaces(&square, &interval, k).unwrap()).collect();
        for k in 0..=3 {
            assert!(cube[k].same_span(&space(RefCell::cube(3), k, 3, SpaceFamily::QrMinus)).unwrap());
        }
        assert_eq!(space(RefCell::cube(3), 1, 6, SpaceFamily::QrMinus).dim(), 882);
    }

    #[test]
    fn traces_to_edges() {
        let square = RefCell::cube(2);
        let edges = faces(&square, 1).unwrap();
        // x_1 dx_2 on the edge x_2 = 0 vanishes
        let u = PolyForm::basic(2, FormIndex::from_elements(&[1])).mul_poly(&Polynomial::var(2, 0));
        let s = Q::new(square, 1, 1, [u]).unwrap();
        let bottom = edges
            .iter()
            .find(|f| f.pin(1) == Some(0))
            .unwrap();
        assert!(s.trace(&bottom.inclusion(), bottom.cell()).unwrap().is_zero());
        // x_1 x_2 on the edge x_1 = 1 is x_2
        let w = PolyForm::function(Polynomial::var(2, 0).mul(&Polynomial::var(2, 1)));
        let s = Q::new(square, 0, 2, [w]).unwrap();
        let right = edges.iter().find(|f| f.pin(0) == Some(1)).unwrap();
        let t = s.trace(&right.inclusion(), right.cell()).unwrap();
        assert_eq!(t.forms(), vec![PolyForm::function(Polynomial::var(1, 0))]);
    }

    #[test]
    fn boundary_restricted_examples() {
        assert_eq!(space(RefCell::cube(3), 0, 4, SpaceFamily::Pr).boundary_restricted().dim(), 0);
        assert_eq!(space(RefCell::cube(3), 1, 4, SpaceFamily::Pr).boundary_restricted().dim(), 3);
        for r in 0..=4 {
            assert_eq!(space(RefCell::cube(1), 1, r, SpaceFamily::Pr).boundary_restricted().dim(), r + 1);
        }
        // x_2(1 - x_2) dx_1 has zero trace on the whole boundary of the square
        let x2 = Polynomial::<Rational>::var(2, 1);
        let bubble = x2.sub(&x2.mul(&x2));
        let u = PolyForm::basic(2, FormIndex::from_elements(&[0])).mul_poly(&bubble);
        let s = Q::new(RefCell::cube(2), 1, 2, [u]).unwrap();
        assert_eq!(s.boundary_restricted(), s);
    }

    #[test]
    fn tensor_of_interval_spaces_is_qr() {
        let i = RefCell::cube(1);
        for r in 0..=2 {
            let pr: Vec<Q> = (0..=1).map(|k| space(i, k, r, SpaceFamily::Pr)).collect();
            for k in 0..=2 {
                let t = tensor_spaces(&pr, &pr, k).unwrap();
                assert!(t.same_span(&space(RefCell::cube(2), k, r, SpaceFamily::Qr)).unwrap());
            }
        }
        let p1: Vec<Q> = (0..=1).map(|k| space(i, k, 1, SpaceFamily::Pr)).collect();
        assert_eq!(tensor_spaces(&p1, &p1, 1).unwrap().dim(), 8);
    }
}
