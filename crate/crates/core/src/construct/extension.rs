use crate::cells::{CellComplex, FamilyLayout, Fes, FormBasis, FormSpace, RefCell};
use crate::construct::inner::InnerProduct;
use crate::error::{FesError, Result};
use crate::homology::CochainComplex;
use crate::linalg::{solve_in_span, split_map, Echelon, SparseVec, Subspace};
use crate::polyforms::PolyForm;
use crate::scalar::Scalar;

/// One system restricted to one cell, re-expressed at a common degree bound.
#[derive(Clone, Debug)]
pub(crate) struct Local<S> {
    pub shape: RefCell,
    pub bound: usize,
    /// `X^k(T)`.
    pub spaces: Vec<Subspace<S>>,
    /// `X^k_0(T)`.
    pub zero: Vec<Subspace<S>>,
    /// `d X^k_0(T)` in the degree `k+1` basis.
    pub dzero: Vec<Vec<SparseVec<S>>>,
}

impl<S: Scalar> Local<S> {
    pub fn new(fes: &Fes<S>, cell: usize, bound: usize) -> Result<Self> {
        let shape = fes.complex().cell(cell).shape;
        let mut spaces = Vec::new();
        let mut zero = Vec::new();
        let mut dzero = Vec::new();
        for k in 0..=shape.dim() {
            spaces.push(fes.space(cell, k).with_bound(bound)?.subspace().clone());
            let z = fes.boundary_restricted(cell, k).with_bound(bound)?;
            dzero.push(z.derivative_vectors(z.vectors()).into_iter().filter(|v| !v.is_zero()).collect());
            zero.push(z.subspace().clone());
        }
        Ok(Self { shape, bound, spaces, zero, dzero })
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn basis(&self, k: usize) -> FormBasis {
        FormBasis::new(self.dim(), k, self.bound)
    }

    pub fn zero_space(&self, k: usize) -> FormSpace<S> {
        FormSpace::from_vectors(self.shape, k, self.bound, self.zero[k].vectors().iter().cloned())
    }

    /// `X•_0(T)` followed by integration.
    pub fn zero_cohomology(&self) -> Result<crate::homology::Cohomology> {
        let spaces = (0..=self.dim()).map(|k| self.zero_space(k)).collect();
        CochainComplex::full(spaces, false, true)?.cohomology_dims()
    }

    /// Fails with the first degree where `X•_0(T) → ℝ` is not exact.
    pub fn require_zero_exact(&self, cell: usize) -> Result<()> {
        let h = self.zero_cohomology()?;
        match (0..=self.dim() + 1).find(|&k| h.at(k) != 0) {
            Some(degree) => Err(FesError::ExactnessViolated { cell, degree }),
            None => Ok(()),
        }
    }
}

/// Blocks of fixed widths concatenated into one image vector.
#[derive(Default)]
pub(crate) struct Stack<S> {
    out: SparseVec<S>,
    width: usize,
}

impl<S: Scalar> Stack<S> {
    pub fn new() -> Self {
        Self { out: SparseVec::new(), width: 0 }
    }

    pub fn push(&mut self, v: SparseVec<S>, width: usize) {
        self.out = self.out.concat(self.width, &v);
        self.width += width;
    }
}

/// Kernel of a stacked linear map on the span of independent `domain` vectors.
pub(crate) fn kernel_on<S: Scalar>(ambient: usize, domain: &[SparseVec<S>], images: Vec<Stack<S>>) -> Subspace<S> {
    let Some(total) = images.first().map(|s| s.width) else {
        return Subspace::zero(ambient);
    };
    let images: Vec<SparseVec<S>> = images.into_iter().map(|s| s.out).collect();
    Subspace::new(ambient, split_map(domain, &images, total).kernel)
}

/// The `candidates` whose images are independent of `base` and of the images picked before.
pub(crate) fn pick_new<S: Scalar>(
    base: &[SparseVec<S>],
    candidates: &[SparseVec<S>],
    images: &[SparseVec<S>],
) -> Vec<SparseVec<S>> {
    let mut ech = Echelon::new();
    for b in base {
        ech.insert(b.clone());
    }
    candidates.iter().zip(images).filter(|(_, im)| ech.insert((*im).clone())).map(|(c, _)| c.clone()).collect()
}

/// `((v, w_j))_j` as a sparse vector.
pub(crate) fn pairs<S: Scalar>(
    ip: InnerProduct,
    basis: &FormBasis,
    shape: RefCell,
    v: &SparseVec<S>,
    others: &[SparseVec<S>],
) -> SparseVec<S> {
    SparseVec::from_entries(others.iter().enumerate().map(|(j, w)| (j, ip.pair(basis, shape, v, w))).collect())
}

/// Family version of [`pairs`] with the sum of the per-facet products.
pub(crate) fn family_pairs<S: Scalar>(
    ip: InnerProduct,
    complex: &CellComplex<S>,
    layout: &FamilyLayout,
    v: &SparseVec<S>,
    others: &[SparseVec<S>],
) -> SparseVec<S> {
    SparseVec::from_entries(
        others.iter().enumerate().map(|(j, w)| (j, ip.pair_family(complex, layout, v, w))).collect(),
    )
}

/// Traces onto a layout; layouts of degree above the facet dimension carry nothing.
pub(crate) fn traces<S: Scalar>(
    fes: &Fes<S>,
    cell: usize,
    k: usize,
    layout: &FamilyLayout,
    vectors: &[SparseVec<S>],
) -> Vec<SparseVec<S>> {
    if layout.total() == 0 {
        return vec![SparseVec::new(); vectors.len()];
    }
    fes.trace_to_layout(cell, k, layout, vectors)
}

/// `{w ∈ B^k(T) : dw ∈ A^{k+1}(T), dw ⊥ dA^k_0(T), w ⊥ dB^{k−1}_0(T)}`.
pub(crate) fn mixed_space<S: Scalar>(a: &Local<S>, b: &Local<S>, k: usize, ip: InnerProduct) -> Subspace<S> {
    let n = b.dim();
    let bk = b.basis(k);
    let images = b.spaces[k]
        .vectors()
        .iter()
        .map(|w| {
            let mut st = Stack::new();
            if k < n {
                let bk1 = b.basis(k + 1);
                let dw = bk.derivative(w);
                st.push(a.spaces[k + 1].residual(&dw), bk1.dim());
                st.push(pairs(ip, &bk1, b.shape, &dw, &a.dzero[k]), a.dzero[k].len());
            }
            if k > 0 {
                st.push(pairs(ip, &bk, b.shape, w, &b.dzero[k - 1]), b.dzero[k - 1].len());
            }
            st
        })
        .collect();
    kernel_on(bk.dim(), b.spaces[k].vectors(), images)
}

/// `{w ∈ B^k(T) : dw ⊥ dB^k_0(T), w ⊥ dB^{k−1}_0(T)}`.
pub(crate) fn harmonic_space<S: Scalar>(b: &Local<S>, k: usize, ip: InnerProduct) -> Subspace<S> {
    let n = b.dim();
    let bk = b.basis(k);
    let images = b.spaces[k]
        .vectors()
        .iter()
        .map(|w| {
            let mut st = Stack::new();
            if k < n {
                let dw = bk.derivative(w);
                st.push(pairs(ip, &b.basis(k + 1), b.shape, &dw, &b.dzero[k]), b.dzero[k].len());
            }
            if k > 0 {
                st.push(pairs(ip, &bk, b.shape, w, &b.dzero[k - 1]), b.dzero[k - 1].len());
            }
            st
        })
        .collect();
    kernel_on(bk.dim(), b.spaces[k].vectors(), images)
}

/// Boundary data given as one form per facet, in the order of [`CellComplex::facets`].
pub fn encode_boundary_data<S: Scalar>(
    fes: &Fes<S>,
    cell: usize,
    k: usize,
    bound: usize,
    data: &[PolyForm<S>],
) -> Result<(FamilyLayout, SparseVec<S>)> {
    let layout = fes.boundary_layout(cell, k, bound);
    if data.len() != layout.cells().len() {
        return Err(FesError::DimensionMismatch { expected: layout.cells().len(), found: data.len() });
    }
    let mut blocks = Vec::with_capacity(data.len());
    for (i, u) in data.iter().enumerate() {
        let (_, basis) = layout.block(i);
        if u.is_zero() {
            blocks.push(SparseVec::new());
            continue;
        }
        if u.degree() != k || u.nvars() != basis.nvars() {
            return Err(FesError::InvalidParameter(format!("boundary datum {i} is not a {k}-form on its facet")));
        }
        // data above the bound cannot be a trace of the system
        blocks.push(basis.encode(u).map_err(|_| FesError::NoExtension)?);
    }
    let v = layout.assemble(&blocks);
    Ok((layout, v))
}

fn bound_for<S: Scalar>(systems: &[&Fes<S>], data: &[PolyForm<S>]) -> usize {
    let sys = systems.iter().map(|f| f.max_bound()).max().unwrap_or(0);
    sys.max(data.iter().filter_map(PolyForm::poly_degree).max().unwrap_or(0))
}

/// The extension `u ∈ E^k(T)` of compatible boundary data with `du ⊥ dE^k_0(T)` and
/// `u ⊥ dE^{k−1}_0(T)`. Needs `E•_0(T) → ℝ` exact, which makes it unique.
pub fn harmonic_extension<S: Scalar>(
    e: &Fes<S>,
    cell: usize,
    k: usize,
    data: &[PolyForm<S>],
    ip: InnerProduct,
) -> Result<PolyForm<S>> {
    let n = e.complex().cell(cell).dim();
    if k >= n {
        return Err(FesError::InvalidParameter(format!("boundary data of degree {k} on a cell of dimension {n}")));
    }
    let bound = bound_for(&[e], data);
    let local = Local::new(e, cell, bound)?;
    local.require_zero_exact(cell)?;
    let (layout, target) = encode_boundary_data(e, cell, k, bound, data)?;
    let w = harmonic_space(&local, k, ip);
    let tr = traces(e, cell, k, &layout, w.vectors());
    let u = solve_in_span(w.vectors(), &tr, layout.total(), &target).ok_or(FesError::NoExtension)?;
    Ok(local.basis(k).decode(&u))
}

/// Top-degree variant: the unique `u ∈ E^n(T)` with `∫u = alpha` and `u ⊥ dE^{n−1}_0(T)`.
pub fn top_harmonic_extension<S: Scalar>(e: &Fes<S>, cell: usize, alpha: &S, ip: InnerProduct) -> Result<PolyForm<S>> {
    let local = Local::new(e, cell, e.max_bound())?;
    local.require_zero_exact(cell)?;
    let n = local.dim();
    let basis = local.basis(n);
    let images = local.spaces[n]
        .vectors()
        .iter()
        .map(|w| {
            let mut st = Stack::new();
            if n > 0 {
                st.push(pairs(ip, &basis, local.shape, w, &local.dzero[n - 1]), local.dzero[n - 1].len());
            }
            st
        })
        .collect();
    let w = kernel_on(basis.dim(), local.spaces[n].vectors(), images);
    let cube = local.shape.is_cube();
    let integrals: Vec<SparseVec<S>> =
        w.vectors().iter().map(|v| SparseVec::from_entries(vec![(0, basis.integral(v, cube))])).collect();
    let target = SparseVec::from_entries(vec![(0, alpha.clone())]);
    let u = solve_in_span(w.vectors(), &integrals, 1, &target).ok_or(FesError::NoExtension)?;
    Ok(basis.decode(&u))
}

/// The extension `ũ ∈ B^k(T)` of `u` with `dũ ∈ A^{k+1}(T)`, `dũ ⊥ dA^k_0(T)` and
/// `ũ ⊥ dB^{k−1}_0(T)`.
pub fn mixed_extension<S: Scalar>(
    a: &Fes<S>,
    b: &Fes<S>,
    cell: usize,
    k: usize,
    data: &[PolyForm<S>],
    ip: InnerProduct,
) -> Result<PolyForm<S>> {
    let n = a.complex().cell(cell).dim();
    if k >= n {
        return Err(FesError::InvalidParameter(format!("boundary data of degree {k} on a cell of dimension {n}")));
    }
    for j in 0..=n {
        if !b.space(cell, j).contains_space(a.space(cell, j))? {
            return Err(FesError::NotContained { cell, degree: j });
        }
    }
    let bound = bound_for(&[a, b], data);
    let la = Local::new(a, cell, bound)?;
    let lb = Local::new(b, cell, bound)?;
    la.require_zero_exact(cell)?;
    let (layout, target) = encode_boundary_data(b, cell, k, bound, data)?;
    let next = b.boundary_layout(cell, k + 1, bound);
    let du = layout.derivative(&target, &next);
    let tr_next = Subspace::new(next.total(), traces(a, cell, k + 1, &next, la.spaces[k + 1].vectors()));
    if !tr_next.contains(&du) {
        return Err(FesError::DerivativeNotInTrace);
    }
    let w = mixed_space(&la, &lb, k, ip);
    let tr = traces(b, cell, k, &layout, w.vectors());
    let u = solve_in_span(w.vectors(), &tr, layout.total(), &target).ok_or(FesError::NoExtension)?;
    Ok(lb.basis(k).decode(&u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::SpaceFamily;
    use crate::polyforms::{FormIndex, Polynomial};
    use crate::Rational;

    type Q = Fes<Rational>;

    fn q(n: i64) -> Rational {
        Rational::int(n)
    }

    fn traces_of(fes: &Q, cell: usize, u: &PolyForm<Rational>) -> Vec<PolyForm<Rational>> {
        fes.complex()
            .facets(cell)
            .map(|inc| inc.map.pullback(u).unwrap())
            .collect()
    }

    #[test]
    fn zero_data_extends_to_zero() {
        let e = Q::reference(RefCell::cube(1), SpaceFamily::Pr, 2).unwrap();
        let zero = vec![PolyForm::zero(0, 0); 2];
        let u = harmonic_extension(&e, e.top_cell(), 0, &zero, InnerProduct::Monomial);
        // P_2 on the interval is not exact at the top: 1 and x have nonzero integral
        assert_eq!(u, Err(FesError::ExactnessViolated { cell: e.top_cell(), degree: 1 }));
        let e = Q::reference(RefCell::cube(1), SpaceFamily::PrMinus, 2).unwrap();
        let u = harmonic_extension(&e, e.top_cell(), 0, &zero, InnerProduct::Monomial).unwrap();
        assert!(u.is_zero());
    }

    #[test]
    fn harmonic_extension_reproduces_harmonic_elements() {
        let e = Q::reference(RefCell::cube(2), SpaceFamily::QrMinus, 2).unwrap();
        let top = e.top_cell();
        for ip in [InnerProduct::Monomial, InnerProduct::L2] {
            for k in 0..2 {
                let local = Local::new(&e, top, e.max_bound()).unwrap();
                let w = harmonic_space(&local, k, ip);
                assert!(!w.is_zero());
                for v in w.vectors() {
                    let u = local.basis(k).decode(v);
                    let back = harmonic_extension(&e, top, k, &traces_of(&e, top, &u), ip).unwrap();
                    assert_eq!(back, u);
                }
            }
        }
    }

    #[test]
    fn top_degree_extension_on_the_interval() {
        let e = Q::reference(RefCell::cube(1), SpaceFamily::PrMinus, 2).unwrap();
        let u = top_harmonic_extension(&e, e.top_cell(), &q(1), InnerProduct::Monomial).unwrap();
        // u = (a + b x) dx with a + b/2 = 1 and u ⊥ d(x − x²) = (1 − 2x) dx
        let expected = PolyForm::term(
            FormIndex::full(1),
            Polynomial::univariate(1, 0, &[Rational::ratio(4, 5), Rational::ratio(2, 5)]),
        );
        assert_eq!(u, expected);
        assert_eq!(u.integrate(&RefCell::cube(1)).unwrap(), q(1));
        let bubble = PolyForm::function(Polynomial::univariate(1, 0, &[q(0), q(1), q(-1)]));
        let b = FormBasis::new(1, 1, 2);
        let du = b.encode(&bubble.exterior_derivative()).unwrap();
        assert_eq!(b.encode(&u).unwrap().dot(&du), q(0));
        // full P_1 is not exact, so the extension is not unique
        let p1 = Q::reference(RefCell::cube(1), SpaceFamily::Pr, 1).unwrap();
        assert!(matches!(
            top_harmonic_extension(&p1, p1.top_cell(), &q(1), InnerProduct::Monomial),
            Err(FesError::ExactnessViolated { .. })
        ));
    }

    #[test]
    fn mixed_extension_of_a_hat() {
        // A = tensor of P_1^- factors is exact with its boundary, B = tensor of P_2^- factors
        let a = Q::reference(RefCell::cube(2), SpaceFamily::QrMinus, 1).unwrap();
        let b = Q::reference(RefCell::cube(2), SpaceFamily::QrMinus, 2).unwrap();
        let top = a.top_cell();
        let hat = PolyForm::function(Polynomial::var(2, 0).mul(&Polynomial::var(2, 1)));
        let data = traces_of(&a, top, &hat);
        let ip = InnerProduct::Monomial;
        let u = mixed_extension(&a, &b, top, 0, &data, ip).unwrap();
        let bound = b.max_bound();
        let la = Local::new(&a, top, bound).unwrap();
        let lb = Local::new(&b, top, bound).unwrap();
        let (b0, b1) = (la.basis(0), la.basis(1));
        let uv = b0.encode(&u).unwrap();
        let du = b1.encode(&u.exterior_derivative()).unwrap();
        assert!(la.spaces[1].contains(&du));
        assert!(la.dzero[0].iter().all(|w| ip.pair(&b1, la.shape, &du, w) == q(0)));
        assert!(lb.spaces[0].contains(&uv));
        assert_eq!(traces_of(&a, top, &u), data);
        // the hat is itself the mixed extension: A^0_0 = 0 and there is no B^{-1}
        assert_eq!(u, hat);
        assert_eq!(
            mixed_extension(&a, &b, top, 0, &vec![PolyForm::zero(1, 0); 4], ip).unwrap(),
            PolyForm::zero(2, 0)
        );
    }

    #[test]
    fn mixed_extension_rejects_derivatives_outside_traces() {
        let a = Q::reference(RefCell::cube(2), SpaceFamily::QrMinus, 1).unwrap();
        let b = Q::reference(RefCell::cube(2), SpaceFamily::QrMinus, 3).unwrap();
        let top = a.top_cell();
        let u = PolyForm::function(Polynomial::var(2, 0).pow(2));
        let data = traces_of(&a, top, &u);
        assert_eq!(
            mixed_extension(&a, &b, top, 0, &data, InnerProduct::Monomial),
            Err(FesError::DerivativeNotInTrace)
        );
    }
}
