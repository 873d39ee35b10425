use crate::cells::basis::{FormBasis, PullbackMap};
use crate::cells::complex::CellComplex;
use crate::cells::refcell::RefCell;
use crate::cells::space::{make_space, tensor_spaces, FormSpace, SpaceFamily};
use crate::error::{FesError, Result};
use crate::linalg::{rank_of, split_map, SparseVec, Subspace};
use crate::scalar::Scalar;

/// A finite element system: one form space per cell and form degree.
#[derive(Clone, Debug)]
pub struct Fes<S> {
    complex: CellComplex<S>,
    spaces: Vec<Vec<FormSpace<S>>>,
}

/// Coordinates of families `(u_F)` indexed by a list of cells, one block per cell.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyLayout {
    cells: Vec<usize>,
    bases: Vec<FormBasis>,
    offsets: Vec<usize>,
    total: usize,
}

impl FamilyLayout {
    pub fn new<S: Scalar>(complex: &CellComplex<S>, cells: Vec<usize>, degree: usize, bound: usize) -> Self {
        let bases: Vec<FormBasis> =
            cells.iter().map(|&c| FormBasis::new(complex.cell(c).dim(), degree, bound)).collect();
        let mut offsets = Vec::with_capacity(cells.len());
        let mut total = 0;
        for b in &bases {
            offsets.push(total);
            total += b.dim();
        }
        Self { cells, bases, offsets, total }
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn block(&self, i: usize) -> (usize, FormBasis) {
        (self.offsets[i], self.bases[i])
    }

    /// Splits a family vector into its blocks.
    pub fn blocks<S: Scalar>(&self, v: &SparseVec<S>) -> Vec<SparseVec<S>> {
        (0..self.cells.len())
            .map(|i| v.window(self.offsets[i], self.offsets[i] + self.bases[i].dim()))
            .collect()
    }

    pub fn assemble<S: Scalar>(&self, blocks: &[SparseVec<S>]) -> SparseVec<S> {
        let mut out = SparseVec::new();
        for (i, b) in blocks.iter().enumerate() {
            out = out.concat(self.offsets[i], b);
        }
        out
    }

    /// Blockwise exterior derivative into the layout `next` of degree `k+1`.
    pub fn derivative<S: Scalar>(&self, v: &SparseVec<S>, next: &FamilyLayout) -> SparseVec<S> {
        let parts: Vec<SparseVec<S>> =
            self.blocks(v).iter().zip(&self.bases).map(|(b, basis)| basis.derivative(b)).collect();
        next.assemble(&parts)
    }
}

/// The space of trace-compatible families on the boundary of a cell.
#[derive(Clone, Debug)]
pub struct BoundaryFamilies<S> {
    pub layout: FamilyLayout,
    pub space: Subspace<S>,
}

impl<S: Scalar> Fes<S> {
    pub fn new(complex: CellComplex<S>, spaces: Vec<Vec<FormSpace<S>>>) -> Result<Self> {
        if spaces.len() != complex.len() {
            return Err(FesError::DimensionMismatch { expected: complex.len(), found: spaces.len() });
        }
        for (id, row) in spaces.iter().enumerate() {
            let cell = complex.cell(id).shape;
            if row.len() != cell.dim() + 1 {
                return Err(FesError::DimensionMismatch { expected: cell.dim() + 1, found: row.len() });
            }
            for (k, s) in row.iter().enumerate() {
                if s.cell() != cell || s.degree() != k {
                    return Err(FesError::InvalidParameter(format!(
                        "space for cell {id} degree {k} lives on {} degree {}",
                        s.cell(),
                        s.degree()
                    )));
                }
            }
        }
        Ok(Self { complex, spaces })
    }

    pub fn from_fn(
        complex: CellComplex<S>,
        mut f: impl FnMut(usize, RefCell, usize) -> Result<FormSpace<S>>,
    ) -> Result<Self> {
        let mut spaces = Vec::with_capacity(complex.len());
        for id in 0..complex.len() {
            let cell = complex.cell(id).shape;
            spaces.push((0..=cell.dim()).map(|k| f(id, cell, k)).collect::<Result<Vec<_>>>()?);
        }
        Self::new(complex, spaces)
    }

    /// The same polynomial family on every cell of the complex.
    pub fn polynomial(complex: CellComplex<S>, family: SpaceFamily, r: usize) -> Result<Self> {
        Self::from_fn(complex, |_, cell, k| make_space(cell, k, r, family))
    }

    /// The polynomial family on the face lattice of a reference cell.
    pub fn reference(cell: RefCell, family: SpaceFamily, r: usize) -> Result<Self> {
        Self::polynomial(CellComplex::from_reference(cell), family, r)
    }

    pub fn complex(&self) -> &CellComplex<S> {
        &self.complex
    }

    pub fn space(&self, cell: usize, k: usize) -> &FormSpace<S> {
        &self.spaces[cell][k]
    }

    pub fn spaces(&self, cell: usize) -> &[FormSpace<S>] {
        &self.spaces[cell]
    }

    pub fn replace(&mut self, cell: usize, k: usize, space: FormSpace<S>) -> Result<()> {
        let current = &self.spaces[cell][k];
        if space.cell() != current.cell() || space.degree() != k {
            return Err(FesError::InvalidParameter("replacement space has the wrong shape".into()));
        }
        self.spaces[cell][k] = space;
        Ok(())
    }

    pub fn max_bound(&self) -> usize {
        self.spaces.iter().flatten().map(FormSpace::bound).max().unwrap_or(0)
    }

    /// The maximal cell of a reference lattice.
    pub fn top_cell(&self) -> usize {
        self.complex.len() - 1
    }

    /// `d A^k ⊆ A^{k+1}` on every cell, and traces of `A^k(T)` lie in `A^k(T')` for every
    /// incident pair.
    pub fn is_element_system(&self) -> bool {
        for id in 0..self.complex.len() {
            let n = self.complex.cell(id).dim();
            for k in 0..n {
                let d = self.spaces[id][k].derivative();
                if !self.spaces[id][k + 1].contains_space(&d).unwrap_or(false) {
                    return false;
                }
            }
            for inc in self.complex.faces(id) {
                let face = self.complex.cell(inc.face).shape;
                for k in 0..=face.dim() {
                    let t = match self.spaces[id][k].trace(&inc.map, face) {
                        Ok(t) => t,
                        Err(_) => return false,
                    };
                    if !self.spaces[inc.face][k].contains_space(&t).unwrap_or(false) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Cellwise containment `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Self) -> Result<bool> {
        if self.complex.len() != other.complex.len() {
            return Err(FesError::DimensionMismatch { expected: self.complex.len(), found: other.complex.len() });
        }
        for id in 0..self.complex.len() {
            for (a, b) in self.spaces[id].iter().zip(&other.spaces[id]) {
                if !b.contains_space(a)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `A^k_0(T)`: elements with zero trace on every facet.
    pub fn boundary_restricted(&self, cell: usize, k: usize) -> FormSpace<S> {
        let space = &self.spaces[cell][k];
        let facets: Vec<usize> = self
            .complex
            .facets(cell)
            .map(|inc| inc.face)
            .filter(|&f| self.complex.cell(f).dim() >= k)
            .collect();
        if facets.is_empty() {
            return space.clone();
        }
        let layout = FamilyLayout::new(&self.complex, facets, k, space.bound());
        let images = self.trace_to_layout(cell, k, &layout, space.vectors());
        let split = split_map(space.vectors(), &images, layout.total());
        FormSpace::from_vectors(space.cell(), k, space.bound(), split.kernel)
    }

    /// Traces of vectors on `cell` onto every block of `layout` (whose cells are faces of
    /// `cell`).
    pub fn trace_to_layout(
        &self,
        cell: usize,
        k: usize,
        layout: &FamilyLayout,
        vectors: &[SparseVec<S>],
    ) -> Vec<SparseVec<S>> {
        let mut maps: Vec<PullbackMap<S>> = layout
            .cells()
            .iter()
            .enumerate()
            .map(|(i, &f)| {
                let map = self.complex.incidence(cell, f).expect("layout cells are faces");
                PullbackMap::new(map, k, layout.block(i).1.bound())
            })
            .collect();
        vectors
            .iter()
            .map(|v| {
                let parts: Vec<SparseVec<S>> = maps.iter_mut().map(|pb| pb.apply(v)).collect();
                layout.assemble(&parts)
            })
            .collect()
    }

    /// Kernel of the pairwise compatibility constraints on families over `cells`, where
    /// block `i` ranges over `spaces[i]`.
    fn compatible_families(&self, layout: &FamilyLayout, spaces: &[&FormSpace<S>], k: usize) -> Subspace<S> {
        let cells = layout.cells();
        let bound = layout.block(0).1.bound();
        // constraint blocks: (i, j, common face)
        let mut constraints = Vec::new();
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                for c in self.complex.common_faces(cells[i], cells[j]) {
                    if self.complex.cell(c).dim() >= k {
                        constraints.push((i, j, c));
                    }
                }
            }
        }
        let targets = FamilyLayout::new(&self.complex, constraints.iter().map(|t| t.2).collect(), k, bound);
        let mut domain = Vec::new();
        let mut images = Vec::new();
        for (i, space) in spaces.iter().enumerate() {
            let (offset, _) = layout.block(i);
            let vectors = space.with_bound(bound).expect("layout bound covers the spaces");
            let mut parts: Vec<(usize, PullbackMap<S>, bool)> = constraints
                .iter()
                .enumerate()
                .filter(|(_, (a, b, _))| *a == i || *b == i)
                .map(|(t, (a, _, c))| {
                    let map = self.complex.incidence(cells[i], *c).expect("common face");
                    (t, PullbackMap::new(map, k, bound), *a == i)
                })
                .collect();
            for v in vectors.vectors() {
                let mut blocks = vec![SparseVec::new(); constraints.len()];
                for (t, pb, positive) in parts.iter_mut() {
                    let tr = pb.apply(v);
                    blocks[*t] = if *positive { tr } else { tr.neg() };
                }
                domain.push(v.shifted(offset));
                images.push(targets.assemble(&blocks));
            }
        }
        let split = split_map(&domain, &images, targets.total());
        Subspace::new(layout.total(), split.kernel)
    }

    /// Layout of families on the facets of `cell` that carry `k`-forms.
    pub fn boundary_layout(&self, cell: usize, k: usize, bound: usize) -> FamilyLayout {
        let facets: Vec<usize> = self.complex.facets(cell).map(|inc| inc.face).collect();
        FamilyLayout::new(&self.complex, facets, k, bound)
    }

    /// `A^k(∂T)`: compatible families on the facets of `cell`.
    pub fn boundary_families(&self, cell: usize, k: usize) -> BoundaryFamilies<S> {
        self.boundary_families_with_bound(cell, k, self.max_bound())
    }

    /// [`Self::boundary_families`] in the coordinates of a given bound, which must cover
    /// every face space.
    pub fn boundary_families_with_bound(&self, cell: usize, k: usize, bound: usize) -> BoundaryFamilies<S> {
        let layout = self.boundary_layout(cell, k, bound);
        if layout.cells().is_empty() || layout.total() == 0 {
            return BoundaryFamilies { space: Subspace::zero(layout.total()), layout };
        }
        let spaces: Vec<&FormSpace<S>> = layout.cells().iter().map(|&f| &self.spaces[f][k]).collect();
        let space = self.compatible_families(&layout, &spaces, k);
        BoundaryFamilies { layout, space }
    }

    /// Surjectivity of the trace `A^k(T) → A^k(∂T)`.
    pub fn has_extensions(&self, cell: usize, k: usize) -> bool {
        let fam = self.boundary_families(cell, k);
        if fam.space.is_zero() {
            return true;
        }
        let space = self.spaces[cell][k].with_bound(self.max_bound()).expect("max bound");
        let traces = self.trace_to_layout(cell, k, &fam.layout, space.vectors());
        rank_of(traces) == fam.space.dim()
    }

    /// Dimension of the space of globally compatible families over the maximal cells.
    pub fn global_space_dim(&self, k: usize) -> usize {
        let tops: Vec<usize> =
            self.complex.maximal_cells().into_iter().filter(|&c| self.complex.cell(c).dim() >= k).collect();
        if tops.is_empty() {
            return 0;
        }
        let layout = FamilyLayout::new(&self.complex, tops, k, self.max_bound());
        let spaces: Vec<&FormSpace<S>> = layout.cells().iter().map(|&c| &self.spaces[c][k]).collect();
        self.compatible_families(&layout, &spaces, k).dim()
    }

    /// `Σ_T dim A^k_0(T)` over all cells.
    pub fn boundary_dim_sum(&self, k: usize) -> usize {
        (0..self.complex.len())
            .filter(|&c| self.complex.cell(c).dim() >= k)
            .map(|c| self.boundary_restricted(c, k).dim())
            .sum()
    }
}

/// Graded tensor product of systems on two reference cube lattices.
pub fn tensor_product<S: Scalar>(b: &Fes<S>, c: &Fes<S>) -> Result<Fes<S>> {
    let ub = b.complex.cell(b.top_cell()).shape;
    let vc = c.complex.cell(c.top_cell()).shape;
    if !ub.is_cube() || !vc.is_cube() {
        return Err(FesError::TensorNeedsCubes);
    }
    let (m, p) = (ub.dim(), vc.dim());
    let product = CellComplex::from_reference(RefCell::cube(m + p));
    let spaces = (0..product.len())
        .map(|id| {
            let verts = &product.cell(id).vertices;
            let low: Vec<usize> = verts.iter().map(|v| v & ((1 << m) - 1)).collect();
            let high: Vec<usize> = verts.iter().map(|v| v >> m).collect();
            let fb = b.complex.find(&dedup(low)).ok_or(FesError::NotIncident)?;
            let fc = c.complex.find(&dedup(high)).ok_or(FesError::NotIncident)?;
            let dim = product.cell(id).dim();
            (0..=dim).map(|k| tensor_spaces(b.spaces(fb), c.spaces(fc), k)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Fes::new(product, spaces)
}

fn dedup(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::CellComplex;
    use crate::Rational;

    type Q = Fes<Rational>;

    #[test]
    fn polynomial_systems_are_element_systems() {
        for r in 0..=2 {
            assert!(Q::reference(RefCell::cube(2), SpaceFamily::Pr, r).unwrap().is_element_system());
            assert!(Q::reference(RefCell::simplex(2), SpaceFamily::PrMinus, r + 1).unwrap().is_element_system());
        }
        assert!(Q::reference(RefCell::cube(3), SpaceFamily::Qr, 1).unwrap().is_element_system());
    }

    #[test]
    fn escaping_trace_breaks_the_element_system() {
        let mut a = Q::reference(RefCell::cube(2), SpaceFamily::Pr, 1).unwrap();
        let edge = a.complex().cells_of_dim(1)[0];
        let cell = a.space(edge, 1).cell();
        a.replace(edge, 1, FormSpace::zero(cell, 1, 1)).unwrap();
        assert!(!a.is_element_system());
    }

    #[test]
    fn extension_property_of_polynomial_systems() {
        // P_r on the square only extends top forms: edge data of full degree r in the
        // tangential direction needs degree r+1 inside
        let pr = Q::reference(RefCell::cube(2), SpaceFamily::Pr, 2).unwrap();
        let top = pr.top_cell();
        assert!(!pr.has_extensions(top, 0));
        assert!(!pr.has_extensions(top, 1));
        assert!(pr.has_extensions(top, 2));
        let trimmed = Q::reference(RefCell::simplex(2), SpaceFamily::PrMinus, 2).unwrap();
        for k in 0..=2 {
            assert!(trimmed.has_extensions(trimmed.top_cell(), k));
        }
        let q = Q::reference(RefCell::cube(2), SpaceFamily::Qr, 2).unwrap();
        for k in 0..=2 {
            assert!(q.has_extensions(q.top_cell(), k));
        }
    }

    #[test]
    fn global_dimensions_on_small_meshes() {
        let intervals = CellComplex::from_top_cells(&[
            (RefCell::cube(1), vec![0, 1]),
            (RefCell::cube(1), vec![1, 2]),
        ])
        .unwrap();
        let p1 = Q::polynomial(intervals, SpaceFamily::Pr, 1).unwrap();
        assert_eq!(p1.global_space_dim(0), 3);
        assert_eq!(p1.boundary_dim_sum(0), 3);
        assert_eq!(p1.global_space_dim(1), 4);
        let squares = CellComplex::from_top_cells(&[
            (RefCell::cube(2), vec![0, 1, 2, 3]),
            (RefCell::cube(2), vec![1, 4, 3, 5]),
        ])
        .unwrap();
        let q1 = Q::polynomial(squares, SpaceFamily::Qr, 1).unwrap();
        assert_eq!(q1.global_space_dim(0), 6);
    }

    #[test]
    fn tensor_of_interval_systems() {
        let p = Q::reference(RefCell::cube(1), SpaceFamily::Pr, 2).unwrap();
        let t = tensor_product(&p, &p).unwrap();
        let q = Q::reference(RefCell::cube(2), SpaceFamily::Qr, 2).unwrap();
        for id in 0..t.complex().len() {
            for k in 0..t.spaces(id).len() {
                assert!(t.space(id, k).same_span(q.space(id, k)).unwrap());
            }
        }
        assert!(t.is_element_system());
    }
}
