use crate::error::{FesError, Result};
use crate::linalg::mat::Mat;
use crate::linalg::sparse::{rref_of, split_map, SparseVec};
use crate::scalar::Scalar;

/// A linear subspace of `S^ambient_dim`, stored as the rows of its reduced row echelon
/// form. Two subspaces are equal as sets iff they compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S> {
    ambient_dim: usize,
    rows: Vec<SparseVec<S>>,
}

/// Operation selector for [`span_calc`].
#[derive(Clone, Debug)]
pub enum SpanOp<S> {
    Sum,
    Intersect,
    QuotientDim,
    Contains(SparseVec<S>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpanResult<S> {
    Space(Subspace<S>),
    Dim(usize),
    Bool(bool),
}

impl<S: Scalar> Subspace<S> {
    pub fn new(ambient_dim: usize, vectors: impl IntoIterator<Item = SparseVec<S>>) -> Self {
        let rows = rref_of(vectors);
        debug_assert!(rows.iter().all(|r| r.max_index().is_none_or(|m| m < ambient_dim)));
        Self { ambient_dim, rows }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, rows: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self { ambient_dim, rows: (0..ambient_dim).map(SparseVec::unit).collect() }
    }

    /// Span of the columns of `m`.
    pub fn column_span(m: &Mat<S>) -> Self {
        Self::new(m.rows(), (0..m.cols()).map(|j| m.column(j)))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Canonical basis vectors (rows of the RREF).
    pub fn vectors(&self) -> &[SparseVec<S>] {
        &self.rows
    }

    /// Basis as the columns of an `ambient_dim × dim` matrix (reduced column echelon form).
    pub fn basis(&self) -> Mat<S> {
        Mat::from_columns(self.ambient_dim, &self.rows)
    }

    fn pivot_row(&self, index: usize) -> Option<usize> {
        self.rows
            .binary_search_by_key(&index, |r| r.leading().map(|(i, _)| i).unwrap())
            .ok()
    }

    /// Remainder of `v` after eliminating every pivot coordinate; a linear projection onto a
    /// complement of the subspace, zero exactly on the subspace.
    pub fn residual(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut out = v.clone();
        let mut cursor = 0;
        loop {
            let next = out.entries()[cursor.min(out.nnz())..]
                .iter()
                .position(|(i, _)| self.pivot_row(*i).is_some())
                .map(|off| cursor + off);
            let Some(pos) = next else { return out };
            let (idx, c) = out.entries()[pos].clone();
            out.add_scaled(&-c, &self.rows[self.pivot_row(idx).unwrap()]);
            cursor = pos;
        }
    }

    pub fn contains(&self, v: &SparseVec<S>) -> bool {
        self.residual(v).is_zero()
    }

    pub fn contains_space(&self, other: &Self) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(FesError::AmbientMismatch { left: self.ambient_dim, right: other.ambient_dim });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::new(self.ambient_dim, self.rows.iter().chain(&other.rows).cloned()))
    }

    /// Zassenhaus intersection.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let n = self.ambient_dim;
        let mut ech = crate::linalg::sparse::Echelon::new();
        for r in &self.rows {
            ech.insert(r.concat(n, r));
        }
        for r in &other.rows {
            ech.insert(r.clone());
        }
        let common = ech
            .rows()
            .iter()
            .filter(|r| r.leading().is_some_and(|(i, _)| i >= n))
            .map(|r| r.window(n, usize::MAX))
            .collect::<Vec<_>>();
        Ok(Self::new(n, common))
    }

    /// `dim self - dim other`, requiring `other ⊆ self`.
    pub fn quotient_dim(&self, other: &Self) -> Result<usize> {
        self.check_ambient(other)?;
        if !self.contains_space(other) {
            return Err(FesError::NotSubspace);
        }
        Ok(self.dim() - other.dim())
    }

    /// Kernel of a linear map given by the images of this subspace's canonical basis vectors.
    pub fn kernel_of_map(&self, images: &[SparseVec<S>], target_dim: usize) -> Self {
        self.kernel_of_map_with(images, target_dim, &self.rows)
    }

    /// Kernel of the map sending `domain[i]` to `images[i]`; `domain` must be a basis of a
    /// subspace of this ambient space.
    pub fn kernel_of_map_with(
        &self,
        images: &[SparseVec<S>],
        target_dim: usize,
        domain: &[SparseVec<S>],
    ) -> Self {
        let split = split_map(domain, images, target_dim);
        Self::new(self.ambient_dim, split.kernel)
    }

    /// Image and kernel together.
    pub fn split(&self, images: &[SparseVec<S>], target_dim: usize) -> (Self, Self) {
        let split = split_map(&self.rows, images, target_dim);
        let image = Subspace::new(target_dim, split.image.rows().iter().cloned());
        (image, Self::new(self.ambient_dim, split.kernel))
    }

    /// Elements `x` of this subspace with `pair(x, w) = 0` for all `w` in `others`.
    pub fn orthogonal_within(
        &self,
        others: &[SparseVec<S>],
        pair: impl Fn(&SparseVec<S>, &SparseVec<S>) -> S,
    ) -> Self {
        let images: Vec<_> = self
            .rows
            .iter()
            .map(|x| {
                SparseVec::from_entries(others.iter().enumerate().map(|(j, w)| (j, pair(x, w))).collect())
            })
            .collect();
        self.kernel_of_map(&images, others.len())
    }

    /// Re-embeds into a larger ambient space through an order-preserving index map, which
    /// keeps the echelon form canonical.
    pub fn reindexed(&self, ambient_dim: usize, map: impl Fn(usize) -> usize) -> Self {
        Self { ambient_dim, rows: self.rows.iter().map(|r| r.reindexed(&map)).collect() }
    }
}

/// Single entry point for the span-arithmetic operations.
pub fn span_calc<S: Scalar>(a: &Subspace<S>, b: &Subspace<S>, op: SpanOp<S>) -> Result<SpanResult<S>> {
    match op {
        SpanOp::Sum => a.sum(b).map(SpanResult::Space),
        SpanOp::Intersect => a.intersect(b).map(SpanResult::Space),
        SpanOp::QuotientDim => a.quotient_dim(b).map(SpanResult::Dim),
        SpanOp::Contains(v) => {
            if v.max_index().is_some_and(|m| m >= a.ambient_dim) {
                return Err(FesError::AmbientMismatch { left: a.ambient_dim, right: v.max_index().unwrap() + 1 });
            }
            Ok(SpanResult::Bool(a.contains(&v)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn sv(values: &[i64]) -> SparseVec<Rational> {
        SparseVec::from_dense(&values.iter().map(|&v| Rational::int(v)).collect::<Vec<_>>())
    }

    fn span(n: usize, vs: &[&[i64]]) -> Subspace<Rational> {
        Subspace::new(n, vs.iter().map(|v| sv(v)))
    }

    #[test]
    fn sum_of_axes_is_plane() {
        let x = span(2, &[&[1, 0]]);
        let y = span(2, &[&[0, 1]]);
        assert_eq!(x.sum(&y).unwrap(), Subspace::full(2));
    }

    #[test]
    fn intersect_with_self() {
        let a = span(3, &[&[1, 2, 3], &[0, 1, 1]]);
        assert_eq!(a.intersect(&a).unwrap(), a);
        let b = span(3, &[&[1, 0, 0], &[0, 0, 1]]);
        let i = a.intersect(&b).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&sv(&[1, 0, 1])));
    }

    #[test]
    fn quotient_dim_plane_by_axis() {
        let plane = Subspace::full(2);
        let x = span(2, &[&[1, 0]]);
        assert_eq!(plane.quotient_dim(&x).unwrap(), 1);
        assert_eq!(x.quotient_dim(&plane), Err(FesError::NotSubspace));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::<Rational>::full(2);
        let b = Subspace::full(3);
        assert!(matches!(a.sum(&b), Err(FesError::AmbientMismatch { .. })));
        assert!(matches!(
            span_calc(&a, &b, SpanOp::Intersect),
            Err(FesError::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn span_calc_dispatch() {
        let a = span(3, &[&[1, 1, 0]]);
        let full = Subspace::full(3);
        assert_eq!(span_calc(&full, &a, SpanOp::QuotientDim).unwrap(), SpanResult::Dim(2));
        assert_eq!(
            span_calc(&a, &full, SpanOp::Contains(sv(&[2, 2, 0]))).unwrap(),
            SpanResult::Bool(true)
        );
    }

    #[test]
    fn residual_projects_to_complement() {
        let a = span(3, &[&[1, 1, 0]]);
        let r = a.residual(&sv(&[3, 1, 2]));
        assert!(r.get(0).is_none());
        assert!(a.contains(&sv(&[3, 1, 2]).sub(&r)));
    }
}
