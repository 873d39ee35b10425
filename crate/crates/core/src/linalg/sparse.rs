use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVec<S> {
    entries: Vec<(usize, S)>,
}

impl<S> Default for SparseVec<S> {
    fn default() -> Self {
        Self { entries: Vec::new() }
    }
}

impl<S: Scalar> SparseVec<S> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a vector from unordered entries, summing duplicates and dropping zeros.
    pub fn from_entries(mut entries: Vec<(usize, S)>) -> Self {
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, S)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += &v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        Self { entries: out }
    }

    pub fn from_dense(values: &[S]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        Self { entries }
    }

    pub fn unit(index: usize) -> Self {
        Self { entries: vec![(index, S::one())] }
    }

    pub fn to_dense(&self, len: usize) -> Vec<S> {
        let mut out = vec![S::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, S)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, S)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn leading(&self) -> Option<(usize, &S)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, index: usize) -> Option<&S> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }

    pub fn scale(&mut self, c: &S) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, v) in &mut self.entries {
            *v *= c;
        }
    }

    pub fn scaled(&self, c: &S) -> Self {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-S::one())
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &S, other: &Self) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) if i < j => out.push(a.next().unwrap()),
                (Some((i, _)), Some((j, _))) if i > j => {
                    let (j, w) = b.next().unwrap();
                    out.push((*j, c.times(w)));
                }
                (Some(_), Some(_)) => {
                    let (i, mut v) = a.next().unwrap();
                    let (_, w) = b.next().unwrap();
                    v += &c.times(w);
                    if !v.is_zero() {
                        out.push((i, v));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (j, w) = b.next().unwrap();
                    out.push((*j, c.times(w)));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
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

    pub fn dot(&self, other: &Self) -> S {
        let mut acc = S::zero();
        let (mut p, mut q) = (0, 0);
        while p < self.entries.len() && q < other.entries.len() {
            let (i, a) = &self.entries[p];
            let (j, b) = &other.entries[q];
            match i.cmp(j) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    acc += &a.times(b);
                    p += 1;
                    q += 1;
                }
            }
        }
        acc
    }

    pub fn shifted(&self, offset: usize) -> Self {
        Self {
            entries: self.entries.iter().map(|(i, v)| (i + offset, v.clone())).collect(),
        }
    }

    /// Entries with index in `[lo, hi)`, re-based to start at zero.
    pub fn window(&self, lo: usize, hi: usize) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| *i >= lo && *i < hi)
                .map(|(i, v)| (i - lo, v.clone()))
                .collect(),
        }
    }

    /// Applies an index map. The map must be strictly increasing on the support.
    pub fn reindexed(&self, map: impl Fn(usize) -> usize) -> Self {
        let entries: Vec<_> = self.entries.iter().map(|(i, v)| (map(*i), v.clone())).collect();
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Self { entries }
    }

    /// Concatenation `[self | other shifted by offset]`; `self` must live below `offset`.
    pub fn concat(&self, offset: usize, other: &Self) -> Self {
        debug_assert!(self.max_index().is_none_or(|m| m < offset));
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|(i, v)| (i + offset, v.clone())));
        Self { entries }
    }
}

/// Incrementally built row echelon form.
///
/// Every stored row has a leading coefficient 1 at a distinct pivot index. Rows are only
/// reduced at their leading entries (semi-echelon) until [`Echelon::into_rref`] is called.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    rows: Vec<SparseVec<S>>,
    pivots: BTreeMap<usize, usize>,
}

impl<S> Default for Echelon<S> {
    fn default() -> Self {
        Self { rows: Vec::new(), pivots: BTreeMap::new() }
    }
}

impl<S: Scalar> Echelon<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<S>] {
        &self.rows
    }

    pub fn has_pivot(&self, index: usize) -> bool {
        self.pivots.contains_key(&index)
    }

    /// Eliminates leading entries of `v` until its leading index is not a pivot.
    pub fn reduce_leading(&self, mut v: SparseVec<S>) -> SparseVec<S> {
        loop {
            let (lead, coeff) = match v.leading() {
                Some((i, c)) => (i, c.clone()),
                None => return v,
            };
            match self.pivots.get(&lead) {
                Some(&r) => v.add_scaled(&-coeff, &self.rows[r]),
                None => return v,
            }
        }
    }

    /// Reduces `v`; if a nonzero remainder survives it becomes a new row. Returns the remainder
    /// before normalization (zero when `v` was already in the span).
    pub fn insert(&mut self, v: SparseVec<S>) -> bool {
        let mut v = self.reduce_leading(v);
        let Some((lead, coeff)) = v.leading().map(|(i, c)| (i, c.clone())) else {
            return false;
        };
        v.scale(&S::one().over(&coeff));
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn contains(&self, v: &SparseVec<S>) -> bool {
        self.reduce_leading(v.clone()).is_zero()
    }

    /// Reduced row echelon form, rows sorted by pivot. Canonical for the span.
    pub fn into_rref(self) -> Vec<SparseVec<S>> {
        let mut order: Vec<(usize, SparseVec<S>)> =
            self.pivots.iter().map(|(p, r)| (*p, self.rows[*r].clone())).collect();
        let pivot_pos: BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(k, (p, _))| (*p, k)).collect();
        for k in (0..order.len()).rev() {
            let mut row = std::mem::take(&mut order[k].1);
            // Rows above k are already fully reduced; clear every non-leading pivot entry.
            let mut cursor = 1;
            loop {
                let next = row.entries()[cursor.min(row.nnz())..]
                    .iter()
                    .position(|(i, _)| pivot_pos.contains_key(i))
                    .map(|off| cursor + off);
                let Some(pos) = next else { break };
                let (idx, c) = row.entries()[pos].clone();
                let other = &order[pivot_pos[&idx]].1;
                row.add_scaled(&-c, other);
                cursor = pos;
            }
            order[k].1 = row;
        }
        order.into_iter().map(|(_, r)| r).collect()
    }
}

/// Rank of a family of vectors.
pub fn rank_of<S: Scalar>(vectors: impl IntoIterator<Item = SparseVec<S>>) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// Canonical RREF rows spanning the same space as `vectors`.
pub fn rref_of<S: Scalar>(vectors: impl IntoIterator<Item = SparseVec<S>>) -> Vec<SparseVec<S>> {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v);
    }
    ech.into_rref()
}

/// Result of splitting a linear map on a basis into image and kernel.
pub struct MapSplit<S> {
    /// Semi-echelon rows spanning the image, in target coordinates.
    pub image: Echelon<S>,
    /// Kernel vectors in domain coordinates (not canonicalized).
    pub kernel: Vec<SparseVec<S>>,
}

/// Given linearly independent `domain` vectors and their images (target coordinates all below
/// `target_dim`), computes the image and the kernel of the map on their span.
pub fn split_map<S: Scalar>(
    domain: &[SparseVec<S>],
    images: &[SparseVec<S>],
    target_dim: usize,
) -> MapSplit<S> {
    assert_eq!(domain.len(), images.len());
    let mut tagged = Echelon::new();
    let mut kernel = Vec::new();
    for (d, im) in domain.iter().zip(images) {
        debug_assert!(im.max_index().is_none_or(|m| m < target_dim));
        let v = tagged.reduce_leading(im.concat(target_dim, d));
        match v.leading() {
            None => unreachable!("domain vectors must be independent"),
            Some((lead, _)) if lead >= target_dim => kernel.push(v.window(target_dim, usize::MAX)),
            Some(_) => {
                tagged.insert(v);
            }
        }
    }
    let mut image = Echelon::new();
    for row in tagged.rows {
        image.insert(row.window(0, target_dim));
    }
    MapSplit { image, kernel }
}

/// Solves `Σ c_i images[i] = target` and returns `Σ c_i domain[i]`, or `None` when the
/// target is outside the image.
pub fn solve_in_span<S: Scalar>(
    domain: &[SparseVec<S>],
    images: &[SparseVec<S>],
    target_dim: usize,
    target: &SparseVec<S>,
) -> Option<SparseVec<S>> {
    let mut tagged = Echelon::new();
    for (d, im) in domain.iter().zip(images) {
        let v = tagged.reduce_leading(im.concat(target_dim, d));
        if v.leading().is_some_and(|(lead, _)| lead < target_dim) {
            tagged.insert(v);
        }
    }
    let rest = tagged.reduce_leading(target.concat(target_dim, &SparseVec::new()));
    match rest.leading() {
        Some((lead, _)) if lead < target_dim => None,
        _ => Some(rest.window(target_dim, usize::MAX).neg()),
    }
}
