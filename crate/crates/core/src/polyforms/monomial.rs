use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::scalar::binomial;

/// Exponent vector of a monomial `x^α`.
///
/// Ordered graded-lexicographically: lower total degree first, then lexicographically
/// *descending* exponents, so that `x1^d` precedes `x1^(d-1) x2` precedes … `xn^d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(SmallVec<[u16; 4]>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        Self(SmallVec::from_elem(0, n))
    }

    pub fn new(exponents: &[u16]) -> Self {
        Self(SmallVec::from_slice(exponents))
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut m = Self::zero(n);
        m.0[i] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn get(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn product(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars(), other.nvars());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn with(&self, i: usize, e: u16) -> Self {
        let mut m = self.clone();
        m.0[i] = e;
        m
    }

    /// Position in the global graded order; independent of any degree bound.
    pub fn rank(&self) -> usize {
        let n = self.nvars() as i64;
        let d = self.degree() as i64;
        let below = if d == 0 { 0 } else { binomial(d - 1 + n, n) as usize };
        let mut within = 0usize;
        let mut rem = d;
        for (i, &a) in self.0.iter().enumerate() {
            let rest_vars = n - i as i64 - 1;
            for b in (a as i64 + 1)..=rem {
                within += compositions(rest_vars, rem - b);
            }
            rem -= a as i64;
        }
        below + within
    }

    /// Inverse of [`MultiIndex::rank`] for `n` variables.
    pub fn unrank(n: usize, rank: usize) -> Self {
        let ni = n as i64;
        if n == 0 {
            assert_eq!(rank, 0, "only the empty monomial exists in zero variables");
            return Self::zero(0);
        }
        let mut d: i64 = 0;
        while binomial(d + ni, ni) as usize <= rank {
            d += 1;
        }
        let mut within = rank - if d == 0 { 0 } else { binomial(d - 1 + ni, ni) as usize };
        let mut out = Self::zero(n);
        let mut rem = d;
        for i in 0..n - 1 {
            let rest_vars = ni - i as i64 - 1;
            let mut a = rem;
            loop {
                let count = compositions(rest_vars, rem - a);
                if within < count {
                    break;
                }
                within -= count;
                a -= 1;
            }
            out.0[i] = a as u16;
            rem -= a;
        }
        out.0[n - 1] = rem as u16;
        out
    }
}

/// Number of exponent vectors of length `m` with total degree `e`.
fn compositions(m: i64, e: i64) -> usize {
    if m == 0 {
        usize::from(e == 0)
    } else {
        binomial(e + m - 1, m - 1) as usize
    }
}

/// Number of monomials of degree at most `r` in `n` variables.
pub fn monomial_count(n: usize, r: usize) -> usize {
    binomial((r + n) as i64, n as i64) as usize
}

/// All exponent vectors of total degree at most `r`, in the global graded order.
pub fn monomials_up_to(n: usize, r: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(monomial_count(n, r));
    for d in 0..=r {
        let mut cur = vec![0u16; n];
        push_degree(&mut out, &mut cur, 0, d);
    }
    out
}

fn push_degree(out: &mut Vec<MultiIndex>, cur: &mut [u16], pos: usize, rem: usize) {
    let n = cur.len();
    if n == 0 {
        if rem == 0 {
            out.push(MultiIndex::new(cur));
        }
        return;
    }
    if pos == n - 1 {
        cur[pos] = rem as u16;
        out.push(MultiIndex::new(cur));
        return;
    }
    for a in (0..=rem).rev() {
        cur[pos] = a as u16;
        push_degree(out, cur, pos + 1, rem - a);
    }
    cur[pos] = 0;
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Strictly increasing index set `J ⊆ {0, …, n-1}` labelling `dx_J`, stored as a bit mask.
///
/// Sets of equal size are ordered lexicographically on their sorted elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FormIndex(u32);

impl FormIndex {
    pub const EMPTY: FormIndex = FormIndex(0);

    pub fn from_mask(mask: u32) -> Self {
        Self(mask)
    }

    pub fn from_elements(elements: &[usize]) -> Self {
        Self(elements.iter().fold(0, |m, &i| m | (1 << i)))
    }

    /// `{0, …, n-1}`.
    pub fn full(n: usize) -> Self {
        Self(((1u64 << n) - 1) as u32)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn insert(self, i: usize) -> Self {
        Self(self.0 | (1 << i))
    }

    pub fn remove(self, i: usize) -> Self {
        Self(self.0 & !(1 << i))
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |i| mask & (1 << i) != 0)
    }

    pub fn complement(self, n: usize) -> Self {
        Self(Self::full(n).0 & !self.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    /// Number of elements of `self` strictly below `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u32 << i) - 1)).count_ones() as usize
    }

    /// Sign of `dx_self ∧ dx_other` relative to `dx_{self ∪ other}`; zero if they overlap.
    pub fn wedge_sign(self, other: Self) -> i8 {
        if !self.is_disjoint(other) {
            return 0;
        }
        let inversions: usize = other.elements().map(|b| self.len() - self.count_below(b)).sum();
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Lexicographic rank among the `k`-subsets of `{0, …, n-1}`.
    pub fn rank(self, n: usize) -> usize {
        let k = self.len() as i64;
        let mut rank = 0usize;
        let mut prev: i64 = -1;
        for (pos, c) in self.elements().enumerate() {
            let i = pos as i64 + 1;
            for j in (prev + 1)..(c as i64) {
                rank += binomial(n as i64 - 1 - j, k - i) as usize;
            }
            prev = c as i64;
        }
        rank
    }

    /// Inverse of [`FormIndex::rank`].
    pub fn unrank(n: usize, k: usize, mut rank: usize) -> Self {
        let mut out = Self::EMPTY;
        let mut c: i64 = 0;
        for i in 1..=k as i64 {
            loop {
                let count = binomial(n as i64 - 1 - c, k as i64 - i) as usize;
                if rank < count {
                    break;
                }
                rank -= count;
                c += 1;
            }
            out = out.insert(c as usize);
            c += 1;
        }
        out
    }

    /// All `k`-subsets of `{0, …, n-1}` in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<FormIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<FormIndex>) {
            if cur.len() == k {
                out.push(FormIndex::from_elements(cur));
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(n, k, i + 1, cur, out);
                cur.pop();
            }
        }
        rec(n, k, 0, &mut cur, &mut out);
        out
    }
}

impl Ord for FormIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for FormIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FormIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let els: Vec<_> = self.elements().map(|i| i + 1).collect();
        write!(f, "dx{els:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_order_matches_rank() {
        for n in 0..=4 {
            let all = monomials_up_to(n, 5);
            assert_eq!(all.len(), monomial_count(n, 5));
            for (i, m) in all.iter().enumerate() {
                assert_eq!(m.rank(), i, "{m:?}");
                assert_eq!(&MultiIndex::unrank(n, i), m);
            }
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn graded_lex_order() {
        let a = MultiIndex::new(&[2, 0]);
        let b = MultiIndex::new(&[1, 1]);
        let c = MultiIndex::new(&[0, 3]);
        assert!(a < b && b < c);
    }

    #[test]
    fn form_index_order_and_rank() {
        for n in 1..=5 {
            for k in 0..=n {
                let all = FormIndex::all(n, k);
                assert_eq!(all.len() as u128, binomial(n as i64, k as i64));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                for (i, j) in all.iter().enumerate() {
                    assert_eq!(j.rank(n), i);
                    assert_eq!(FormIndex::unrank(n, k, i), *j);
                }
            }
        }
    }

    #[test]
    fn wedge_signs() {
        let x = FormIndex::from_elements(&[0]);
        let y = FormIndex::from_elements(&[1]);
        let z = FormIndex::from_elements(&[2]);
        assert_eq!(x.wedge_sign(y), 1);
        assert_eq!(y.wedge_sign(x), -1);
        assert_eq!(x.wedge_sign(x), 0);
        assert_eq!(z.wedge_sign(x.union(y)), 1);
        assert_eq!(y.wedge_sign(x.union(z)), -1);
    }
}
