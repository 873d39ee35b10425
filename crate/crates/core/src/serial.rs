//! JSON form of exact finite element systems.
//!
//! Rationals are `{"num": "...", "den": "..."}` with decimal strings, so nothing is rounded.
//! A space is the list of its basis columns in the canonical monomial coordinates; each
//! nonzero entry also names its monomial `x^alpha dx_J` for readability.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cells::{CellComplex, Fes, FormBasis, FormSpace, RefCell};
use crate::error::{FesError, Result};
use crate::linalg::{Mat, SparseVec};
use crate::Rational;

pub const FORMAT: &str = "minfes-fes/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        Self { num: q.numer().to_string(), den: q.denom().to_string() }
    }
}

impl TryFrom<&RationalJson> for Rational {
    type Error = FesError;

    fn try_from(j: &RationalJson) -> Result<Rational> {
        let parse = |s: &str| s.parse::<BigInt>().map_err(|e| FesError::Serialization(format!("{s:?}: {e}")));
        let den = parse(&j.den)?;
        if den == BigInt::from(0) {
            return Err(FesError::Serialization("zero denominator".into()));
        }
        Ok(Rational::new(parse(&j.num)?, den))
    }
}

pub fn matrix_json(m: &Mat<Rational>) -> Vec<Vec<RationalJson>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| RationalJson::from(&m[(i, j)])).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub index: usize,
    pub alpha: Vec<u16>,
    pub dx: Vec<usize>,
    pub value: RationalJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub degree: usize,
    pub bound: usize,
    pub dim: usize,
    pub basis: Vec<Vec<EntryJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub shape: RefCell,
    pub vertices: Vec<usize>,
    /// `spaces[k]` for `k = 0..=dim`.
    pub spaces: Vec<SpaceJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FesJson {
    pub format: String,
    pub cells: Vec<CellJson>,
}

fn space_json(s: &FormSpace<Rational>) -> SpaceJson {
    let basis = s.basis();
    let column = |v: &SparseVec<Rational>| {
        v.iter()
            .map(|(index, c)| {
                let (j, alpha) = basis.element(index);
                EntryJson { index, alpha: alpha.exponents().to_vec(), dx: j.elements().collect(), value: c.into() }
            })
            .collect()
    };
    SpaceJson { degree: s.degree(), bound: s.bound(), dim: s.dim(), basis: s.vectors().iter().map(column).collect() }
}

fn space_from_json(cell: RefCell, j: &SpaceJson) -> Result<FormSpace<Rational>> {
    let basis = FormBasis::new(cell.dim(), j.degree, j.bound);
    let mut vectors = Vec::with_capacity(j.basis.len());
    for col in &j.basis {
        let mut entries = Vec::with_capacity(col.len());
        for e in col {
            if e.index >= basis.dim() {
                return Err(FesError::Serialization(format!("index {} outside a basis of size {}", e.index, basis.dim())));
            }
            let (dx, alpha) = basis.element(e.index);
            if alpha.exponents() != e.alpha.as_slice() || dx.elements().collect::<Vec<_>>() != e.dx {
                return Err(FesError::Serialization(format!("entry {} names the wrong monomial", e.index)));
            }
            entries.push((e.index, Rational::try_from(&e.value)?));
        }
        vectors.push(SparseVec::from_entries(entries));
    }
    let space = FormSpace::from_vectors(cell, j.degree, j.bound, vectors);
    if space.dim() != j.dim {
        return Err(FesError::Serialization(format!("basis of {} columns spans dimension {}", j.dim, space.dim())));
    }
    Ok(space)
}

pub fn fes_json(fes: &Fes<Rational>) -> FesJson {
    let cells = fes
        .complex()
        .cells()
        .iter()
        .enumerate()
        .map(|(id, c)| CellJson {
            shape: c.shape,
            vertices: c.vertices.clone(),
            spaces: fes.spaces(id).iter().map(space_json).collect(),
        })
        .collect();
    FesJson { format: FORMAT.into(), cells }
}

/// Rebuilds the complex from its maximal cells and checks it lists the same cells.
pub fn fes_from_json(j: &FesJson) -> Result<Fes<Rational>> {
    if j.format != FORMAT {
        return Err(FesError::Serialization(format!("unknown format {:?}", j.format)));
    }
    let contained = |a: &CellJson, b: &CellJson| a.vertices.iter().all(|v| b.vertices.contains(v));
    let tops: Vec<(RefCell, Vec<usize>)> = j
        .cells
        .iter()
        .filter(|c| !j.cells.iter().any(|o| o.shape.dim() > c.shape.dim() && contained(c, o)))
        .map(|c| (c.shape, c.vertices.clone()))
        .collect();
    let complex = CellComplex::from_top_cells(&tops)?;
    let same = complex.len() == j.cells.len()
        && complex.cells().iter().zip(&j.cells).all(|(c, d)| c.shape == d.shape && c.vertices == d.vertices);
    if !same {
        return Err(FesError::Serialization("cell list is not the face lattice of its maximal cells".into()));
    }
    let spaces = j
        .cells
        .iter()
        .map(|c| c.spaces.iter().map(|s| space_from_json(c.shape, s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Fes::new(complex, spaces)
}

pub fn to_json_string(fes: &Fes<Rational>) -> Result<String> {
    serde_json::to_string_pretty(&fes_json(fes)).map_err(|e| FesError::Serialization(e.to_string()))
}

pub fn from_json_str(s: &str) -> Result<Fes<Rational>> {
    let j: FesJson = serde_json::from_str(s).map_err(|e| FesError::Serialization(e.to_string()))?;
    fes_from_json(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::SpaceFamily;
    use crate::construct::build_tnt;
    use crate::scalar::Scalar;

    #[test]
    fn rationals_keep_their_digits() {
        let big = Rational::int(1_000_000_007);
        let q = Rational::ratio(-7, 3) * &big * &big * &big;
        let j = RationalJson::from(&q);
        assert_eq!(j.den, "3");
        assert_eq!(Rational::try_from(&j).unwrap(), q);
        assert!(Rational::try_from(&RationalJson { num: "1".into(), den: "0".into() }).is_err());
        assert!(Rational::try_from(&RationalJson { num: "x".into(), den: "1".into() }).is_err());
    }

    #[test]
    fn systems_round_trip() {
        let tnt = build_tnt::<Rational>(2, 1).unwrap();
        let back = from_json_str(&to_json_string(&tnt).unwrap()).unwrap();
        for c in 0..tnt.complex().len() {
            assert_eq!(tnt.spaces(c), back.spaces(c));
        }
        let two = CellComplex::from_top_cells(&[
            (RefCell::simplex(2), vec![0, 1, 2]),
            (RefCell::simplex(2), vec![1, 2, 3]),
        ])
        .unwrap();
        let fes = Fes::<Rational>::polynomial(two, SpaceFamily::PrMinus, 1).unwrap();
        let back = fes_from_json(&fes_json(&fes)).unwrap();
        assert_eq!(back.complex().cells(), fes.complex().cells());
    }

    #[test]
    fn tampered_entries_are_rejected() {
        let fes = Fes::<Rational>::reference(RefCell::cube(1), SpaceFamily::Pr, 1).unwrap();
        let mut j = fes_json(&fes);
        j.cells[2].spaces[0].basis[0][0].alpha = vec![5];
        assert!(fes_from_json(&j).is_err());
        let mut j = fes_json(&fes);
        j.format = "other".into();
        assert!(fes_from_json(&j).is_err());
    }
}
