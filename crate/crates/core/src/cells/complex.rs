use std::collections::{BTreeSet, HashMap};

use crate::cells::refcell::{faces, RefCell};
use crate::error::{FesError, Result};
use crate::polyforms::AffineMap;
use crate::scalar::Scalar;

/// A cell of a complex: a reference cell together with the global ids of its reference
/// vertices, in reference order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub shape: RefCell,
    pub vertices: Vec<usize>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.shape.dim()
    }
}

/// A proper face of a cell, with the affine map from the face's coordinates into the cell's.
#[derive(Clone, Debug)]
pub struct Incidence<S> {
    pub face: usize,
    pub map: AffineMap<S>,
}

/// A small cellular complex of affine images of reference cells, glued face to face.
///
/// Cells are sorted by dimension. Each cell lists all of its proper faces.
#[derive(Clone, Debug)]
pub struct CellComplex<S> {
    cells: Vec<Cell>,
    faces: Vec<Vec<Incidence<S>>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl<S: Scalar> CellComplex<S> {
    /// The face lattice of a single reference cell.
    pub fn from_reference(cell: RefCell) -> Self {
        Self::from_top_cells(&[(cell, (0..cell.vertex_count()).collect())])
            .expect("a reference cell is a valid complex")
    }

    /// Builds the complex generated by the given top cells; faces with equal vertex sets are
    /// identified.
    pub fn from_top_cells(tops: &[(RefCell, Vec<usize>)]) -> Result<Self> {
        let mut found: Vec<Cell> = Vec::new();
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for (shape, verts) in tops {
            if verts.len() != shape.vertex_count() {
                return Err(FesError::DimensionMismatch { expected: shape.vertex_count(), found: verts.len() });
            }
            if verts.iter().collect::<BTreeSet<_>>().len() != verts.len() {
                return Err(FesError::InvalidParameter("repeated vertex in a cell".into()));
            }
            for d in 0..=shape.dim() {
                for f in faces(shape, d)? {
                    let global: Vec<usize> = f.vertices().iter().map(|&v| verts[v]).collect();
                    let mut key = global.clone();
                    key.sort_unstable();
                    if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                        e.insert(found.len());
                        found.push(Cell { shape: f.cell(), vertices: global });
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..found.len()).collect();
        order.sort_by_key(|&i| (found[i].dim(), i));
        let cells: Vec<Cell> = order.iter().map(|&i| found[i].clone()).collect();
        let lookup: HashMap<Vec<usize>, usize> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut key = c.vertices.clone();
                key.sort_unstable();
                (key, i)
            })
            .collect();
        let mut incidences = Vec::with_capacity(cells.len());
        for cell in &cells {
            let mut list = Vec::new();
            for d in 0..cell.dim() {
                for f in faces(&cell.shape, d)? {
                    let mut key: Vec<usize> = f.vertices().iter().map(|&v| cell.vertices[v]).collect();
                    key.sort_unstable();
                    let id = lookup[&key];
                    let face = &cells[id];
                    let images: Vec<Vec<S>> = face
                        .vertices
                        .iter()
                        .map(|g| {
                            let pos = cell.vertices.iter().position(|v| v == g).expect("shared vertex");
                            cell.shape.vertex_coords(pos)
                        })
                        .collect();
                    list.push(Incidence { face: id, map: face.shape.affine_from_vertices(&images)? });
                }
            }
            incidences.push(list);
        }
        Ok(Self { cells, faces: incidences, lookup })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> &Cell {
        &self.cells[id]
    }

    pub fn dim(&self) -> usize {
        self.cells.iter().map(Cell::dim).max().unwrap_or(0)
    }

    pub fn cells_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].dim() == d).collect()
    }

    /// All proper faces of `id`.
    pub fn faces(&self, id: usize) -> &[Incidence<S>] {
        &self.faces[id]
    }

    pub fn facets(&self, id: usize) -> impl Iterator<Item = &Incidence<S>> {
        let d = self.cells[id].dim();
        self.faces[id].iter().filter(move |inc| self.cells[inc.face].dim() + 1 == d)
    }

    pub fn incidence(&self, cell: usize, face: usize) -> Option<&AffineMap<S>> {
        self.faces[cell].iter().find(|inc| inc.face == face).map(|inc| &inc.map)
    }

    pub fn is_face_of(&self, face: usize, cell: usize) -> bool {
        self.faces[cell].iter().any(|inc| inc.face == face)
    }

    /// Cells that are not a proper face of any other cell.
    pub fn maximal_cells(&self) -> Vec<usize> {
        let mut covered = vec![false; self.cells.len()];
        for list in &self.faces {
            for inc in list {
                covered[inc.face] = true;
            }
        }
        (0..self.cells.len()).filter(|&i| !covered[i]).collect()
    }

    pub fn find(&self, vertices: &[usize]) -> Option<usize> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.lookup.get(&key).copied()
    }

    /// Maximal cells among the common faces of `a` and `b` (the cells themselves excluded).
    pub fn common_faces(&self, a: usize, b: usize) -> Vec<usize> {
        let common: Vec<usize> = self.faces[a]
            .iter()
            .map(|inc| inc.face)
            .filter(|&f| f == b || self.is_face_of(f, b))
            .collect();
        common
            .iter()
            .copied()
            .filter(|&f| !common.iter().any(|&g| g != f && self.is_face_of(f, g)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type C = CellComplex<Rational>;

    #[test]
    fn reference_square_lattice() {
        let c = C::from_reference(RefCell::cube(2));
        assert_eq!(c.len(), 9);
        assert_eq!(c.cells_of_dim(0).len(), 4);
        assert_eq!(c.cells_of_dim(1).len(), 4);
        assert_eq!(c.maximal_cells(), vec![8]);
        assert_eq!(c.facets(8).count(), 4);
        assert_eq!(c.faces(8).len(), 8);
    }

    #[test]
    fn composite_inclusions_commute() {
        let c = C::from_reference(RefCell::cube(3));
        let top = c.maximal_cells()[0];
        for inc in c.faces(top) {
            for sub in c.faces(inc.face) {
                let direct = c.incidence(top, sub.face).unwrap();
                assert_eq!(&inc.map.compose(&sub.map).unwrap(), direct);
            }
        }
        let s = C::from_reference(RefCell::simplex(3));
        let top = s.maximal_cells()[0];
        for inc in s.faces(top) {
            for sub in s.faces(inc.face) {
                assert_eq!(&inc.map.compose(&sub.map).unwrap(), s.incidence(top, sub.face).unwrap());
            }
        }
    }

    #[test]
    fn two_squares_share_an_edge() {
        let c = C::from_top_cells(&[
            (RefCell::cube(2), vec![0, 1, 2, 3]),
            (RefCell::cube(2), vec![1, 4, 3, 5]),
        ])
        .unwrap();
        assert_eq!(c.cells_of_dim(0).len(), 6);
        assert_eq!(c.cells_of_dim(1).len(), 7);
        let tops = c.maximal_cells();
        assert_eq!(tops.len(), 2);
        let shared = c.common_faces(tops[0], tops[1]);
        assert_eq!(shared, vec![c.find(&[1, 3]).unwrap()]);
    }

    #[test]
    fn common_faces_of_adjacent_facets() {
        let c = C::from_reference(RefCell::cube(3));
        let top = c.maximal_cells()[0];
        let facets: Vec<usize> = c.facets(top).map(|inc| inc.face).collect();
        let mut shared_edges = 0;
        for (i, &a) in facets.iter().enumerate() {
            for &b in &facets[i + 1..] {
                let common = c.common_faces(a, b);
                assert!(common.len() <= 1);
                shared_edges += common.len();
            }
        }
        assert_eq!(shared_edges, 12);
    }
}
