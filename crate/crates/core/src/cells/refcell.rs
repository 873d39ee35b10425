use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FesError, Result};
use crate::linalg::Mat;
use crate::polyforms::{AffineMap, FormIndex};
use crate::scalar::{binomial, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Simplex,
    Cube,
}

/// Reference cell: the unit simplex `{x ≥ 0, Σ x_i ≤ 1}` or the unit cube `[0,1]^n`.
///
/// Simplex vertices are numbered `0` (origin) and `i` (the unit vector `e_i`). Cube vertices
/// are numbered by the bit mask of their coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RefCell {
    shape: Shape,
    dim: usize,
}

impl RefCell {
    pub fn new(shape: Shape, dim: usize) -> Self {
        Self { shape, dim }
    }

    pub fn simplex(dim: usize) -> Self {
        Self::new(Shape::Simplex, dim)
    }

    pub fn cube(dim: usize) -> Self {
        Self::new(Shape::Cube, dim)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_cube(&self) -> bool {
        self.shape == Shape::Cube
    }

    pub fn vertex_count(&self) -> usize {
        match self.shape {
            Shape::Simplex => self.dim + 1,
            Shape::Cube => 1 << self.dim,
        }
    }

    pub fn vertex_coords<S: Scalar>(&self, v: usize) -> Vec<S> {
        assert!(v < self.vertex_count());
        (0..self.dim)
            .map(|i| {
                let on = match self.shape {
                    Shape::Simplex => v == i + 1,
                    Shape::Cube => v & (1 << i) != 0,
                };
                if on {
                    S::one()
                } else {
                    S::zero()
                }
            })
            .collect()
    }

    /// The vertex at `e_j`.
    fn unit_vertex(&self, j: usize) -> usize {
        match self.shape {
            Shape::Simplex => j + 1,
            Shape::Cube => 1 << j,
        }
    }

    /// The affine map from this cell's coordinates sending reference vertex `i` to
    /// `images[i]`; fails if no affine map does so.
    pub fn affine_from_vertices<S: Scalar>(&self, images: &[Vec<S>]) -> Result<AffineMap<S>> {
        if images.len() != self.vertex_count() {
            return Err(FesError::DimensionMismatch { expected: self.vertex_count(), found: images.len() });
        }
        let target = images[0].len();
        let offset = images[0].clone();
        let mut matrix = Mat::zeros(target, self.dim);
        for j in 0..self.dim {
            let img = &images[self.unit_vertex(j)];
            for i in 0..target {
                matrix[(i, j)] = img[i].minus(&offset[i]);
            }
        }
        let map = AffineMap::new(matrix, offset)?;
        for (v, img) in images.iter().enumerate() {
            if &map.apply(&self.vertex_coords(v)) != img {
                return Err(FesError::InvalidParameter("vertex images are not affinely related".into()));
            }
        }
        Ok(map)
    }
}

impl fmt::Display for RefCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shape {
            Shape::Simplex => write!(f, "Simplex({})", self.dim),
            Shape::Cube => write!(f, "Cube({})", self.dim),
        }
    }
}

/// A face of a reference cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Face {
    /// Cube face: coordinates in `free` vary, every other coordinate `i` is pinned to the bit
    /// `i` of `ones`.
    Cube { parent_dim: usize, free: FormIndex, ones: u32 },
    /// Simplex face spanned by the vertices in the mask.
    Simplex { parent_dim: usize, vertices: u32 },
}

impl Face {
    pub fn parent(&self) -> RefCell {
        match *self {
            Face::Cube { parent_dim, .. } => RefCell::cube(parent_dim),
            Face::Simplex { parent_dim, .. } => RefCell::simplex(parent_dim),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Face::Cube { free, .. } => free.len(),
            Face::Simplex { vertices, .. } => vertices.count_ones() as usize - 1,
        }
    }

    /// The face as a reference cell in its own coordinates.
    pub fn cell(&self) -> RefCell {
        RefCell::new(self.parent().shape(), self.dim())
    }

    /// Parent vertex numbers of the face's reference vertices, in face order.
    pub fn vertices(&self) -> Vec<usize> {
        match *self {
            Face::Cube { free, ones, .. } => {
                let free: Vec<usize> = free.elements().collect();
                (0..1usize << free.len())
                    .map(|c| {
                        let mut v = ones as usize;
                        for (j, &i) in free.iter().enumerate() {
                            if c & (1 << j) != 0 {
                                v |= 1 << i;
                            }
                        }
                        v
                    })
                    .collect()
            }
            Face::Simplex { vertices, .. } => FormIndex::from_mask(vertices).elements().collect(),
        }
    }

    /// Inclusion of the face coordinates into the parent coordinates.
    pub fn inclusion<S: Scalar>(&self) -> AffineMap<S> {
        let parent = self.parent();
        let images: Vec<Vec<S>> = self.vertices().into_iter().map(|v| parent.vertex_coords(v)).collect();
        self.cell().affine_from_vertices(&images).expect("faces are affine images")
    }

    /// Pinned value of coordinate `i` on a cube face, `None` when `i` is free.
    pub fn pin(&self, i: usize) -> Option<u8> {
        match *self {
            Face::Cube { free, ones, .. } if !free.contains(i) => Some(((ones >> i) & 1) as u8),
            _ => None,
        }
    }
}

/// All faces of dimension `d`, in a fixed order.
pub fn faces(cell: &RefCell, d: usize) -> Result<Vec<Face>> {
    let n = cell.dim();
    if d > n {
        return Err(FesError::FaceOutOfRange { requested: d, dim: n });
    }
    Ok(match cell.shape() {
        Shape::Cube => {
            let mut out = Vec::with_capacity((binomial(n as i64, d as i64) as usize) << (n - d));
            for free in FormIndex::all(n, d) {
                let pinned = free.complement(n).mask();
                let mut sub = 0u32;
                loop {
                    out.push(Face::Cube { parent_dim: n, free, ones: sub });
                    if sub == pinned {
                        break;
                    }
                    sub = (sub.wrapping_sub(pinned)) & pinned;
                }
            }
            out
        }
        Shape::Simplex => FormIndex::all(n + 1, d + 1)
            .into_iter()
            .map(|v| Face::Simplex { parent_dim: n, vertices: v.mask() })
            .collect(),
    })
}
