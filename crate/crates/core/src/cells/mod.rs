//! Reference cells, face lattices, coordinates for form spaces, and finite element systems.

mod basis;
mod complex;
mod fes;
mod refcell;
mod space;

pub use basis::{FormBasis, PullbackMap};
pub use complex::{Cell, CellComplex, Incidence};
pub use fes::{tensor_product, BoundaryFamilies, FamilyLayout, Fes};
pub use refcell::{faces, Face, RefCell, Shape};
pub use space::{make_space, tensor_spaces, FormSpace, SpaceFamily};
