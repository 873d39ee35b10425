//! Minimal compatible systems: scalar products, harmonic and mixed extensions, the two-step
//! construction inside a compatible ambient system, and the explicit tensor-product system.

mod extension;
mod inner;
mod mcfes;
mod tnt;

pub use extension::{encode_boundary_data, harmonic_extension, mixed_extension, top_harmonic_extension};
pub use inner::{orthogonal_part, Complement, InnerProduct};
pub use mcfes::{build_mcfes, build_mcfes_polynomial, default_ambient, exactify, extend_to_compatible};
pub use tnt::{
    build_tnt, cube_symmetry_generators, shifted_legendre, tnt_extend, tnt_generators, tnt_space, top_spaces_symmetric,
    verify_tnt, TntCheck, TntGenerators, TntPair,
};
