//! Exact dense and sparse linear algebra: ranks, echelon forms, kernels and subspace arithmetic.

mod mat;
mod sparse;
mod subspace;

pub use mat::{kernel, rank_and_echelon, Mat};
pub use sparse::{rank_of, rref_of, solve_in_span, split_map, Echelon, MapSplit, SparseVec};
pub use subspace::{span_calc, SpanOp, SpanResult, Subspace};
