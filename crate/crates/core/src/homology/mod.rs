//! Cohomology of form complexes, compatibility, minimal dimensions and closed-form counts.

mod compat;
mod complex;
mod formulas;

pub use compat::{
    boundary_cohomology, boundary_dims, boundary_spaces, compatibility_report, is_compatible, minimal_dims,
    minimal_dims_on, CellReport, CompatibilityReport,
};
pub use complex::{contains_constants, derivative_space, exact_at, integral_rank, kunneth_product, CochainComplex, Cohomology};
pub use formulas::{
    small_pleasures_brute, small_pleasures_cohomology, small_pleasures_cohomology_brute, small_pleasures_dim,
    serendipity_zero_complex, verify_kunneth, verify_trimmed_identity, verify_zero_sequence, KunnethCheck, zero_trace_complex, zero_trace_dim, TrimmedCheck,
    ZeroSequenceCheck,
};
