//! Finite element systems of polynomial differential forms in exact arithmetic.
//!
//! The crate is generic over a [`Scalar`] type; [`Rational`] is the instantiation used for
//! every dimension count, since ranks are only trustworthy with exact zero tests.

pub mod cells;
pub mod construct;
pub mod error;
pub mod homology;
pub mod linalg;
pub mod polyforms;
pub mod scalar;
pub mod serial;
pub mod vem;

pub use error::{FesError, Result};
pub use scalar::Scalar;

/// Exact rationals backing all certified computations.
pub type Rational = num_rational::BigRational;

pub type QMat = linalg::Mat<Rational>;
pub type QSubspace = linalg::Subspace<Rational>;
pub type QPolynomial = polyforms::Polynomial<Rational>;
pub type QPolyForm = polyforms::PolyForm<Rational>;
pub type QFormSpace = cells::FormSpace<Rational>;
pub type QFes = cells::Fes<Rational>;
