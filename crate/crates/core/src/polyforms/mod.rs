//! Polynomials and polynomial differential forms with the operators d, κ, 𝔥, ∧, ⋆, δ,
//! affine pullback and exact integration over reference cells.

mod affine;
mod form;
mod monomial;
mod polynomial;

pub use affine::AffineMap;
pub use form::{hodge_and_codifferential, HodgeOp, PolyForm};
pub use monomial::{monomial_count, monomials_up_to, FormIndex, MultiIndex};
pub use polynomial::{Polynomial, PowerCache};
