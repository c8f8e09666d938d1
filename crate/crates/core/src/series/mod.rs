//! Truncated polynomial arithmetic and Pade approximants.

mod pade;
mod polynomial;
mod sum;

pub use pade::{pade_eval, pade_fit, PadeApproximant, CONDITION_LIMIT, POLE_THRESHOLD};
pub use polynomial::{poly_combine, CombineOp, Polynomial};
pub use sum::CompensatedSum;
