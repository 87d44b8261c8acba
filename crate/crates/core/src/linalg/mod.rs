//! Exact linear algebra over prime fields.

mod field;
mod matrix;
mod subspace;

pub use field::{is_prime, Fp};
pub use matrix::{quotient_dim, FpMatrix, FpVector};
pub use subspace::{SpanSolver, Subspace};
