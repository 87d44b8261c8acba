//! Cohomology of elementary abelian p-groups and Borel spectral sequence
//! computations for group actions on 4-manifolds.

pub mod algebra;
pub mod analyzer;
pub mod error;
pub mod essential;
pub mod group;
pub mod linalg;
pub mod scenario;
pub mod spectral;

pub use error::{Error, Result};
