//! Isogeometric analysis with piece-wise constant test functions.
//!
//! Trial spaces are clamped B-splines; tests are either the same B-splines
//! (Galerkin) or indicators of element-aligned intervals. Tensor-product
//! mass systems are solved direction by direction with banded LU.

pub mod assembly;
pub mod bspline;
pub mod error;
pub mod harness;
pub mod problems;
pub mod quadrature;
pub mod solver;
pub mod tensor;
pub mod testspace;

pub use error::{Error, Result};
