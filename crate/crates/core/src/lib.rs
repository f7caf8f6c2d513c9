//! Exact construction and verification of generalized Jordanian
//! R-matrices of Cremmer-Gervais type.
//!
//! Everything is computed over exact rationals: matrix entries are
//! canonical rational functions in the declared parameters, and every
//! residual is decided by exact equality with zero.

pub mod constructors;
pub mod dynamical;
pub mod error;
pub mod exact;
pub mod funcfield;
pub mod json;
pub mod tensor;
pub mod verifiers;

pub use error::{Error, Result};
pub use funcfield::{FieldOp, OpTerm};
pub use tensor::{Entry, TensorMat};
