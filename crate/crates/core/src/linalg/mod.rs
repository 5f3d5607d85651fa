//! Exact scalars and the dense matrix kernel.

mod matrix;
mod rational;
mod scalar;

pub use matrix::{kernel_basis, solve, subspace_ops, Matrix};
pub use rational::{ParseRationalError, Rational};
pub use scalar::{is_prime, Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("vector length mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("unrecognized field `{0}` (expected `rational` or `gf:P`)")]
    BadField(String),
}
