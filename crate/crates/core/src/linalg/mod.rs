//! Exact dense linear algebra: echelon forms, kernels, subspace lattice
//! operations and invariant-subspace spinning.

mod matrix;
mod spin;
mod subspace;

use thiserror::Error;

pub use matrix::{Matrix, Rref};
pub use spin::{invariant_closure, largest_invariant_within, largest_invariant_within_with, spin_with, Echelon};
pub use subspace::Subspace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("shape mismatch: {left:?} against {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
}
