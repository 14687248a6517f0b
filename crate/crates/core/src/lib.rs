//! Exact decision procedures for principal holomorphic torus bundles over
//! complex tori, encoded by an integral alternating form and period data.

pub mod appell_humbert;
pub mod classify;
pub mod error;
pub mod invariants;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod scalar;
#[cfg(test)]
mod strategies;
pub mod structures;

pub use error::{Error, Result};
pub use lattice::AlternatingLatticeForm;
pub use matrix::ExactMatrix;
pub use scalar::{GaussianRational, Rational};
pub use structures::{PeriodSubspace, SplittingFrame};
