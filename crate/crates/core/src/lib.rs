//! Exact invariant-level Nijenhuis tensors, derived flags and transverse /
//! generalized Dolbeault cohomology of almost complex Lie algebras.

pub mod acs;
pub mod catalog;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod flag;
pub mod forms;
pub mod homogeneous;
pub mod lie;
pub mod report;
pub mod schema;
pub mod linalg;

pub use error::{Error, Result};
