//! Half-line initial dynamic-boundary-value problems for linear evolution
//! equations `q_t + a(−i∂_x)^n q = 0`.
//!
//! Boundary values are obtained from Caputo fractional ODEs solved by
//! fractional Frobenius recurrences; the field is rebuilt from a contour
//! integral representation.

pub mod cli;
pub mod dtn;
pub mod ehrenpreis;
pub mod error;
pub mod fraccalc;
pub mod oracle;
pub mod quad;
pub mod spectral;
pub mod transforms;

pub use error::{Error, Result};
