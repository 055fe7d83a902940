//! Theta-series bases of half-integral weight Hilbert modular forms over
//! real quadratic fields of narrow class number one.

pub mod analytic;
pub mod basis;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod linalg;
pub mod qexp;
pub mod residue;

pub use error::{Error, Result};
