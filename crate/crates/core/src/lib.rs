//! Exact arithmetic for rank-p torsors over curves: local invariants in
//! characteristic p and specialization of p-adic Kummer classes.

pub mod charp;
pub mod degeneration;
pub mod error;
pub mod fp;
pub mod lifting;
pub mod padic;

pub use error::{Error, Result};
