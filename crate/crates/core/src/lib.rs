//! Integer-hull vertices of `{x ∈ Z^n_{≥0} : Ax = b}`: support bounds,
//! exact enumeration, a brute-force oracle and concentration checks.

pub mod bounds;
pub mod certify;
pub mod cli;
pub mod concentration;
pub mod enumerate;
pub mod error;
pub mod instances;
pub mod lp;
pub mod model;
pub mod oracle;

pub use error::{Error, Result};
