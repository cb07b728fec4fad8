//! Exact scalars, dense integer matrices and the instance data model.
//!
//! Integers are [`num_bigint::BigInt`] and rationals are
//! [`num_rational::BigRational`]; irrational bound values are carried as
//! [`HPReal`], a 128-bit binary float with a fixed rounding direction.

mod instance;
pub mod linalg;
mod matrix;
mod point;
mod real;

pub use instance::{residual, Instance};
pub use matrix::IntMatrix;
pub use num_bigint::BigInt;
pub use point::IntPoint;
pub use real::{HPReal, Interval, Rounding, PREC};

pub type BigRat = num_rational::BigRational;

/// Shorthand used throughout tests and generators.
pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn int_vec(values: &[i64]) -> Vec<BigInt> {
    values.iter().map(|&v| BigInt::from(v)).collect()
}
