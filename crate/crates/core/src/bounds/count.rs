use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::closed::{general_delta_interval, knapsack_delta_interval, DeltaVariant};
use crate::error::{Error, Result};
use crate::model::Interval;

/// `⌈log₂ x⌉` for `x ≥ 1`.
pub fn ceil_log2(x: &BigInt) -> u64 {
    assert!(*x >= BigInt::one(), "ceil_log2 needs x >= 1");
    (x - 1u32).bits()
}

fn ceil_interval(v: &Interval) -> usize {
    v.upper()
        .ceil()
        .to_usize()
        .expect("support bound fits in usize")
}

/// Box-support cap used by the enumerator: the rounded-up knapsack bound
/// for one row, the `24·√m·Δ` bound otherwise.
pub fn support_cap(m: usize, delta: &BigInt) -> Result<usize> {
    if *delta < BigInt::one() {
        return Err(Error::Invalid(format!("Δ must be at least 1, got {delta}")));
    }
    if m == 1 {
        Ok(ceil_interval(&knapsack_delta_interval(delta)))
    } else {
        Ok(ceil_interval(&general_delta_interval(
            m,
            delta,
            &DeltaVariant::Explicit,
        )?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountBound {
    pub ell: usize,
    /// Per-coordinate dyadic level count, or the log of the proximity cube.
    pub d: u64,
    pub value: BigInt,
}

/// `ℓ·(n·⌈log₂(8(2Δ+1))⌉)^{ℓ+1}` with `ℓ = ⌈(3/2)·log₂(2.4Δ)⌉`.
pub fn knapsack_vertex_count(n: usize, delta: &BigInt) -> Result<CountBound> {
    let ell = support_cap(1, delta)?;
    let d = ceil_log2(&(BigInt::from(8) * (delta * 2u32 + 1u32)));
    let base = BigInt::from(n) * d;
    Ok(CountBound {
        ell,
        d,
        value: BigInt::from(ell) * base.pow(ell as u32 + 1),
    })
}

/// `n^m·ℓ·n^ℓ·⌈log₂([m(2mΔ+1)]^m)⌉^ℓ` with `ℓ = ⌈2m·log₂(24·√m·Δ)⌉`.
pub fn general_vertex_count(n: usize, m: usize, delta: &BigInt) -> Result<CountBound> {
    if m == 0 || n == 0 {
        return Err(Error::Invalid("n and m must be at least 1".into()));
    }
    let ell = ceil_interval(&general_delta_interval(m, delta, &DeltaVariant::Explicit)?);
    let cube = (BigInt::from(m) * (BigInt::from(2 * m) * delta + 1u32)).pow(m as u32);
    let d = ceil_log2(&cube);
    let nb = BigInt::from(n);
    let value = nb.pow(m as u32) * ell * nb.pow(ell as u32) * BigInt::from(d).pow(ell as u32);
    Ok(CountBound { ell, d, value })
}

/// `Σ_{j≤ℓ} C(n,j)·d^j`, the number of low-support level vectors.
pub fn box_count_limit(n: usize, d: u64, ell: usize) -> BigInt {
    let mut total = BigInt::zero();
    let mut binom = BigInt::one();
    for j in 0..=ell.min(n) {
        if j > 0 {
            binom = binom * (n - j + 1) / j;
        }
        total += &binom * BigInt::from(d).pow(j as u32);
    }
    total
}
