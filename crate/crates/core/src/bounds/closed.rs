use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::roots::bisect_increasing;
use crate::error::{Error, Result};
use crate::model::{BigRat, HPReal, IntMatrix, Interval};

fn restrict(a: &[BigInt], support: Option<&[usize]>) -> Result<Vec<BigInt>> {
    match support {
        None => Ok(a.to_vec()),
        Some(s) => s
            .iter()
            .map(|&i| {
                a.get(i)
                    .cloned()
                    .ok_or_else(|| Error::Dimension(format!("index {i} out of range")))
            })
            .collect(),
    }
}

fn require_delta(delta: &BigInt) -> Result<()> {
    if *delta < BigInt::one() {
        return Err(Error::Invalid(format!("Δ must be at least 1, got {delta}")));
    }
    Ok(())
}

fn int(v: &BigInt) -> Interval {
    Interval::from_int(v)
}

/// `log₂‖a‖₁ + 1`.
pub fn knapsack_pigeonhole(a: &[BigInt]) -> Result<HPReal> {
    let l1: BigInt = a.iter().map(|v| v.abs()).sum();
    if l1.is_zero() {
        return Err(Error::Invalid("coefficient vector is zero".into()));
    }
    Ok(int(&l1).log2().add(&Interval::from_i64(1)).upper())
}

/// `log₂(3.51·‖a[S]‖₂)` with the norm taken from the exact squared norm.
pub fn knapsack_l2_bound(a: &[BigInt], support: Option<&[usize]>) -> Result<HPReal> {
    Ok(knapsack_l2_interval(a, support)?.upper())
}

pub(crate) fn knapsack_l2_interval(a: &[BigInt], support: Option<&[usize]>) -> Result<Interval> {
    let r = restrict(a, support)?;
    let sq: BigInt = r.iter().map(|v| v * v).sum();
    if sq.is_zero() {
        return Err(Error::Invalid("restricted coefficient vector is zero".into()));
    }
    Ok(Interval::ratio(351, 100).mul(&int(&sq).sqrt()).log2())
}

/// `(3/2)·log₂(2.4·Δ)`.
pub fn knapsack_delta_bound(delta: &BigInt) -> Result<HPReal> {
    require_delta(delta)?;
    Ok(knapsack_delta_interval(delta).upper())
}

pub(crate) fn knapsack_delta_interval(delta: &BigInt) -> Interval {
    Interval::ratio(3, 2).mul(&Interval::ratio(12, 5).mul(&int(delta)).log2())
}

#[derive(Clone, Debug)]
pub struct ImplicitBound {
    /// Largest `s` with `s ≤ log₂(3.51·√s·Δ)`.
    pub root: HPReal,
    /// `log₂(2Δ·√(1.5·log₂(2Δ)))`.
    pub closed_form: HPReal,
}

pub fn knapsack_implicit_bound(delta: &BigInt) -> Result<ImplicitBound> {
    require_delta(delta)?;
    let d = int(delta);
    let c = Interval::ratio(351, 100).mul(&d);
    let root = bisect_increasing(|s| s.sub(&c.mul(&s.sqrt()).log2()), 1.0, 2.0);
    let two_d = d.scale(2);
    let closed = two_d
        .mul(&Interval::ratio(3, 2).mul(&two_d.log2()).sqrt())
        .log2();
    Ok(ImplicitBound {
        root: root.upper(),
        closed_form: closed.upper(),
    })
}

fn rows_of(a: &IntMatrix, support: Option<&[usize]>) -> Result<IntMatrix> {
    match support {
        None => Ok(a.clone()),
        Some([]) => Err(Error::Invalid("empty support set".into())),
        Some(s) => a.select_columns(s),
    }
}

/// `Γ = 1.12·Σ_j ‖a^(j)‖₂ + √(Σ_i ‖A_i‖₁²)` over the columns in `S`.
pub fn general_gamma(a: &IntMatrix, support: Option<&[usize]>) -> Result<HPReal> {
    Ok(gamma_interval(&rows_of(a, support)?).upper())
}

fn gamma_interval(sub: &IntMatrix) -> Interval {
    let mut rows = Interval::from_i64(0);
    for j in 0..sub.rows() {
        rows = rows.add(&int(&sub.row_l2_squared(j)).sqrt());
    }
    let cols: BigInt = (0..sub.cols()).map(|i| sub.col_l1(i).pow(2)).sum();
    Interval::ratio(112, 100).mul(&rows).add(&int(&cols).sqrt())
}

/// `m·log₂(2eΓ/m + 2e)`.
pub fn general_supp_bound(a: &IntMatrix, support: Option<&[usize]>) -> Result<HPReal> {
    let sub = rows_of(a, support)?;
    let m = Interval::from_usize(sub.rows());
    let two_e = Interval::e().scale(2);
    let inner = two_e.mul(&gamma_interval(&sub)).div(&m).add(&two_e);
    Ok(m.mul(&inner.log2()).upper())
}

#[derive(Clone, Debug, PartialEq)]
pub enum DeltaVariant {
    /// Root of `s = m·log₂(4.24·e·√s·Δ + 2e)`.
    ImplicitRoot,
    /// `2m·log₂(24·√m·Δ)`.
    Explicit,
    /// `(1+ε)m·log₂(4.24·e·(1+1/Δ)·√((1+ε)/(2ε))·√m·Δ)`.
    Warmup(BigRat),
}

pub fn general_delta_bound(m: usize, delta: &BigInt, variant: &DeltaVariant) -> Result<HPReal> {
    Ok(general_delta_interval(m, delta, variant)?.upper())
}

pub(crate) fn general_delta_interval(
    m: usize,
    delta: &BigInt,
    variant: &DeltaVariant,
) -> Result<Interval> {
    require_delta(delta)?;
    if m == 0 {
        return Err(Error::Invalid("m must be at least 1".into()));
    }
    let mi = Interval::from_usize(m);
    let d = int(delta);
    let e = Interval::e();
    Ok(match variant {
        DeltaVariant::ImplicitRoot => {
            let k = Interval::ratio(424, 100).mul(&e).mul(&d);
            let two_e = e.scale(2);
            bisect_increasing(
                |s| s.sub(&mi.mul(&k.mul(&s.sqrt()).add(&two_e).log2())),
                m as f64,
                2.0 * m as f64,
            )
        }
        DeltaVariant::Explicit => mi
            .scale(2)
            .mul(&Interval::from_i64(24).mul(&mi.sqrt()).mul(&d).log2()),
        DeltaVariant::Warmup(eps) => {
            if !eps.is_positive() {
                return Err(Error::Invalid(format!("ε must be positive, got {eps}")));
            }
            let eps = Interval::from_rat(eps);
            let one = Interval::from_i64(1);
            let one_eps = one.add(&eps);
            let inner = Interval::ratio(424, 100)
                .mul(&e)
                .mul(&one.add(&one.div(&d)))
                .mul(&one_eps.div(&eps.scale(2)).sqrt())
                .mul(&mi.sqrt())
                .mul(&d);
            one_eps.mul(&mi).mul(&inner.log2())
        }
    })
}

/// `m·log₂(s·Δ + 1)`.
pub fn pigeonhole_general(m: usize, s: usize, delta: &BigInt) -> Result<HPReal> {
    let arg = BigInt::from(s) * delta + 1;
    if arg < BigInt::one() {
        return Err(Error::Invalid("s·Δ + 1 must be positive".into()));
    }
    Ok(Interval::from_usize(m).mul(&int(&arg).log2()).upper())
}

/// `Σ_j log₂(‖a_j[S]‖₁ + 1)`.
pub fn simple_related(a: &IntMatrix, support: Option<&[usize]>) -> Result<HPReal> {
    let sub = rows_of(a, support)?;
    let mut total = Interval::from_i64(0);
    for j in 0..sub.rows() {
        total = total.add(&int(&(sub.row_l1(j) + 1)).log2());
    }
    Ok(total.upper())
}
