use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::roots::bisect_increasing;
use crate::error::{Error, Result};
use crate::model::{BigRat, HPReal, Interval};

/// `Some(k)` when `q = 2^k` exactly.
pub(crate) fn exact_log2(q: &BigRat) -> Option<i64> {
    if !q.is_positive() {
        return None;
    }
    let pow2 = |v: &BigInt| -> Option<u64> {
        let bits = v.bits();
        (bits > 0 && *v == BigInt::one() << (bits - 1)).then(|| bits - 1)
    };
    let num = pow2(q.numer())? as i64;
    let den = pow2(q.denom())? as i64;
    Some(num - den)
}

fn require_c_delta(c_delta: &BigRat) -> Result<()> {
    if *c_delta < BigRat::from_integer(2.into()) {
        return Err(Error::Invalid(format!("cΔ must be at least 2, got {c_delta}")));
    }
    Ok(())
}

/// Real and integer solutions of `Y − (m/2)·log₂Y = m·log₂(cΔ)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimalY {
    pub root: HPReal,
    pub root_lower: HPReal,
    /// Smallest integer `Y` with `Y − (m/2)·log₂Y > m·log₂(cΔ)`.
    pub integer_min: BigInt,
}

fn excess(m: &Interval, log_cd: &Interval, y: &Interval) -> Interval {
    y.sub(&m.div(&Interval::from_i64(2)).mul(&y.log2()))
        .sub(&m.mul(log_cd))
}

pub fn minimal_y(m: usize, c_delta: &BigRat) -> Result<MinimalY> {
    require_c_delta(c_delta)?;
    if m == 0 {
        return Err(Error::Invalid("m must be at least 1".into()));
    }
    let mi = Interval::from_usize(m);
    let log_cd = Interval::from_rat(c_delta).log2();
    let ml = mi.mul(&log_cd);
    let lo = ml.lo().to_f64() * (1.0 - 1e-12);
    let hi = ml.hi().to_f64() * (1.0 + ml.hi().to_f64()) + m as f64 + 1.0;
    let root = bisect_increasing(|y| excess(&mi, &log_cd, y), lo, hi);

    let mut k = root.lo().to_f64().floor().max(1.0) as i64;
    loop {
        let v = excess(&mi, &log_cd, &Interval::from_i64(k));
        if v.is_positive() {
            break;
        }
        k += 1;
    }
    Ok(MinimalY {
        root: root.upper(),
        root_lower: root.lower(),
        integer_min: BigInt::from(k),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IneqCase {
    pub case_id: u8,
    pub m: usize,
    pub c_delta: HPReal,
    pub bound: HPReal,
}

impl IneqCase {
    pub fn tag(&self) -> String {
        format!("Thm20.case{}", self.case_id)
    }
}

/// `3m·log₂(cΔ) < 2cΔ`, exact when `cΔ` is a power of two.
fn case1_holds(m: usize, c_delta: &BigRat) -> bool {
    let m_q = BigRat::from_integer(m.into());
    if let Some(k) = exact_log2(c_delta) {
        return BigRat::from_integer(3.into()) * m_q * BigRat::from_integer(k.into())
            < BigRat::from_integer(2.into()) * c_delta;
    }
    let x = Interval::from_rat(c_delta);
    let lhs = Interval::from_usize(3 * m).mul(&x.log2());
    lhs.certain_cmp(&x.scale(2)) == Some(Ordering::Less)
}

/// `log₂(cΔ) < √(cΔ)`.
fn case2_holds(c_delta: &BigRat) -> bool {
    sqrt_log_crossover(c_delta) == Ordering::Greater
}

/// `√(cΔ) ≥ 3m/2`, i.e. `4cΔ ≥ 9m²`.
fn case3_holds(m: usize, c_delta: &BigRat) -> bool {
    BigRat::from_integer(4.into()) * c_delta >= BigRat::from_integer((9 * m * m).into())
}

pub fn ineq_case(m: usize, c_delta: &BigRat) -> u8 {
    if case1_holds(m, c_delta) {
        1
    } else if case2_holds(c_delta) {
        2
    } else if case3_holds(m, c_delta) {
        3
    } else {
        4
    }
}

pub fn ineq_table_bound(m: usize, c_delta: &BigRat) -> Result<IneqCase> {
    require_c_delta(c_delta)?;
    if m == 0 {
        return Err(Error::Invalid("m must be at least 1".into()));
    }
    let case_id = ineq_case(m, c_delta);
    let mi = Interval::from_usize(m);
    let x = Interval::from_rat(c_delta);
    let l = x.log2();
    let three_m = Interval::from_usize(3 * m);
    let half = Interval::ratio(1, 2);
    let radicand = match case_id {
        1 => three_m.mul(&half).mul(&l),
        2 => three_m.mul(&three_m.div(&Interval::from_i64(2).sqrt()).log2()),
        3 => three_m.mul(&half).mul(&three_m.mul(&l).log2()),
        _ => three_m.mul(&three_m.log2()),
    };
    let bound = mi.mul(&x.mul(&radicand.sqrt()).log2());
    Ok(IneqCase {
        case_id,
        m,
        c_delta: x.upper(),
        bound: bound.upper(),
    })
}

/// `(3/2)·m·log₂(2.3514·cΔ·√m)`.
pub fn ineq_uniform_bound(m: usize, c_delta: &BigRat) -> Result<HPReal> {
    require_c_delta(c_delta)?;
    if m == 0 {
        return Err(Error::Invalid("m must be at least 1".into()));
    }
    let mi = Interval::from_usize(m);
    let arg = Interval::ratio(23514, 10000)
        .mul(&Interval::from_rat(c_delta))
        .mul(&mi.sqrt());
    Ok(Interval::ratio(3, 2).mul(&mi).mul(&arg.log2()).upper())
}

/// Sign of `√x − log₂x`, exact at powers of two.
pub fn sqrt_log_crossover(x: &BigRat) -> Ordering {
    assert!(x.is_positive(), "crossover needs x > 0");
    if let Some(k) = exact_log2(x) {
        // √x vs k: both sides nonnegative when k ≥ 0.
        if k < 0 {
            return Ordering::Greater;
        }
        return x.cmp(&BigRat::from_integer((k * k).into()));
    }
    let xi = Interval::from_rat(x);
    let diff = xi.sqrt().sub(&xi.log2());
    diff.certain_cmp(&Interval::from_i64(0))
        .unwrap_or(Ordering::Equal)
}

/// Convenience for integer `c` and `Δ`.
pub fn c_delta(c: &BigRat, delta: &BigInt) -> BigRat {
    c * BigRat::from_integer(delta.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRat {
        BigRat::from_integer(v.into())
    }

    #[test]
    fn exact_log2_detection() {
        assert_eq!(exact_log2(&q(8)), Some(3));
        assert_eq!(exact_log2(&BigRat::new(1.into(), 4.into())), Some(-2));
        assert_eq!(exact_log2(&q(9)), None);
    }

    #[test]
    fn minimal_y_examples() {
        let r = minimal_y(1, &q(8)).unwrap();
        assert!((r.root.to_f64() - 4.0).abs() < 1e-12);
        assert!(r.root.to_f64() >= 4.0);
        assert_eq!(r.integer_min, BigInt::from(5));
        let r = minimal_y(2, &q(4)).unwrap();
        assert!((r.root.to_f64() - 6.756215304).abs() < 1e-8);
        for m in 1..=8 {
            let r = minimal_y(m, &q(2)).unwrap();
            assert!(r.root.to_f64() >= m as f64);
            if m >= 2 {
                assert!(r.root_lower.to_f64() > m as f64);
            }
        }
        assert!(minimal_y(1, &BigRat::new(3.into(), 2.into())).is_err());
    }

    #[test]
    fn root_residual_below_two_to_minus_64() {
        for (m, cd) in [(1usize, 8i64), (2, 4), (3, 9), (8, 64)] {
            let r = minimal_y(m, &q(cd)).unwrap();
            let y = Interval::point(r.root.value());
            let v = excess(
                &Interval::from_usize(m),
                &Interval::from_i64(cd).log2(),
                &y,
            );
            assert!(v.hi().to_f64().abs() < 2f64.powi(-64));
        }
    }

    #[test]
    fn table_examples() {
        let c = ineq_table_bound(1, &q(8)).unwrap();
        assert_eq!(c.case_id, 1);
        assert!((c.bound.to_f64() - 4.084962501).abs() < 1e-8);
        assert_eq!(ineq_table_bound(2, &q(9)).unwrap().case_id, 3);
        let c = ineq_table_bound(8, &q(4)).unwrap();
        assert_eq!(c.case_id, 4);
        assert!((c.bound.to_f64() - 43.127489741).abs() < 1e-8);
        assert_eq!(c.tag(), "Thm20.case4");
    }

    #[test]
    fn uniform_examples() {
        let u = ineq_uniform_bound(1, &q(8)).unwrap().to_f64();
        assert!((u - 1.5 * (2.3514f64 * 8.0).log2()).abs() < 1e-12);
        let u = ineq_uniform_bound(4, &q(4)).unwrap().to_f64();
        assert!((u - 6.0 * (2.3514f64 * 8.0).log2()).abs() < 1e-12);
    }

    #[test]
    fn crossover_examples() {
        assert_eq!(sqrt_log_crossover(&q(4)), Ordering::Equal);
        assert_eq!(sqrt_log_crossover(&q(16)), Ordering::Equal);
        assert_eq!(sqrt_log_crossover(&q(9)), Ordering::Less);
        assert_eq!(sqrt_log_crossover(&q(64)), Ordering::Greater);
    }
}
