use rug::Float;

use crate::model::{Interval, PREC};

/// Width at which bisection stops.
const TOL_EXP: i32 = -100;

/// Encloses the unique root of `f`, which must be strictly increasing on
/// `[lo, hi]` with `f(lo) <= 0 <= f(hi)`.
pub(crate) fn bisect_increasing(f: impl Fn(&Interval) -> Interval, lo: f64, hi: f64) -> Interval {
    let mut lo = Float::with_val(PREC, lo);
    let mut hi = Float::with_val(PREC, hi);
    let at = |x: &Float| f(&Interval::point(x));
    if at(&lo).certain_cmp(&Interval::from_i64(0)) == Some(std::cmp::Ordering::Equal) {
        return Interval::point(&lo);
    }
    while at(&hi).is_negative() {
        let width = Float::with_val(PREC, &hi - &lo);
        lo = hi.clone();
        hi += width * 2u32;
    }
    loop {
        let scale = Float::with_val(PREC, hi.abs_ref()).max(&Float::with_val(PREC, 1));
        let tol = Float::with_val(PREC, scale * Float::with_val(PREC, Float::i_exp(1, TOL_EXP)));
        if Float::with_val(PREC, &hi - &lo) <= tol {
            return Interval::new(lo, hi);
        }
        let mid = Float::with_val(PREC, (Float::with_val(PREC, &lo + &hi)) / 2u32);
        let v = at(&mid);
        if v.is_negative() {
            lo = mid;
        } else if v.is_positive() {
            hi = mid;
        } else {
            // f(mid) is zero to working precision; close in from both sides.
            let below = Float::with_val(PREC, &mid - &tol);
            let above = Float::with_val(PREC, &mid + &tol);
            if !at(&below).is_positive() && !at(&above).is_negative() {
                return Interval::new(below.max(&lo), above.min(&hi));
            }
            hi = mid;
        }
    }
}
