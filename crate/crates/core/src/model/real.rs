use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use rug::float::Round;
use rug::Float;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::BigRat;

/// Working precision, in bits, for every irrational quantity.
pub const PREC: u32 = 128;

/// Direction in which an [`HPReal`] was rounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rounding {
    Up,
    Down,
}

impl Rounding {
    fn mpfr(self) -> Round {
        match self {
            Rounding::Up => Round::Up,
            Rounding::Down => Round::Down,
        }
    }
}

/// A real number held at [`PREC`] bits and rounded in a known direction.
///
/// Upper bounds are always rounded up and lower bounds down, so comparing an
/// exact integer against an `HPReal` never flips the answer because of
/// rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct HPReal {
    value: Float,
    rounding: Rounding,
}

impl HPReal {
    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn rounding(&self) -> Rounding {
        self.rounding
    }

    /// Nearest `f64` in the same direction as the stored rounding.
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64_round(self.rounding.mpfr())
    }

    /// Decimal rendering with `digits` significant digits, rounded outward.
    pub fn to_decimal(&self, digits: usize) -> String {
        self.value
            .to_string_radix_round(10, Some(digits), self.rounding.mpfr())
    }

    pub fn parse(text: &str, rounding: Rounding) -> Option<HPReal> {
        let parsed = Float::parse(text).ok()?;
        let (value, _) = Float::with_val_round(PREC, parsed, rounding.mpfr());
        Some(HPReal { value, rounding })
    }

    pub fn cmp_int(&self, n: &BigInt) -> Ordering {
        let exact = rug_int(n);
        self.value
            .partial_cmp(&exact)
            .expect("HPReal is never NaN")
    }

    /// `true` when `n <= self`; the check is rigorous for upper bounds.
    pub fn dominates(&self, n: usize) -> bool {
        self.cmp_int(&BigInt::from(n)) != Ordering::Less
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        from_rug_int(&Float::with_val(PREC, self.value.ceil_ref()).to_integer().expect("finite"))
    }

    pub fn floor(&self) -> BigInt {
        from_rug_int(&Float::with_val(PREC, self.value.floor_ref()).to_integer().expect("finite"))
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12);
        f.write_str(&self.to_decimal(digits))
    }
}

#[derive(Serialize, Deserialize)]
struct HPRealRepr {
    value: String,
    rounding: Rounding,
}

impl Serialize for HPReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        HPRealRepr {
            value: self.to_decimal(40),
            rounding: self.rounding,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HPReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = HPRealRepr::deserialize(deserializer)?;
        HPReal::parse(&repr.value, repr.rounding)
            .ok_or_else(|| serde::de::Error::custom(format!("bad real {:?}", repr.value)))
    }
}

pub(crate) fn from_rug_int(n: &rug::Integer) -> BigInt {
    BigInt::parse_bytes(n.to_string_radix(16).as_bytes(), 16).expect("hex digits")
}

pub(crate) fn rug_int(n: &BigInt) -> rug::Integer {
    rug::Integer::from_str_radix(&n.to_str_radix(16), 16).expect("hex digits")
}

/// A closed interval `[lo, hi]` with outward-rounded endpoints.
///
/// Bound formulas are evaluated on intervals; the true value always lies
/// inside, so `upper()` is a valid upper bound and `lower()` a valid lower
/// bound no matter how many operations were chained.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

macro_rules! outward {
    ($expr_lo:expr, $expr_hi:expr) => {
        Interval {
            lo: Float::with_val_round(PREC, $expr_lo, Round::Down).0,
            hi: Float::with_val_round(PREC, $expr_hi, Round::Up).0,
        }
    };
}

impl Interval {
    /// Enclosure `[lo, hi]`; panics if `lo > hi`.
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval {
            lo: Float::with_val_round(PREC, &lo, Round::Down).0,
            hi: Float::with_val_round(PREC, &hi, Round::Up).0,
        }
    }

    pub fn from_int(n: &BigInt) -> Self {
        let exact = rug_int(n);
        outward!(&exact, &exact)
    }

    pub fn from_i64(v: i64) -> Self {
        outward!(v, v)
    }

    pub fn from_usize(v: usize) -> Self {
        outward!(v as u64, v as u64)
    }

    /// `num / den` for small integer constants such as `351/100`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Interval::from_i64(num).div(&Interval::from_i64(den))
    }

    pub fn from_rat(q: &BigRat) -> Self {
        Interval::from_int(q.numer()).div(&Interval::from_int(q.denom()))
    }

    /// Enclosure of a float value (exact).
    pub fn point(v: &Float) -> Self {
        outward!(v, v)
    }

    pub fn e() -> Self {
        Interval::from_i64(1).exp()
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn upper(&self) -> HPReal {
        HPReal {
            value: self.hi.clone(),
            rounding: Rounding::Up,
        }
    }

    pub fn lower(&self) -> HPReal {
        HPReal {
            value: self.lo.clone(),
            rounding: Rounding::Down,
        }
    }

    pub fn mid(&self) -> Float {
        let sum = Float::with_val(PREC + 8, &self.lo + &self.hi);
        Float::with_val(PREC, sum / 2u32)
    }

    pub fn width(&self) -> Float {
        Float::with_val_round(PREC, &self.hi - &self.lo, Round::Up).0
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn add(&self, o: &Interval) -> Interval {
        outward!(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        outward!(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: Float::with_val(PREC, -&self.hi),
            hi: Float::with_val(PREC, -&self.lo),
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let down = Float::with_val_round(PREC, a * b, Round::Down).0;
            let up = Float::with_val_round(PREC, a * b, Round::Up).0;
            lo = Some(match lo {
                Some(cur) if cur <= down => cur,
                _ => down,
            });
            hi = Some(match hi {
                Some(cur) if cur >= up => cur,
                _ => up,
            });
        }
        Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    pub fn div(&self, o: &Interval) -> Interval {
        assert!(
            o.lo > 0 || o.hi < 0,
            "interval division by an enclosure of zero"
        );
        let inv = Interval {
            lo: Float::with_val_round(PREC, 1 / &o.hi, Round::Down).0,
            hi: Float::with_val_round(PREC, 1 / &o.lo, Round::Up).0,
        };
        self.mul(&inv)
    }

    pub fn sqrt(&self) -> Interval {
        assert!(self.lo >= 0, "sqrt of a possibly negative interval");
        outward!(self.lo.sqrt_ref(), self.hi.sqrt_ref())
    }

    pub fn log2(&self) -> Interval {
        assert!(self.lo > 0, "log of a non-positive interval");
        outward!(self.lo.log2_ref(), self.hi.log2_ref())
    }

    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0, "log of a non-positive interval");
        outward!(self.lo.ln_ref(), self.hi.ln_ref())
    }

    pub fn exp(&self) -> Interval {
        outward!(self.lo.exp_ref(), self.hi.exp_ref())
    }

    pub fn square(&self) -> Interval {
        self.mul(self)
    }

    pub fn scale(&self, k: i64) -> Interval {
        self.mul(&Interval::from_i64(k))
    }

    /// Ordering that is certain for every value in both enclosures, if any.
    pub fn certain_cmp(&self, o: &Interval) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && o.lo == o.hi && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0
    }
}
