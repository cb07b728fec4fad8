use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{IntMatrix, IntPoint};
use crate::error::{Error, Result};

/// The integer program `min cᵀx, Ax = b, x ∈ Z^n_{≥0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub a: IntMatrix,
    pub b: Vec<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<BigInt>>,
    /// Caller-supplied upper bounds on each variable, used when none can be derived.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_upper_bounds: Option<Vec<BigInt>>,
}

impl Instance {
    pub fn new(name: impl Into<String>, a: IntMatrix, b: Vec<BigInt>) -> Result<Self> {
        let inst = Instance {
            name: name.into(),
            a,
            b,
            c: None,
            var_upper_bounds: None,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn with_objective(mut self, c: Vec<BigInt>) -> Result<Self> {
        self.c = Some(c);
        self.validate()?;
        Ok(self)
    }

    pub fn with_upper_bounds(mut self, u: Vec<BigInt>) -> Result<Self> {
        self.var_upper_bounds = Some(u);
        self.validate()?;
        Ok(self)
    }

    /// Knapsack shorthand `aᵀx = b`.
    pub fn knapsack(name: impl Into<String>, a: &[i64], b: i64) -> Result<Self> {
        Instance::new(name, IntMatrix::from_i64(&[a])?, vec![BigInt::from(b)])
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// Δ = ‖A‖∞.
    pub fn delta(&self) -> BigInt {
        self.a.max_abs()
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.len() != self.m() {
            return Err(Error::Dimension(format!(
                "b has {} entries, A has {} rows",
                self.b.len(),
                self.m()
            )));
        }
        if let Some(c) = &self.c {
            if c.len() != self.n() {
                return Err(Error::Dimension(format!(
                    "c has {} entries, A has {} columns",
                    c.len(),
                    self.n()
                )));
            }
        }
        if let Some(u) = &self.var_upper_bounds {
            if u.len() != self.n() {
                return Err(Error::Dimension(format!(
                    "var_upper_bounds has {} entries, A has {} columns",
                    u.len(),
                    self.n()
                )));
            }
            if let Some(i) = u.iter().position(|v| v.is_negative()) {
                return Err(Error::Invalid(format!(
                    "var_upper_bounds[{i}] is negative"
                )));
            }
        }
        Ok(())
    }

    /// `true` when `x` is a nonnegative integer solution of `Ax = b`.
    pub fn is_feasible(&self, x: &IntPoint) -> bool {
        x.len() == self.n()
            && x.is_nonnegative()
            && residual(&self.a, &self.b, x)
                .map(|r| r.iter().all(|v| v.sign() == num_bigint::Sign::NoSign))
                .unwrap_or(false)
    }
}

/// `Ax − b`, exactly.
pub fn residual(a: &IntMatrix, b: &[BigInt], x: &IntPoint) -> Result<Vec<BigInt>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "b has {} entries, A has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let ax = a.mul_vec(x.coords())?;
    Ok(ax.into_iter().zip(b).map(|(l, r)| l - r).collect())
}
