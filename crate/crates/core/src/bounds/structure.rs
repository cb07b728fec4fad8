use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{minimize, LpOutcome};
use crate::model::{linalg, BigRat, HPReal, IntMatrix, Interval};

/// Largest row count accepted by [`structure_bound`].
pub const STRUCTURE_MAX_ROWS: usize = 9;

/// `min_λ ‖a_k − Σ λ_r·basis_r‖₁` over real `λ`, solved exactly.
pub fn structure_distance_exact(a_k: &[BigInt], basis: &[Vec<BigInt>]) -> Result<BigRat> {
    let n = a_k.len();
    if basis.iter().any(|b| b.len() != n) {
        return Err(Error::Dimension("basis vectors differ in length from target".into()));
    }
    if basis.is_empty() {
        return Ok(BigRat::from_integer(a_k.iter().map(|v| v.abs()).sum()));
    }
    // Columns: λ⁺ (r), λ⁻ (r), p (n), q (n); rows: Σ(λ⁺−λ⁻)·basis + p − q = a_k.
    let r = basis.len();
    let width = 2 * r + 2 * n;
    let one = BigRat::one();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![BigRat::zero(); width];
        for (t, b) in basis.iter().enumerate() {
            row[t] = BigRat::from_integer(b[i].clone());
            row[r + t] = -BigRat::from_integer(b[i].clone());
        }
        row[2 * r + i] = one.clone();
        row[2 * r + n + i] = -one.clone();
        rows.push(row);
    }
    let rhs: Vec<BigRat> = a_k.iter().map(|v| BigRat::from_integer(v.clone())).collect();
    let mut cost = vec![BigRat::zero(); width];
    for c in cost.iter_mut().skip(2 * r) {
        *c = one.clone();
    }
    match minimize(&rows, &rhs, &cost) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => unreachable!("ℓ1 deviation LP is always bounded and feasible: {other:?}"),
    }
}

pub fn structure_distance(a_k: &[BigInt], basis: &[Vec<BigInt>]) -> Result<HPReal> {
    Ok(Interval::from_rat(&structure_distance_exact(a_k, basis)?).upper())
}

fn ceil_rat(q: &BigRat) -> BigInt {
    q.numer().div_ceil(q.denom())
}

/// Minimum over row orders of `∏ (⌈d_i⌉ + 1)`, with the minimizing order.
///
/// `d_i` is the distance of the i-th row in the order to the span of the rows
/// before it. Distances depend only on the set of earlier rows, so the
/// minimum is a dynamic program over subsets.
pub fn structure_product(a: &IntMatrix) -> Result<(BigInt, Vec<usize>)> {
    let m = a.rows();
    if m > STRUCTURE_MAX_ROWS {
        return Err(Error::Budget(format!(
            "structure bound enumerates row orders for at most {STRUCTURE_MAX_ROWS} rows, got {m}"
        )));
    }
    let rows = a.to_rows();
    let mut dist_cache: HashMap<(usize, u32), BigInt> = HashMap::new();
    let full = (1u32 << m) - 1;
    let mut best: Vec<Option<(BigInt, Vec<usize>)>> = vec![None; 1 << m];
    best[0] = Some((BigInt::one(), Vec::new()));
    for mask in 1..=full {
        let mut choice: Option<(BigInt, Vec<usize>)> = None;
        for k in 0..m {
            if mask & (1 << k) == 0 {
                continue;
            }
            let prev = mask & !(1 << k);
            let Some((prod, order)) = &best[prev as usize] else {
                continue;
            };
            let d = match dist_cache.get(&(k, prev)) {
                Some(d) => d.clone(),
                None => {
                    let basis: Vec<Vec<BigInt>> = (0..m)
                        .filter(|t| prev & (1 << t) != 0)
                        .map(|t| rows[t].clone())
                        .collect();
                    let d = ceil_rat(&structure_distance_exact(&rows[k], &basis)?);
                    dist_cache.insert((k, prev), d.clone());
                    d
                }
            };
            let cand = prod * (d + 1);
            if choice.as_ref().is_none_or(|(p, _)| cand < *p) {
                let mut o = order.clone();
                o.push(k);
                choice = Some((cand, o));
            }
        }
        best[mask as usize] = choice;
    }
    Ok(best[full as usize].clone().expect("full mask reachable"))
}

/// `min_π Σ log₂(⌈d_i^π⌉ + 1)`.
pub fn structure_bound(a: &IntMatrix) -> Result<HPReal> {
    let (prod, _) = structure_product(a)?;
    Ok(Interval::from_int(&prod).log2().upper())
}

/// `m + m·log₂m + ½·log₂det(AAᵀ)`; requires full row rank.
pub fn minkowski_bound(a: &IntMatrix) -> Result<HPReal> {
    let det = linalg::determinant(&a.gram());
    if !det.is_positive() {
        return Err(Error::Invalid("A does not have full row rank".into()));
    }
    let m = Interval::from_usize(a.rows());
    let half_log = Interval::from_int(&det).log2().div(&Interval::from_i64(2));
    Ok(m.add(&m.mul(&m.log2())).add(&half_log).upper())
}
