use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::model::linalg::{independent_rows, solve};
use crate::model::{BigRat, Instance};

/// Column subsets of size `k` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&p| cur[p] < n - k + p) else {
            return out;
        };
        cur[pos] += 1;
        for q in pos + 1..k {
            cur[q] = cur[q - 1] + 1;
        }
    }
}

/// Every basic feasible solution of `{x ≥ 0 : Ax = b}`, without repeats.
///
/// Redundant rows are dropped first; a basis is a nonsingular square
/// submatrix on the remaining rows, and each solution is checked against
/// all original rows.
pub fn enumerate_bfs(inst: &Instance) -> Vec<Vec<BigRat>> {
    let rows = inst.a.to_rows();
    let keep = independent_rows(&rows);
    let n = inst.n();
    let mut out: Vec<Vec<BigRat>> = Vec::new();
    for cols in combinations(n, keep.len()) {
        let sub: Vec<Vec<BigInt>> = keep
            .iter()
            .map(|&j| cols.iter().map(|&i| rows[j][i].clone()).collect())
            .collect();
        let rhs: Vec<BigInt> = keep.iter().map(|&j| inst.b[j].clone()).collect();
        let Some(xb) = solve(&sub, &rhs) else {
            continue;
        };
        if xb.iter().any(|v| v.is_negative()) {
            continue;
        }
        let mut x = vec![BigRat::zero(); n];
        for (&i, v) in cols.iter().zip(xb) {
            x[i] = v;
        }
        let consistent = rows.iter().zip(&inst.b).all(|(row, b)| {
            let s: BigRat = row
                .iter()
                .zip(&x)
                .map(|(a, v)| BigRat::from_integer(a.clone()) * v)
                .sum();
            s == BigRat::from_integer(b.clone())
        });
        if consistent && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// `2Δ+1` for one row, `m(2mΔ+1)^m` otherwise.
pub fn proximity_radius(m: usize, delta: &BigInt) -> BigInt {
    if m == 1 {
        delta * 2u32 + 1u32
    } else {
        let m_big = BigInt::from(m);
        &m_big * (&m_big * 2u32 * delta + 1u32).pow(m as u32)
    }
}
