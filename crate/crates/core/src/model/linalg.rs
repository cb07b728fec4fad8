//! Exact elimination over the integers and rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::BigRat;

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn to_rat(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRat>> {
    rows.iter()
        .map(|r| r.iter().map(|v| BigRat::from_integer(v.clone())).collect())
        .collect()
}

/// Row echelon form in place; returns the pivot columns.
fn echelon(a: &mut [Vec<BigRat>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            for j in c..cols {
                let t = &f * &a[r][j];
                a[i][j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a = to_rat(rows);
    echelon(&mut a).len()
}

/// Indices of a maximal linearly independent subset of rows, greedy in order.
pub fn independent_rows(rows: &[Vec<BigInt>]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for (j, row) in rows.iter().enumerate() {
        basis.push(row.clone());
        if rank(&basis) == basis.len() {
            kept.push(j);
        } else {
            basis.pop();
        }
    }
    kept
}

/// Solves the square system `M x = rhs`; `None` when `M` is singular.
pub fn solve(m: &[Vec<BigInt>], rhs: &[BigInt]) -> Option<Vec<BigRat>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRat>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r: Vec<BigRat> = row.iter().map(|v| BigRat::from_integer(v.clone())).collect();
            r.push(BigRat::from_integer(b.clone()));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for j in c..=n {
            a[c][j] = &a[c][j] * &inv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..=n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// `true` when `v` lies in the rational span of `basis`.
pub fn in_span(v: &[BigInt], basis: &[Vec<BigInt>]) -> bool {
    let mut rows = basis.to_vec();
    let before = rank(&rows);
    rows.push(v.to_vec());
    rank(&rows) == before
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::int_vec;

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = vec![int_vec(&[2, -1, 0]), int_vec(&[-1, 2, -1]), int_vec(&[0, -1, 2])];
        assert_eq!(determinant(&m), BigInt::from(4));
        let swap = vec![int_vec(&[0, 1]), int_vec(&[1, 0])];
        assert_eq!(determinant(&swap), BigInt::from(-1));
        let sing = vec![int_vec(&[1, 2]), int_vec(&[2, 4])];
        assert_eq!(determinant(&sing), BigInt::zero());
    }

    #[test]
    fn rank_and_span() {
        let rows = vec![int_vec(&[1, 0, 0]), int_vec(&[1, 1, 0]), int_vec(&[2, 1, 0])];
        assert_eq!(rank(&rows), 2);
        assert_eq!(independent_rows(&rows), vec![0, 1]);
        assert!(in_span(&int_vec(&[3, 5, 0]), &rows));
        assert!(!in_span(&int_vec(&[0, 0, 1]), &rows));
    }

    #[test]
    fn solve_rational_system() {
        let m = vec![int_vec(&[2, 1]), int_vec(&[1, 3])];
        let x = solve(&m, &int_vec(&[3, 5])).unwrap();
        assert_eq!(x[0], BigRat::new(4.into(), 5.into()));
        assert_eq!(x[1], BigRat::new(7.into(), 5.into()));
        assert!(solve(&[int_vec(&[1, 1]), int_vec(&[2, 2])], &int_vec(&[1, 1])).is_none());
    }
}
