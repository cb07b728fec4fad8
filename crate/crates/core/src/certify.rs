//! The `{−1, 0, 1}` kernel test and the exact convex-combination test.
//!
//! A nonzero `x` with `Ax = 0`, entries in `{−1, 0, 1}` and support inside
//! `supp(v)` writes `v` as the midpoint of `v − x` and `v + x`, both feasible,
//! so `v` is not a vertex. Absence of such an `x` is only a necessary
//! condition for vertexhood.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::feasible_point;
use crate::model::{BigRat, Instance, IntPoint};

/// Supports up to this size are searched.
pub const MAX_CERT_SUPPORT: usize = 25;
/// Above this support the meet-in-the-middle search replaces plain DFS.
pub const MITM_THRESHOLD: usize = 15;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelWitness {
    pub x: IntPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Certificate {
    /// `v` is not a vertex.
    Witness(KernelWitness),
    /// The necessary condition holds; vertexhood is not implied.
    NoWitness,
}

impl Certificate {
    pub fn is_witness(&self) -> bool {
        matches!(self, Certificate::Witness(_))
    }
}

trait Scalar: Clone + Signed + Ord + Hash {}
impl<T: Clone + Signed + Ord + Hash> Scalar for T {}

/// Columns as `i64` when every partial sum fits comfortably.
fn small_columns(cols: &[Vec<BigInt>]) -> Option<Vec<Vec<i64>>> {
    let mut total = BigInt::zero();
    let mut out = Vec::with_capacity(cols.len());
    for c in cols {
        let mut col = Vec::with_capacity(c.len());
        for v in c {
            total += v.abs();
            col.push(v.to_i64()?);
        }
        out.push(col);
    }
    (total < BigInt::from(1i64 << 60)).then_some(out)
}

fn dfs_search<T: Scalar>(cols: &[Vec<T>]) -> Option<Vec<i8>> {
    let s = cols.len();
    if s == 0 {
        return None;
    }
    let m = cols[0].len();
    // rest[i][r] = Σ_{j ≥ i} |cols[j][r]|
    let mut rest = vec![vec![T::zero(); m]; s + 1];
    for i in (0..s).rev() {
        for r in 0..m {
            rest[i][r] = rest[i + 1][r].clone() + cols[i][r].abs();
        }
    }
    let mut x = vec![0i8; s];
    let mut sum = vec![T::zero(); m];
    fn go<T: Scalar>(
        i: usize,
        nonzero: bool,
        cols: &[Vec<T>],
        rest: &[Vec<T>],
        x: &mut [i8],
        sum: &mut [T],
    ) -> bool {
        if sum.iter().zip(&rest[i]).any(|(p, r)| p.abs() > *r) {
            return false;
        }
        if i == cols.len() {
            return nonzero && sum.iter().all(|p| p.is_zero());
        }
        // The first nonzero entry is +1: x and −x are both witnesses.
        let choices: &[i8] = if nonzero { &[0, 1, -1] } else { &[0, 1] };
        for &c in choices {
            x[i] = c;
            if c != 0 {
                for (p, a) in sum.iter_mut().zip(&cols[i]) {
                    *p = if c > 0 { p.clone() + a.clone() } else { p.clone() - a.clone() };
                }
            }
            if go(i + 1, nonzero || c != 0, cols, rest, x, sum) {
                return true;
            }
            if c != 0 {
                for (p, a) in sum.iter_mut().zip(&cols[i]) {
                    *p = if c > 0 { p.clone() - a.clone() } else { p.clone() + a.clone() };
                }
            }
        }
        x[i] = 0;
        false
    }
    go(0, false, cols, &rest, &mut x, &mut sum).then_some(x)
}

fn half_sums<T: Scalar>(cols: &[Vec<T>], m: usize, mut visit: impl FnMut(&[i8], &[T]) -> bool) {
    let h = cols.len();
    let mut x = vec![-1i8; h];
    let mut sum = vec![T::zero(); m];
    for c in cols {
        for (p, a) in sum.iter_mut().zip(c) {
            *p = p.clone() - a.clone();
        }
    }
    loop {
        if visit(&x, &sum) {
            return;
        }
        // Odometer increment over {−1, 0, 1}^h, updating the sum incrementally.
        let mut i = 0;
        loop {
            if i == h {
                return;
            }
            for (p, a) in sum.iter_mut().zip(&cols[i]) {
                *p = p.clone() + a.clone();
            }
            if x[i] < 1 {
                x[i] += 1;
                break;
            }
            for (p, a) in sum.iter_mut().zip(&cols[i]) {
                *p = p.clone() - a.clone() - a.clone() - a.clone();
            }
            x[i] = -1;
            i += 1;
        }
    }
}

fn mitm_search<T: Scalar>(cols: &[Vec<T>]) -> Option<Vec<i8>> {
    let s = cols.len();
    if s == 0 {
        return None;
    }
    let m = cols[0].len();
    let h = s / 2;
    let (left, right) = cols.split_at(h);
    let mut table: HashMap<Vec<T>, Vec<i8>> = HashMap::new();
    let mut found: Option<Vec<i8>> = None;
    half_sums(left, m, |x, sum| {
        let nonzero = x.iter().any(|&v| v != 0);
        if nonzero && sum.iter().all(|p| p.is_zero()) {
            found = Some(x.to_vec());
            return true;
        }
        table.entry(sum.to_vec()).or_insert_with(|| x.to_vec());
        false
    });
    if let Some(x) = found {
        let mut full = x;
        full.resize(s, 0);
        return Some(full);
    }
    half_sums(right, m, |x, sum| {
        if x.iter().all(|&v| v == 0) {
            return false;
        }
        let target: Vec<T> = sum.iter().map(|p| -p.clone()).collect();
        if let Some(y) = table.get(&target) {
            let mut full = y.clone();
            full.extend_from_slice(x);
            found = Some(full);
            return true;
        }
        false
    });
    found
}

/// Nonzero `x ∈ {−1,0,1}^s` with `Σ x_i·cols[i] = 0`, by depth-first search.
pub fn kernel_search_dfs(cols: &[Vec<BigInt>]) -> Option<Vec<i8>> {
    match small_columns(cols) {
        Some(small) => dfs_search(&small),
        None => dfs_search(cols),
    }
}

/// Same search by meet-in-the-middle over the two halves of the columns.
pub fn kernel_search_mitm(cols: &[Vec<BigInt>]) -> Option<Vec<i8>> {
    match small_columns(cols) {
        Some(small) => mitm_search(&small),
        None => mitm_search(cols),
    }
}

/// Searches for a kernel witness refuting that `v` is a vertex.
pub fn kernel_certificate(inst: &Instance, v: &IntPoint) -> Result<Certificate> {
    if !inst.is_feasible(v) {
        return Err(Error::Infeasible(format!("{v} is not a feasible point")));
    }
    let support = v.support();
    if support.len() > MAX_CERT_SUPPORT {
        return Err(Error::Budget(format!(
            "support {} exceeds the certificate limit {MAX_CERT_SUPPORT}",
            support.len()
        )));
    }
    let cols: Vec<Vec<BigInt>> = support.iter().map(|&i| inst.a.column(i)).collect();
    let hit = if support.len() <= MITM_THRESHOLD {
        kernel_search_dfs(&cols)
    } else {
        kernel_search_mitm(&cols)
    };
    Ok(match hit {
        None => Certificate::NoWitness,
        Some(signs) => {
            let mut x = vec![BigInt::zero(); inst.n()];
            for (&i, &s) in support.iter().zip(&signs) {
                x[i] = BigInt::from(s);
            }
            Certificate::Witness(KernelWitness { x: IntPoint(x) })
        }
    })
}

/// `true` when `v − x` and `v + x` are both feasible and `x ≠ 0`.
pub fn witness_is_sound(inst: &Instance, v: &IntPoint, w: &KernelWitness) -> bool {
    w.x.support_size() > 0
        && w.x.coords().iter().all(|c| c.abs() <= BigInt::one())
        && inst.is_feasible(&v.add(&w.x))
        && inst.is_feasible(&v.sub(&w.x))
}

fn rat(v: &BigInt) -> BigRat {
    BigRat::from_integer(v.clone())
}

/// `true` iff `w` is not a convex combination of the other points.
pub fn is_vertex_exact(points: &[IntPoint], w: &IntPoint) -> bool {
    vertex_lp(points, w, None)
}

/// Like [`is_vertex_exact`], but against `conv(points) + {r ≥ 0 : Ar = 0}`.
///
/// When `points` contains every vertex of an unbounded integer hull, this
/// decides vertexhood of `w` for the hull itself.
pub fn is_vertex_with_recession(inst: &Instance, points: &[IntPoint], w: &IntPoint) -> bool {
    vertex_lp(points, w, Some(inst))
}

fn vertex_lp(points: &[IntPoint], w: &IntPoint, recession: Option<&Instance>) -> bool {
    let mut others: Vec<&IntPoint> = points.iter().filter(|p| *p != w).collect();
    others.sort();
    others.dedup();
    let n = w.len();
    let k = others.len();
    if k == 0 && recession.is_none() {
        return true;
    }
    let extra = if recession.is_some() { n } else { 0 };
    let width = k + extra;
    let zero = BigRat::zero();
    let one = BigRat::one();
    let mut rows: Vec<Vec<BigRat>> = Vec::new();
    let mut rhs: Vec<BigRat> = Vec::new();
    for i in 0..n {
        let mut row = vec![zero.clone(); width];
        for (t, p) in others.iter().enumerate() {
            row[t] = rat(&p.0[i]);
        }
        if extra > 0 {
            row[k + i] = one.clone();
        }
        rows.push(row);
        rhs.push(rat(&w.0[i]));
    }
    let mut convex = vec![zero.clone(); width];
    for c in convex.iter_mut().take(k) {
        *c = one.clone();
    }
    rows.push(convex);
    rhs.push(one.clone());
    if let Some(inst) = recession {
        for j in 0..inst.m() {
            let mut row = vec![zero.clone(); width];
            for i in 0..n {
                row[k + i] = rat(inst.a.get(j, i));
            }
            rows.push(row);
            rhs.push(zero.clone());
        }
    }
    feasible_point(&rows, &rhs).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::int_vec;

    fn pts(v: &[&[i64]]) -> Vec<IntPoint> {
        v.iter().map(|p| IntPoint::from_i64(p)).collect()
    }

    #[test]
    fn certificate_examples() {
        let k = Instance::knapsack("k3", &[1, 2, 4], 7).unwrap();
        assert_eq!(
            kernel_certificate(&k, &IntPoint::from_i64(&[1, 1, 1])).unwrap(),
            Certificate::NoWitness
        );
        let k = Instance::knapsack("ones", &[1, 1], 2).unwrap();
        let v = IntPoint::from_i64(&[1, 1]);
        match kernel_certificate(&k, &v).unwrap() {
            Certificate::Witness(w) => {
                assert_eq!(w.x, IntPoint::from_i64(&[1, -1]));
                assert!(witness_is_sound(&k, &v, &w));
            }
            other => panic!("{other:?}"),
        }
        let z = Instance::knapsack("zero", &[3, 5], 0).unwrap();
        assert_eq!(
            kernel_certificate(&z, &IntPoint::from_i64(&[0, 0])).unwrap(),
            Certificate::NoWitness
        );
        assert!(kernel_certificate(&k, &IntPoint::from_i64(&[1, 0])).is_err());
    }

    #[test]
    fn mitm_matches_dfs_on_mixed_columns() {
        let cols: Vec<Vec<BigInt>> = [3, 5, 7, 11, 13, 17, 19]
            .iter()
            .map(|&v| int_vec(&[v, v % 4]))
            .collect();
        let a = kernel_search_dfs(&cols);
        let b = kernel_search_mitm(&cols);
        assert_eq!(a.is_some(), b.is_some());
        for x in [a, b].into_iter().flatten() {
            let mut s = [0i64; 2];
            for (c, &xi) in cols.iter().zip(&x) {
                s[0] += xi as i64 * c[0].to_i64().unwrap();
                s[1] += xi as i64 * c[1].to_i64().unwrap();
            }
            assert_eq!(s, [0, 0]);
        }
        let powers: Vec<Vec<BigInt>> = (0..16).map(|i| vec![BigInt::from(1u64 << i)]).collect();
        assert!(kernel_search_mitm(&powers).is_none());
        assert!(kernel_search_dfs(&powers).is_none());
    }

    #[test]
    fn big_entries_take_the_generic_path() {
        let huge: BigInt = BigInt::one() << 200u32;
        let cols = vec![vec![huge.clone()], vec![huge.clone() * 2], vec![huge * 3]];
        assert_eq!(kernel_search_dfs(&cols), Some(vec![1, 1, -1]));
        assert!(kernel_search_mitm(&cols).is_some());
    }

    #[test]
    fn vertex_lp_examples() {
        let p = pts(&[&[0, 0], &[2, 0], &[1, 0]]);
        assert!(!is_vertex_exact(&p, &IntPoint::from_i64(&[1, 0])));
        let cloud = pts(&[&[7, 0, 0], &[5, 1, 0], &[3, 2, 0], &[1, 3, 0], &[3, 0, 1], &[1, 1, 1]]);
        assert!(is_vertex_exact(&cloud, &IntPoint::from_i64(&[1, 1, 1])));
        assert!(!is_vertex_exact(&cloud, &IntPoint::from_i64(&[5, 1, 0])));
        let single = pts(&[&[4, 2]]);
        assert!(is_vertex_exact(&single, &single[0]));
    }

    #[test]
    fn recession_rules_out_points_on_rays() {
        // x1 − x2 = 1: integer hull is (1,0) + cone{(1,1)}.
        let k = Instance::knapsack("ray", &[1, -1], 1).unwrap();
        let w = pts(&[&[1, 0], &[2, 1], &[3, 2]]);
        assert!(is_vertex_with_recession(&k, &w, &w[0]));
        assert!(!is_vertex_with_recession(&k, &w, &w[1]));
        assert!(is_vertex_exact(&w, &w[2]));
        assert!(!is_vertex_with_recession(&k, &w, &w[2]));
    }
}
