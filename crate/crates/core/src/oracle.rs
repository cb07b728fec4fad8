//! Brute-force ground truth: every lattice point of `P`, the exact vertex
//! set of its integer hull, and minimal-support optima.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::is_vertex_exact;
use crate::error::{Error, Result};
use crate::lp::{minimize, LpOutcome};
use crate::model::{BigRat, Instance, IntPoint};

/// Default cap on the number of lattice points the oracle will collect.
pub const DEFAULT_MAX_POINTS: usize = 2_000_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeCloud {
    /// Sorted, duplicate free.
    pub points: Vec<IntPoint>,
    pub bounds_used: Vec<BigInt>,
    /// `true` when `bounds_used` is valid for all of `P`.
    pub complete: bool,
}

pub(crate) fn small(v: &BigInt) -> Result<i128> {
    v.to_i128()
        .filter(|x| x.unsigned_abs() < 1u128 << 100)
        .ok_or_else(|| Error::Budget(format!("value {v} is too large for lattice search")))
}

/// Upper bounds valid for every feasible point, when `P` is bounded.
pub fn derive_var_bounds(inst: &Instance) -> Option<Vec<BigInt>> {
    let n = inst.n();
    let mut ub: Vec<Option<BigInt>> = vec![None; n];
    for j in 0..inst.m() {
        let row = inst.a.row(j);
        let b = &inst.b[j];
        let sign = if row.iter().all(|v| !v.is_negative()) {
            1
        } else if row.iter().all(|v| !v.is_positive()) {
            -1
        } else {
            continue;
        };
        let b = if sign > 0 { b.clone() } else { -b };
        if b.is_negative() {
            return Some(vec![BigInt::zero(); n]);
        }
        for (i, a) in row.iter().enumerate() {
            let a = if sign > 0 { a.clone() } else { -a };
            if a.is_positive() {
                let cap = b.div_floor(&a);
                if ub[i].as_ref().is_none_or(|u| cap < *u) {
                    ub[i] = Some(cap);
                }
            }
        }
    }
    if ub.iter().all(Option::is_some) {
        return Some(ub.into_iter().map(Option::unwrap).collect());
    }
    let rows: Vec<Vec<BigRat>> = (0..inst.m())
        .map(|j| inst.a.row(j).iter().map(|v| BigRat::from_integer(v.clone())).collect())
        .collect();
    let rhs: Vec<BigRat> = inst.b.iter().map(|v| BigRat::from_integer(v.clone())).collect();
    let mut out = Vec::with_capacity(n);
    for (i, slot) in ub.into_iter().enumerate() {
        if let Some(u) = slot {
            out.push(u);
            continue;
        }
        let mut cost = vec![BigRat::zero(); n];
        cost[i] = -BigRat::from_integer(1.into());
        match minimize(&rows, &rhs, &cost) {
            LpOutcome::Optimal { value, .. } => out.push((-value).floor().to_integer()),
            LpOutcome::Unbounded => return None,
            LpOutcome::Infeasible => return Some(vec![BigInt::zero(); n]),
        }
    }
    Some(out)
}

/// Every integer point of `P` within the derived bounds, or within the
/// instance's own `var_upper_bounds` when nothing can be derived.
pub fn enumerate_lattice(inst: &Instance, max_points: usize) -> Result<LatticeCloud> {
    let (bounds, complete) = match derive_var_bounds(inst) {
        Some(b) => (b, true),
        None => match &inst.var_upper_bounds {
            Some(u) => (u.clone(), false),
            None => {
                return Err(Error::Unbounded(
                    "no finite variable bounds are derivable and none were given".into(),
                ))
            }
        },
    };
    let points = lattice_points(inst, &bounds, max_points)?;
    Ok(LatticeCloud {
        points,
        bounds_used: bounds,
        complete,
    })
}

fn lattice_points(inst: &Instance, bounds: &[BigInt], max_points: usize) -> Result<Vec<IntPoint>> {
    let n = inst.n();
    let m = inst.m();
    // Largest columns first, so the cheap unit-like columns close each branch.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(inst.a.col_l1(i)));
    let a: Vec<Vec<i128>> = (0..m)
        .map(|j| order.iter().map(|&i| small(inst.a.get(j, i))).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let b: Vec<i128> = inst.b.iter().map(small).collect::<Result<_>>()?;
    let ub: Vec<i128> = order.iter().map(|&i| small(&bounds[i])).collect::<Result<_>>()?;
    // Suffix extremes and gcds of each row over the remaining box.
    let mut rest_min = vec![vec![0i128; n + 1]; m];
    let mut rest_max = vec![vec![0i128; n + 1]; m];
    let mut rest_gcd = vec![vec![0i128; n + 1]; m];
    for j in 0..m {
        for i in (0..n).rev() {
            let t = a[j][i] * ub[i];
            rest_min[j][i] = rest_min[j][i + 1] + t.min(0);
            rest_max[j][i] = rest_max[j][i + 1] + t.max(0);
            rest_gcd[j][i] = if ub[i] > 0 { rest_gcd[j][i + 1].gcd(&a[j][i]) } else { rest_gcd[j][i + 1] };
        }
    }
    struct Ctx<'a> {
        a: &'a [Vec<i128>],
        b: &'a [i128],
        ub: &'a [i128],
        rest_min: &'a [Vec<i128>],
        rest_max: &'a [Vec<i128>],
        rest_gcd: &'a [Vec<i128>],
        order: &'a [usize],
        max_points: usize,
    }
    fn go(
        i: usize,
        ctx: &Ctx,
        x: &mut [i128],
        partial: &mut [i128],
        out: &mut Vec<IntPoint>,
    ) -> Result<()> {
        for j in 0..ctx.b.len() {
            let need = ctx.b[j] - partial[j];
            if need < ctx.rest_min[j][i] || need > ctx.rest_max[j][i] {
                return Ok(());
            }
            let g = ctx.rest_gcd[j][i];
            if (g == 0 && need != 0) || (g != 0 && need % g != 0) {
                return Ok(());
            }
        }
        if i == x.len() {
            if out.len() >= ctx.max_points {
                return Err(Error::Budget(format!(
                    "more than {} lattice points",
                    ctx.max_points
                )));
            }
            let mut p = vec![BigInt::zero(); x.len()];
            for (t, &col) in ctx.order.iter().enumerate() {
                p[col] = BigInt::from(x[t]);
            }
            out.push(IntPoint(p));
            return Ok(());
        }
        // a·v must leave a residual the remaining columns can reach.
        let (mut lo, mut hi) = (0i128, ctx.ub[i]);
        for j in 0..ctx.b.len() {
            let a = ctx.a[j][i];
            if a == 0 {
                continue;
            }
            let need = ctx.b[j] - partial[j];
            let (u, w) = (need - ctx.rest_max[j][i + 1], need - ctx.rest_min[j][i + 1]);
            let (l, h) = if a > 0 {
                (Integer::div_ceil(&u, &a), Integer::div_floor(&w, &a))
            } else {
                (Integer::div_ceil(&w, &a), Integer::div_floor(&u, &a))
            };
            lo = lo.max(l);
            hi = hi.min(h);
        }
        for v in lo..=hi {
            x[i] = v;
            for (p, row) in partial.iter_mut().zip(ctx.a) {
                *p += row[i] * v;
            }
            let r = go(i + 1, ctx, x, partial, out);
            for (p, row) in partial.iter_mut().zip(ctx.a) {
                *p -= row[i] * v;
            }
            r?;
        }
        x[i] = 0;
        Ok(())
    }
    let ctx = Ctx {
        a: &a,
        b: &b,
        ub: &ub,
        rest_min: &rest_min,
        rest_max: &rest_max,
        rest_gcd: &rest_gcd,
        order: &order,
        max_points,
    };
    let mut out = Vec::new();
    go(0, &ctx, &mut vec![0i128; n], &mut vec![0i128; m], &mut out)?;
    out.sort();
    Ok(out)
}

/// Integer kernel steps used to discard lattice midpoints before the LP.
fn midpoint_steps(inst: &Instance) -> Vec<Vec<i128>> {
    let n = inst.n();
    let r: i128 = if n <= 6 { 2 } else { 1 };
    let cols: Vec<Vec<i128>> = (0..n)
        .map(|i| inst.a.column(i).iter().map(|v| v.to_i128().unwrap_or(i128::MAX / 4)).collect())
        .collect();
    let m = inst.m();
    let mut steps = Vec::new();
    let mut x = vec![-r; n];
    loop {
        let nonzero = x.iter().any(|&v| v != 0);
        // Keep one of each ±pair: first nonzero entry positive.
        let canonical = x.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0);
        if nonzero && canonical {
            let in_kernel = (0..m).all(|j| {
                cols.iter()
                    .zip(&x)
                    .map(|(c, &v)| c[j].saturating_mul(v))
                    .fold(0i128, |acc, t| acc.saturating_add(t))
                    == 0
            });
            if in_kernel {
                steps.push(x.clone());
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return steps;
            }
            if x[i] < r {
                x[i] += 1;
                break;
            }
            x[i] = -r;
            i += 1;
        }
    }
}

/// Exact vertex set of the integer hull of `cloud`.
///
/// Points that are the midpoint of two other lattice points are dropped
/// first; every vertex survives, so the exact LP over the survivors decides
/// the rest.
pub fn hull_vertices_oracle(inst: &Instance, cloud: &LatticeCloud) -> Vec<IntPoint> {
    let candidates = hull_candidates(inst, cloud);
    let mut verts: Vec<IntPoint> = candidates
        .par_iter()
        .filter(|p| is_vertex_exact(&candidates, p))
        .cloned()
        .collect();
    verts.sort();
    verts
}

/// Cloud points that are not the midpoint of two other lattice points.
/// Their hull is the hull of the whole cloud.
pub fn hull_candidates(inst: &Instance, cloud: &LatticeCloud) -> Vec<IntPoint> {
    let steps = midpoint_steps(inst);
    cloud
        .points
        .par_iter()
        .filter(|p| {
            let coords: Vec<i128> = p.0.iter().map(|v| v.to_i128().unwrap_or(i128::MAX)).collect();
            !steps.iter().any(|x| {
                coords.iter().zip(x).all(|(&c, &s)| c >= s.abs())
            })
        })
        .cloned()
        .collect()
}

/// Convenience: lattice cloud then vertex set, refusing incomplete clouds.
pub fn oracle_vertices(inst: &Instance, max_points: usize) -> Result<Vec<IntPoint>> {
    let cloud = enumerate_lattice(inst, max_points)?;
    if !cloud.complete {
        return Err(Error::Unbounded(
            "variable bounds are user hints, the vertex set would not be ground truth".into(),
        ));
    }
    Ok(hull_vertices_oracle(inst, &cloud))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sense {
    Minimize,
    Maximize,
}

/// An optimal lattice point of least support, with that support size.
pub fn min_support_optimum(
    cloud: &LatticeCloud,
    c: &[BigInt],
    sense: Sense,
) -> Result<(IntPoint, usize)> {
    if !cloud.complete {
        return Err(Error::Unbounded("lattice cloud is not known to be complete".into()));
    }
    let value = |p: &IntPoint| -> BigInt { p.0.iter().zip(c).map(|(x, w)| x * w).sum() };
    let best = cloud
        .points
        .iter()
        .map(value)
        .reduce(|a, b| match sense {
            Sense::Minimize => a.min(b),
            Sense::Maximize => a.max(b),
        })
        .ok_or_else(|| Error::Infeasible("no lattice points".into()))?;
    let p = cloud
        .points
        .iter()
        .filter(|p| value(p) == best)
        .min_by_key(|p| p.support_size())
        .expect("an optimum exists")
        .clone();
    let s = p.support_size();
    Ok((p, s))
}

/// For one nonnegative row and a positive objective, the minimizers of
/// `cᵀx` over the lattice points, found by branch and bound. A unique
/// minimizer is a vertex of the integer hull.
pub fn knapsack_minimizers(inst: &Instance, c: &[BigInt], limit: usize) -> Result<Vec<IntPoint>> {
    if inst.m() != 1 {
        return Err(Error::Invalid("single-row instances only".into()));
    }
    let a: Vec<i128> = inst.a.row(0).iter().map(small).collect::<Result<_>>()?;
    let w: Vec<i128> = c.iter().map(small).collect::<Result<_>>()?;
    let b = small(&inst.b[0])?;
    if a.iter().any(|&v| v <= 0) || w.iter().any(|&v| v <= 0) || b < 0 {
        return Err(Error::Invalid("needs positive coefficients and objective".into()));
    }
    let n = a.len();
    // Visit columns by decreasing a_i/c_i so the LP bound is tight early.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| (a[q] * w[p]).cmp(&(a[p] * w[q])));
    // best_ratio[k] = index (in order) of the max a/c among order[k..], as (a, c).
    let mut best_ratio = vec![(0i128, 1i128); n + 1];
    for k in (0..n).rev() {
        let (ai, ci) = (a[order[k]], w[order[k]]);
        let (ar, cr) = best_ratio[k + 1];
        best_ratio[k] = if ar * ci >= ai * cr && k + 1 < n { (ar, cr) } else { (ai, ci) };
    }
    let mut best = i128::MAX;
    let mut found: Vec<Vec<i128>> = Vec::new();
    let mut x = vec![0i128; n];
    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        resid: i128,
        cost: i128,
        order: &[usize],
        a: &[i128],
        w: &[i128],
        ratio: &[(i128, i128)],
        x: &mut [i128],
        best: &mut i128,
        found: &mut Vec<Vec<i128>>,
        limit: usize,
    ) {
        if resid == 0 {
            if cost < *best {
                *best = cost;
                found.clear();
            }
            if cost == *best && found.len() < limit {
                found.push(x.to_vec());
            }
            return;
        }
        if k == order.len() {
            return;
        }
        // Remaining cost is at least resid·c/a for the best ratio column.
        let (ar, cr) = ratio[k];
        let lower = cost + (resid * cr + ar - 1) / ar;
        if lower > *best {
            return;
        }
        let i = order[k];
        let top = resid / a[i];
        for v in (0..=top).rev() {
            x[i] = v;
            go(k + 1, resid - v * a[i], cost + v * w[i], order, a, w, ratio, x, best, found, limit);
        }
        x[i] = 0;
    }
    go(0, b, 0, &order, &a, &w, &best_ratio, &mut x, &mut best, &mut found, limit);
    let mut pts: Vec<IntPoint> = found
        .into_iter()
        .map(|v| IntPoint(v.into_iter().map(BigInt::from).collect()))
        .collect();
    pts.sort();
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{int_vec, IntMatrix};

    fn pts(v: &[&[i64]]) -> Vec<IntPoint> {
        v.iter().map(|p| IntPoint::from_i64(p)).collect()
    }

    #[test]
    fn bounds_examples() {
        let k = Instance::knapsack("k3", &[1, 2, 4], 7).unwrap();
        assert_eq!(derive_var_bounds(&k), Some(int_vec(&[7, 3, 1])));
        let r = Instance::knapsack("ray", &[1, -1], 1).unwrap();
        assert_eq!(derive_var_bounds(&r), None);
        let id = Instance::new("id", IntMatrix::identity(2), int_vec(&[1, 1])).unwrap();
        assert_eq!(derive_var_bounds(&id), Some(int_vec(&[1, 1])));
        // Mixed signs but bounded through the LP: x1 − x2 = 0 and x1 + x2 = 4.
        let a = IntMatrix::from_i64(&[&[1, -1], &[1, 1]]).unwrap();
        let lp = Instance::new("lp", a, int_vec(&[0, 4])).unwrap();
        assert_eq!(derive_var_bounds(&lp), Some(int_vec(&[4, 4])));
    }

    #[test]
    fn lattice_examples() {
        let k = Instance::knapsack("k3", &[1, 2, 4], 7).unwrap();
        let cloud = enumerate_lattice(&k, 1000).unwrap();
        let mut want = pts(&[&[7, 0, 0], &[5, 1, 0], &[3, 2, 0], &[1, 3, 0], &[3, 0, 1], &[1, 1, 1]]);
        want.sort();
        assert_eq!(cloud.points, want);
        assert!(cloud.complete);
        let e = Instance::knapsack("odd", &[2], 1).unwrap();
        assert!(enumerate_lattice(&e, 10).unwrap().points.is_empty());
        let a = IntMatrix::from_i64(&[&[1, 2, 0, 0], &[0, 0, 1, 2]]).unwrap();
        let blk = Instance::new("blk", a, int_vec(&[3, 3])).unwrap();
        assert_eq!(enumerate_lattice(&blk, 100).unwrap().points.len(), 4);
        let r = Instance::knapsack("ray", &[1, -1], 1).unwrap();
        assert!(matches!(enumerate_lattice(&r, 10), Err(Error::Unbounded(_))));
        assert!(matches!(enumerate_lattice(&k, 3), Err(Error::Budget(_))));
    }

    #[test]
    fn hull_examples() {
        let k = Instance::knapsack("k3", &[1, 2, 4], 7).unwrap();
        let cloud = enumerate_lattice(&k, 1000).unwrap();
        let mut want = pts(&[&[7, 0, 0], &[1, 3, 0], &[3, 0, 1], &[1, 1, 1]]);
        want.sort();
        assert_eq!(hull_vertices_oracle(&k, &cloud), want);
        let id = Instance::new("id", IntMatrix::identity(2), int_vec(&[1, 1])).unwrap();
        assert_eq!(oracle_vertices(&id, 10).unwrap(), pts(&[&[1, 1]]));
    }

    #[test]
    fn min_support_examples() {
        let k = Instance::knapsack("k3", &[1, 2, 4], 7).unwrap();
        let cloud = enumerate_lattice(&k, 1000).unwrap();
        let (p, s) = min_support_optimum(&cloud, &int_vec(&[1, 1, 1]), Sense::Minimize).unwrap();
        assert_eq!((p, s), (IntPoint::from_i64(&[1, 1, 1]), 3));
        let (p, s) = min_support_optimum(&cloud, &int_vec(&[0, 0, 0]), Sense::Minimize).unwrap();
        assert_eq!((p, s), (IntPoint::from_i64(&[7, 0, 0]), 1));
        let e = Instance::knapsack("odd", &[2], 1).unwrap();
        let empty = enumerate_lattice(&e, 10).unwrap();
        assert!(min_support_optimum(&empty, &int_vec(&[1]), Sense::Minimize).is_err());
    }

    #[test]
    fn branch_and_bound_minimizers() {
        let k = Instance::knapsack("k3", &[1, 2, 4], 7).unwrap();
        let mins = knapsack_minimizers(&k, &int_vec(&[1, 1, 1]), 4).unwrap();
        assert_eq!(mins, pts(&[&[1, 1, 1]]));
        let a: Vec<i64> = (0..10).map(|i| 1 << i).collect();
        let big = Instance::knapsack("k10", &a, 1023).unwrap();
        let mins = knapsack_minimizers(&big, &int_vec(&[1; 10]), 4).unwrap();
        assert_eq!(mins, vec![IntPoint::from_i64(&[1; 10])]);
        let two = Instance::knapsack("ones", &[1, 1], 2).unwrap();
        assert_eq!(knapsack_minimizers(&two, &int_vec(&[1, 1]), 8).unwrap().len(), 3);
    }
}
