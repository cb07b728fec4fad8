//! Vertex enumeration for the integer hull: LP basic solutions, a dyadic
//! grid of low-support cells around each, a per-cell uniqueness probe and
//! a final exact hull filter.

mod bfs;
mod boxes;
mod search;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bfs::{enumerate_bfs, proximity_radius};
pub use boxes::{
    box_corner, box_grid, box_grid_filtered, dyadic_depth, locate_box, BoxDescriptor, BoxGrid,
};
pub use search::{box_integer_search, Direction, SearchMode, SmallSystem};

use crate::bounds::{box_count_limit, support_cap};
use crate::certify::{is_vertex_exact, is_vertex_with_recession, kernel_certificate, Certificate};
use crate::error::{Error, Result};
use crate::model::{Instance, IntPoint};
use crate::oracle::derive_var_bounds;

/// Boxes handed to the worker pool at once.
const CHUNK: usize = 4096;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnumOptions {
    pub max_n: usize,
    pub max_m: usize,
    pub max_delta: BigInt,
    /// Refuse once this many boxes have been probed.
    pub max_boxes: u64,
    /// Keep the descriptors of boxes dropped for holding two or more points.
    pub record_discarded: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            max_n: 12,
            max_m: 3,
            max_delta: BigInt::from(64),
            max_boxes: 50_000_000,
            record_discarded: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HullStatus {
    Ok,
    Infeasible,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HullResult {
    pub vertices: Vec<IntPoint>,
    /// Size of the singleton pool before the hull filter.
    pub candidates_considered: usize,
    pub boxes_probed: u64,
    pub bfs_used: usize,
    pub status: HullStatus,
    /// Set when no finite variable bounds follow from `Ax = b, x ≥ 0`.
    pub unbounded_warning: bool,
    pub ell: usize,
    pub radius: BigInt,
    pub d: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discarded: Vec<BoxDescriptor>,
}

enum Probe {
    Empty,
    Single(IntPoint),
    Multi,
}

fn probe(sys: &SmallSystem, bx: &BoxDescriptor) -> Probe {
    let Some(x) = sys.search(bx, &SearchMode::FindOne) else {
        return Probe::Empty;
    };
    for coord in bx.support() {
        for direction in [Direction::Below, Direction::Above] {
            let mode = SearchMode::FindSecond {
                x_star: x.clone(),
                coord,
                direction,
            };
            if sys.search(bx, &mode).is_some() {
                return Probe::Multi;
            }
        }
    }
    Probe::Single(x)
}

fn check_scale(inst: &Instance, opts: &EnumOptions) -> Result<()> {
    let delta = inst.delta();
    if inst.n() > opts.max_n || inst.m() > opts.max_m || delta > opts.max_delta {
        return Err(Error::Budget(format!(
            "instance n={}, m={}, Δ={} exceeds the limits n≤{}, m≤{}, Δ≤{}",
            inst.n(),
            inst.m(),
            delta,
            opts.max_n,
            opts.max_m,
            opts.max_delta
        )));
    }
    Ok(())
}

pub fn enumerate_vertices(inst: &Instance, opts: &EnumOptions) -> Result<HullResult> {
    inst.validate()?;
    check_scale(inst, opts)?;
    let n = inst.n();
    let m = inst.m();
    let delta = inst.delta().max(BigInt::from(1));
    let ell = support_cap(m, &delta)?.min(n);
    let radius = proximity_radius(m, &delta);
    let d = dyadic_depth(&radius);
    let bounds = derive_var_bounds(inst);
    let sys = SmallSystem::new(inst, bounds.as_deref())?;
    let limit = box_count_limit(n, d as u64, ell);

    let ys = enumerate_bfs(inst);
    let mut pool: BTreeSet<IntPoint> = BTreeSet::new();
    let mut discarded = Vec::new();
    let mut probed: u64 = 0;
    for y in &ys {
        let mut grid = box_grid_filtered(y, &radius, ell, Some(&sys))?;
        let mut in_grid: u64 = 0;
        loop {
            let chunk: Vec<BoxDescriptor> = grid.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            in_grid += chunk.len() as u64;
            probed += chunk.len() as u64;
            assert!(BigInt::from(in_grid) <= limit, "box count exceeds its bound");
            if probed > opts.max_boxes {
                return Err(Error::Budget(format!(
                    "more than {} boxes probed",
                    opts.max_boxes
                )));
            }
            let results: Vec<(usize, Probe)> = chunk
                .par_iter()
                .enumerate()
                .map(|(t, b)| (t, probe(&sys, b)))
                .collect();
            for (t, r) in results {
                match r {
                    Probe::Single(x) => {
                        pool.insert(x);
                    }
                    Probe::Multi if opts.record_discarded => discarded.push(chunk[t].clone()),
                    _ => {}
                }
            }
        }
    }

    let candidates: Vec<IntPoint> = pool.into_iter().collect();
    // A kernel witness rules a point out of the hull's vertex set, so the
    // survivors still span the same hull and the LP only needs them.
    let survivors: Vec<IntPoint> = candidates
        .par_iter()
        .filter(|w| !matches!(kernel_certificate(inst, w), Ok(Certificate::Witness(_))))
        .cloned()
        .collect();
    let survivors = drop_midpoints(survivors);
    let bounded = bounds.is_some();
    let mut vertices: Vec<IntPoint> = survivors
        .par_iter()
        .filter(|w| {
            if bounded {
                is_vertex_exact(&survivors, w)
            } else {
                is_vertex_with_recession(inst, &survivors, w)
            }
        })
        .cloned()
        .collect();
    vertices.sort();
    let status = if candidates.is_empty() {
        HullStatus::Infeasible
    } else {
        HullStatus::Ok
    };
    Ok(HullResult {
        vertices,
        candidates_considered: candidates.len(),
        boxes_probed: probed,
        bfs_used: ys.len(),
        status,
        unbounded_warning: !bounded,
        ell,
        radius,
        d,
        discarded,
    })
}

/// Removes every point that is the midpoint of two others in the set.
fn drop_midpoints(points: Vec<IntPoint>) -> Vec<IntPoint> {
    let set: BTreeSet<&IntPoint> = points.iter().collect();
    let mut inner: BTreeSet<IntPoint> = BTreeSet::new();
    for (t, q) in points.iter().enumerate() {
        for r in &points[t + 1..] {
            let sum = q.add(r);
            if sum.0.iter().all(|v| v.is_even()) {
                let mid = IntPoint(sum.0.iter().map(|v| v / 2).collect());
                if set.contains(&mid) {
                    inner.insert(mid);
                }
            }
        }
    }
    points.into_iter().filter(|p| !inner.contains(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{int_vec, IntMatrix};

    fn pts(v: &[&[i64]]) -> Vec<IntPoint> {
        let mut p: Vec<IntPoint> = v.iter().map(|p| IntPoint::from_i64(p)).collect();
        p.sort();
        p
    }

    #[test]
    fn knapsack_vertices() {
        let k = Instance::knapsack("k3", &[1, 2, 4], 7).unwrap();
        let r = enumerate_vertices(&k, &EnumOptions::default()).unwrap();
        assert_eq!(r.vertices, pts(&[&[7, 0, 0], &[1, 3, 0], &[3, 0, 1], &[1, 1, 1]]));
        assert_eq!(r.status, HullStatus::Ok);
        assert_eq!(r.bfs_used, 3);
        assert!(!r.unbounded_warning);
    }

    #[test]
    fn trivial_and_infeasible() {
        let id = Instance::new("id", IntMatrix::identity(2), int_vec(&[1, 1])).unwrap();
        let r = enumerate_vertices(&id, &EnumOptions::default()).unwrap();
        assert_eq!(r.vertices, pts(&[&[1, 1]]));
        let odd = Instance::knapsack("odd", &[2], 1).unwrap();
        let r = enumerate_vertices(&odd, &EnumOptions::default()).unwrap();
        assert!(r.vertices.is_empty());
        assert_eq!(r.status, HullStatus::Infeasible);
        let a = IntMatrix::from_i64(&[&[1, 1], &[1, 1]]).unwrap();
        let lp_empty = Instance::new("e", a, int_vec(&[1, 2])).unwrap();
        let r = enumerate_vertices(&lp_empty, &EnumOptions::default()).unwrap();
        assert_eq!((r.status, r.bfs_used), (HullStatus::Infeasible, 0));
    }

    #[test]
    fn unbounded_ray() {
        let r = Instance::knapsack("ray", &[1, -1], 1).unwrap();
        let out = enumerate_vertices(&r, &EnumOptions::default()).unwrap();
        assert_eq!(out.vertices, pts(&[&[1, 0]]));
        assert!(out.unbounded_warning);
    }

    #[test]
    fn block_diagonal() {
        let a = IntMatrix::from_i64(&[&[1, 2, 0, 0], &[0, 0, 1, 2]]).unwrap();
        let blk = Instance::new("blk", a, int_vec(&[3, 3])).unwrap();
        let r = enumerate_vertices(&blk, &EnumOptions::default()).unwrap();
        assert_eq!(r.vertices.len(), 4);
    }

    #[test]
    fn refuses_large_instances() {
        let a: Vec<i64> = (1..=13).collect();
        let big = Instance::knapsack("big", &a, 20).unwrap();
        let e = enumerate_vertices(&big, &EnumOptions::default());
        assert!(matches!(e, Err(Error::Budget(_))));
        let k = Instance::knapsack("k3", &[1, 2, 4], 7).unwrap();
        let tight = EnumOptions {
            max_boxes: 1,
            ..EnumOptions::default()
        };
        assert!(matches!(enumerate_vertices(&k, &tight), Err(Error::Budget(_))));
    }
}
