use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::boxes::BoxDescriptor;
use crate::error::{Error, Result};
use crate::model::{Instance, IntPoint};

/// Largest matrix entry the machine-word search accepts.
const MAX_ENTRY_BITS: u64 = 40;
/// Largest right-hand side or coordinate value.
const MAX_VALUE_BITS: u64 = 80;

/// `A`, `b` and optional variable caps in machine integers.
#[derive(Clone, Debug)]
pub struct SmallSystem {
    pub(crate) a: Vec<Vec<i128>>,
    pub(crate) b: Vec<i128>,
    pub(crate) upper: Option<Vec<i128>>,
}

fn fit(v: &BigInt, bits: u64, what: &str) -> Result<i128> {
    if v.bits() > bits {
        return Err(Error::Budget(format!("{what} {v} exceeds {bits} bits")));
    }
    Ok(v.to_i128().expect("bit length checked"))
}

pub(crate) fn fit_value(v: &BigInt) -> Result<i128> {
    fit(v, MAX_VALUE_BITS, "value")
}

impl SmallSystem {
    pub fn new(inst: &Instance, upper: Option<&[BigInt]>) -> Result<Self> {
        let a = (0..inst.m())
            .map(|j| {
                inst.a
                    .row(j)
                    .iter()
                    .map(|v| fit(v, MAX_ENTRY_BITS, "entry"))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let b = inst.b.iter().map(fit_value).collect::<Result<Vec<_>>>()?;
        let upper = upper
            .map(|u| u.iter().map(fit_value).collect::<Result<Vec<_>>>())
            .transpose()?;
        Ok(SmallSystem { a, b, upper })
    }

    pub fn n(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    /// Tightens `lo..=hi` against every row; `false` when some row has no
    /// solution in the box.
    fn propagate(&self, lo: &mut [i128], hi: &mut [i128]) -> bool {
        for _ in 0..64 {
            let mut changed = false;
            for (row, &b) in self.a.iter().zip(&self.b) {
                let term = |i: usize, l: &[i128], h: &[i128]| {
                    let (p, q) = (row[i] * l[i], row[i] * h[i]);
                    (p.min(q), p.max(q))
                };
                let (mut smin, mut smax) = (0i128, 0i128);
                for i in 0..row.len() {
                    let (p, q) = term(i, lo, hi);
                    smin += p;
                    smax += q;
                }
                if b < smin || b > smax {
                    return false;
                }
                for i in 0..row.len() {
                    let a = row[i];
                    if a == 0 || lo[i] == hi[i] {
                        continue;
                    }
                    let (p, q) = term(i, lo, hi);
                    // a·x_i must lie in [b − rest_max, b − rest_min].
                    let (u, v) = (b - (smax - q), b - (smin - p));
                    let (nl, nh) = if a > 0 {
                        (Integer::div_ceil(&u, &a), Integer::div_floor(&v, &a))
                    } else {
                        (Integer::div_ceil(&v, &a), Integer::div_floor(&u, &a))
                    };
                    if nl > lo[i] || nh < hi[i] {
                        lo[i] = lo[i].max(nl);
                        hi[i] = hi[i].min(nh);
                        if lo[i] > hi[i] {
                            return false;
                        }
                        let (p2, q2) = term(i, lo, hi);
                        smin += p2 - p;
                        smax += q2 - q;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        true
    }

    fn solve(&self, mut lo: Vec<i128>, mut hi: Vec<i128>) -> Option<Vec<i128>> {
        if !self.propagate(&mut lo, &mut hi) {
            return None;
        }
        let widest = (0..lo.len()).max_by_key(|&i| hi[i] - lo[i]);
        match widest {
            Some(i) if hi[i] > lo[i] => {
                let mid = lo[i] + (hi[i] - lo[i]) / 2;
                let mut left_hi = hi.clone();
                left_hi[i] = mid;
                if let Some(x) = self.solve(lo.clone(), left_hi) {
                    return Some(x);
                }
                lo[i] = mid + 1;
                self.solve(lo, hi)
            }
            _ => {
                let ok = self
                    .a
                    .iter()
                    .zip(&self.b)
                    .all(|(row, &b)| row.iter().zip(&lo).map(|(a, x)| a * x).sum::<i128>() == b);
                ok.then_some(lo)
            }
        }
    }

    /// Integer point of `P` in the cell of `bx`, honouring `mode`.
    pub fn search(&self, bx: &BoxDescriptor, mode: &SearchMode) -> Option<IntPoint> {
        let n = bx.k.len();
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for i in 0..n {
            let (l, h) = bx.cell_small(i)?;
            let h = match &self.upper {
                Some(u) => h.min(u[i]),
                None => h,
            };
            lo.push(l);
            hi.push(h);
        }
        if let SearchMode::FindSecond {
            x_star,
            coord,
            direction,
        } = mode
        {
            let v = x_star.0[*coord].to_i128()?;
            match direction {
                Direction::Below => hi[*coord] = hi[*coord].min(v - 1),
                Direction::Above => lo[*coord] = lo[*coord].max(v + 1),
            }
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return None;
        }
        self.solve(lo, hi)
            .map(|x| IntPoint(x.into_iter().map(BigInt::from).collect()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Below,
    Above,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum SearchMode {
    FindOne,
    /// Another point with `x[coord] < x_star[coord]` (below) or `>` (above).
    FindSecond {
        x_star: IntPoint,
        coord: usize,
        direction: Direction,
    },
}

/// One-shot form of [`SmallSystem::search`].
pub fn box_integer_search(
    inst: &Instance,
    bx: &BoxDescriptor,
    mode: &SearchMode,
) -> Result<Option<IntPoint>> {
    Ok(SmallSystem::new(inst, None)?.search(bx, mode))
}
