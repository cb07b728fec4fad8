use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::search::{fit_value, SmallSystem};
use crate::bounds::ceil_log2;
use crate::error::{Error, Result};
use crate::model::{BigRat, IntPoint};

/// Deepest dyadic level the machine-word grid supports.
const MAX_DEPTH: u32 = 60;

/// A cell of the dyadic decomposition around one corner `L`.
///
/// Coordinate `i` ranges over `{L_i}` when `k_i = 0` and over
/// `[L_i + 2^(k_i−1), L_i + 2^k_i − 1]` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxDescriptor {
    pub k: Vec<u8>,
    #[serde(rename = "L")]
    pub l: Vec<BigInt>,
    pub d: u32,
}

impl BoxDescriptor {
    /// Inclusive integer range of coordinate `i`.
    pub fn cell(&self, i: usize) -> (BigInt, BigInt) {
        let l = &self.l[i];
        match self.k[i] {
            0 => (l.clone(), l.clone()),
            k => (
                l + (BigInt::one() << (k as u32 - 1)),
                l + (BigInt::one() << k as u32) - 1u32,
            ),
        }
    }

    pub(crate) fn cell_small(&self, i: usize) -> Option<(i128, i128)> {
        let l = self.l[i].to_i128()?;
        let k = self.k[i] as u32;
        if k > MAX_DEPTH {
            return None;
        }
        Some(match k {
            0 => (l, l),
            k => (l + (1i128 << (k - 1)), l + (1i128 << k) - 1),
        })
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.k.len()).filter(|&i| self.k[i] != 0).collect()
    }

    pub fn support_size(&self) -> usize {
        self.k.iter().filter(|&&k| k != 0).count()
    }

    pub fn contains(&self, p: &IntPoint) -> bool {
        (0..self.k.len()).all(|i| {
            let (lo, hi) = self.cell(i);
            lo <= p.0[i] && p.0[i] <= hi
        })
    }
}

/// `⌈log₂(8R)⌉`.
pub fn dyadic_depth(r: &BigInt) -> u32 {
    ceil_log2(&(r * 8u32)) as u32
}

/// `L_i = max(⌈y_i − R⌉, 0)`.
pub fn box_corner(y: &[BigRat], r: &BigInt) -> Vec<BigInt> {
    let r = BigRat::from_integer(r.clone());
    y.iter()
        .map(|v| {
            let c = (v - &r).ceil().to_integer();
            if c.is_negative() {
                BigInt::zero()
            } else {
                c
            }
        })
        .collect()
}

/// Level vector of the cell holding `p`, if `p` lies in the grid.
pub fn locate_box(l: &[BigInt], d: u32, p: &IntPoint) -> Option<Vec<u8>> {
    l.iter()
        .zip(&p.0)
        .map(|(l, x)| {
            let t = x - l;
            if t.is_negative() {
                return None;
            }
            let k = t.bits() as u32;
            (k <= d).then_some(k as u8)
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
struct Level {
    k: u8,
    lo: i128,
    hi: i128,
    /// Scaled ℓ₁ distance from `y_i` to the nearest integer of the cell.
    dist: i128,
}

struct Rows {
    a: Vec<Vec<i128>>,
    b: Vec<i128>,
    /// Suffix extremes over undecided coordinates, indexed `[t][j]`.
    suf_min: Vec<Vec<i128>>,
    suf_max: Vec<Vec<i128>>,
    pre_min: Vec<Vec<i128>>,
    pre_max: Vec<Vec<i128>>,
}

/// Depth-first stream of the descriptors around one LP solution.
pub struct BoxGrid {
    corner: Vec<BigInt>,
    d: u32,
    ell: usize,
    levels: Vec<Vec<Level>>,
    min_rest: Vec<i128>,
    budget: i128,
    rows: Option<Rows>,
    choice: Vec<usize>,
    dist_pre: Vec<i128>,
    supp_pre: Vec<usize>,
    depth: usize,
    emitted: bool,
    done: bool,
}

/// Every descriptor with entries in `[0, d]`, at most `ell` nonzero
/// entries, whose cell has an integer point within ℓ₁ distance `R` of `y`.
pub fn box_grid(y: &[BigRat], r: &BigInt, ell: usize) -> Result<BoxGrid> {
    box_grid_filtered(y, r, ell, None)
}

/// As [`box_grid`], additionally skipping cells on which some row of the
/// system cannot balance, and clipping cells to the system's variable caps.
pub fn box_grid_filtered(
    y: &[BigRat],
    r: &BigInt,
    ell: usize,
    system: Option<&SmallSystem>,
) -> Result<BoxGrid> {
    if *r < BigInt::one() {
        return Err(Error::Invalid(format!("radius must be at least 1, got {r}")));
    }
    let n = y.len();
    let d = dyadic_depth(r);
    if d > MAX_DEPTH {
        return Err(Error::Budget(format!("dyadic depth {d} is too large")));
    }
    let corner = box_corner(y, r);
    let den = y
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled = |v: &BigInt| fit_value(&(v * &den));
    let budget = scaled(r)?;
    let mut levels = Vec::with_capacity(n);
    for i in 0..n {
        let l = fit_value(&corner[i])?;
        let num = fit_value(&(y[i].numer() * (&den / y[i].denom())))?;
        let den_s = fit_value(&den)?;
        let cap = system.and_then(|s| s.upper.as_ref()).map(|u| u[i]);
        let mut lv = Vec::new();
        for k in 0..=d {
            let (lo, mut hi) = match k {
                0 => (l, l),
                k => (l + (1i128 << (k - 1)), l + (1i128 << k) - 1),
            };
            if let Some(c) = cap {
                hi = hi.min(c);
            }
            if lo > hi {
                continue;
            }
            let dist = if num < lo * den_s {
                lo * den_s - num
            } else if num > hi * den_s {
                num - hi * den_s
            } else {
                0
            };
            if dist <= budget {
                lv.push(Level {
                    k: k as u8,
                    lo,
                    hi,
                    dist,
                });
            }
        }
        levels.push(lv);
    }
    let mut min_rest = vec![0i128; n + 1];
    for i in (0..n).rev() {
        let m = levels[i].iter().map(|v| v.dist).min().unwrap_or(i128::MAX / 4);
        min_rest[i] = min_rest[i + 1].saturating_add(m);
    }
    let rows = system.map(|s| {
        let m = s.b.len();
        let mut suf_min = vec![vec![0i128; m]; n + 1];
        let mut suf_max = vec![vec![0i128; m]; n + 1];
        for i in (0..n).rev() {
            let lo = levels[i].iter().map(|v| v.lo).min().unwrap_or(0);
            let hi = levels[i].iter().map(|v| v.hi).max().unwrap_or(0);
            for j in 0..m {
                let (p, q) = (s.a[j][i] * lo, s.a[j][i] * hi);
                suf_min[i][j] = suf_min[i + 1][j] + p.min(q);
                suf_max[i][j] = suf_max[i + 1][j] + p.max(q);
            }
        }
        Rows {
            a: s.a.clone(),
            b: s.b.clone(),
            suf_min,
            suf_max,
            pre_min: vec![vec![0i128; m]; n + 1],
            pre_max: vec![vec![0i128; m]; n + 1],
        }
    });
    let empty = levels.iter().any(Vec::is_empty);
    Ok(BoxGrid {
        corner,
        d,
        ell,
        levels,
        min_rest,
        budget,
        rows,
        choice: vec![0; n],
        dist_pre: vec![0; n + 1],
        supp_pre: vec![0; n + 1],
        depth: 0,
        emitted: false,
        done: empty,
    })
}

impl BoxGrid {
    pub fn corner(&self) -> &[BigInt] {
        &self.corner
    }

    pub fn depth_levels(&self) -> u32 {
        self.d
    }

    fn admissible(&self, t: usize, lv: &Level) -> bool {
        if self.dist_pre[t] + lv.dist + self.min_rest[t + 1] > self.budget {
            return false;
        }
        if self.supp_pre[t] + usize::from(lv.k != 0) > self.ell {
            return false;
        }
        if let Some(r) = &self.rows {
            for j in 0..r.b.len() {
                let (p, q) = (r.a[j][t] * lv.lo, r.a[j][t] * lv.hi);
                let lo = r.pre_min[t][j] + p.min(q) + r.suf_min[t + 1][j];
                let hi = r.pre_max[t][j] + p.max(q) + r.suf_max[t + 1][j];
                if r.b[j] < lo || r.b[j] > hi {
                    return false;
                }
            }
        }
        true
    }

    fn take(&mut self, t: usize, o: usize) {
        let lv = self.levels[t][o];
        self.choice[t] = o;
        self.dist_pre[t + 1] = self.dist_pre[t] + lv.dist;
        self.supp_pre[t + 1] = self.supp_pre[t] + usize::from(lv.k != 0);
        if let Some(r) = &mut self.rows {
            for j in 0..r.b.len() {
                let (p, q) = (r.a[j][t] * lv.lo, r.a[j][t] * lv.hi);
                r.pre_min[t + 1][j] = r.pre_min[t][j] + p.min(q);
                r.pre_max[t + 1][j] = r.pre_max[t][j] + p.max(q);
            }
        }
    }

    fn current(&self) -> BoxDescriptor {
        BoxDescriptor {
            k: (0..self.levels.len())
                .map(|i| self.levels[i][self.choice[i]].k)
                .collect(),
            l: self.corner.clone(),
            d: self.d,
        }
    }
}

impl Iterator for BoxGrid {
    type Item = BoxDescriptor;

    fn next(&mut self) -> Option<BoxDescriptor> {
        let n = self.levels.len();
        if self.done {
            return None;
        }
        if self.emitted {
            self.emitted = false;
            if n == 0 {
                self.done = true;
                return None;
            }
            self.depth = n - 1;
            self.choice[self.depth] += 1;
        }
        loop {
            let t = self.depth;
            if t == n {
                self.emitted = true;
                return Some(self.current());
            }
            let start = self.choice[t];
            let found = (start..self.levels[t].len()).find(|&o| self.admissible(t, &self.levels[t][o]));
            match found {
                Some(o) => {
                    self.take(t, o);
                    self.depth += 1;
                    if self.depth < n {
                        self.choice[self.depth] = 0;
                    }
                }
                None => {
                    if t == 0 {
                        self.done = true;
                        return None;
                    }
                    self.depth -= 1;
                    self.choice[self.depth] += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::box_count_limit;
    use crate::model::{int_vec, Instance};

    fn q(v: i64) -> BigRat {
        BigRat::from_integer(v.into())
    }

    #[test]
    fn one_dimensional_grid() {
        let grid: Vec<_> = box_grid(&[q(3)], &BigInt::from(3), 2).unwrap().collect();
        assert_eq!(grid.len(), 4);
        let ks: Vec<u8> = grid.iter().map(|b| b.k[0]).collect();
        assert_eq!(ks, vec![0, 1, 2, 3]);
        assert!(grid.iter().all(|b| b.d == 5 && b.l == int_vec(&[0])));
    }

    #[test]
    fn zero_support_cap() {
        let grid: Vec<_> = box_grid(&[q(3), q(0)], &BigInt::from(3), 0).unwrap().collect();
        assert_eq!(grid.len(), 1);
        assert_eq!(grid[0].k, vec![0, 0]);
    }

    #[test]
    fn corner_and_cells() {
        let y = [BigRat::new(7.into(), 2.into()), q(20)];
        assert_eq!(box_corner(&y, &BigInt::from(3)), int_vec(&[1, 17]));
        let b = BoxDescriptor {
            k: vec![0, 3],
            l: int_vec(&[1, 17]),
            d: 5,
        };
        assert_eq!(b.cell(0), (BigInt::from(1), BigInt::from(1)));
        assert_eq!(b.cell(1), (BigInt::from(21), BigInt::from(24)));
        assert_eq!(locate_box(&b.l, 5, &IntPoint::from_i64(&[1, 22])), Some(vec![0, 3]));
        assert_eq!(locate_box(&b.l, 5, &IntPoint::from_i64(&[0, 22])), None);
        assert_eq!(locate_box(&b.l, 2, &IntPoint::from_i64(&[1, 30])), None);
    }

    #[test]
    fn grid_matches_brute_force() {
        let y = [q(2), BigRat::new(3.into(), 2.into()), q(0)];
        let r = BigInt::from(5);
        for ell in 0..=3 {
            let grid: Vec<_> = box_grid(&y, &r, ell).unwrap().collect();
            let d = dyadic_depth(&r);
            let l = box_corner(&y, &r);
            let mut want = Vec::new();
            for k0 in 0..=d as u8 {
                for k1 in 0..=d as u8 {
                    for k2 in 0..=d as u8 {
                        let b = BoxDescriptor {
                            k: vec![k0, k1, k2],
                            l: l.clone(),
                            d,
                        };
                        if b.support_size() > ell {
                            continue;
                        }
                        let dist: BigRat = (0..3)
                            .map(|i| {
                                let (lo, hi) = b.cell(i);
                                let (lo, hi) = (BigRat::from_integer(lo), BigRat::from_integer(hi));
                                if y[i] < lo {
                                    lo - &y[i]
                                } else if y[i] > hi {
                                    &y[i] - hi
                                } else {
                                    BigRat::zero()
                                }
                            })
                            .sum();
                        if dist <= BigRat::from_integer(r.clone()) {
                            want.push(b);
                        }
                    }
                }
            }
            assert_eq!(grid, want, "ell = {ell}");
            assert!(BigInt::from(grid.len()) <= box_count_limit(3, d as u64, ell));
        }
    }

    #[test]
    fn row_filter_only_drops_empty_cells() {
        let inst = Instance::knapsack("k3", &[1, 2, 4], 7).unwrap();
        let sys = SmallSystem::new(&inst, Some(&int_vec(&[7, 3, 1]))).unwrap();
        let y = [q(7), q(0), q(0)];
        let r = BigInt::from(9);
        let all: Vec<_> = box_grid(&y, &r, 3).unwrap().collect();
        let kept: Vec<_> = box_grid_filtered(&y, &r, 3, Some(&sys)).unwrap().collect();
        assert!(kept.len() < all.len());
        for b in &all {
            if sys.search(b, &super::super::SearchMode::FindOne).is_some() {
                assert!(kept.iter().any(|c| c.k == b.k), "lost {:?}", b.k);
            }
        }
    }
}
