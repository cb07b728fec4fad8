//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems are in standard form `min cᵀx, Ax = b, x ≥ 0`. Sizes here are a
//! few dozen rows and at most a few thousand columns, so a dense tableau of
//! [`BigRat`] is adequate.

use num_traits::{Signed, Zero};

use crate::model::BigRat;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<BigRat>, value: BigRat },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRat>>,
    obj: Vec<BigRat>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |target: &mut Vec<BigRat>| {
            if target[c].is_zero() {
                return;
            }
            let f = target[c].clone();
            for (t, p) in target.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *t -= &f * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// Runs simplex iterations with Bland's rule over the first `allowed`
    /// columns. Returns `false` on unboundedness.
    fn run(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, BigRat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Minimizes `cᵀx` subject to `Ax = b`, `x ≥ 0`.
pub fn minimize(a: &[Vec<BigRat>], b: &[BigRat], c: &[BigRat]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n));
    debug_assert_eq!(b.len(), m);

    // Phase 1: artificial columns n..n+m, rows sign-normalized so b >= 0.
    let width = n + m + 1;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<BigRat> = Vec::with_capacity(width);
        r.extend(row.iter().map(|v| if flip { -v } else { v.clone() }));
        r.extend((0..m).map(|k| {
            if k == i {
                BigRat::from_integer(1.into())
            } else {
                BigRat::zero()
            }
        }));
        r.push(if flip { -bi } else { bi.clone() });
        rows.push(r);
    }
    let mut obj = vec![BigRat::zero(); width];
    for r in &rows {
        for j in 0..n {
            obj[j] -= &r[j];
        }
        obj[width - 1] -= &r[width - 1];
    }
    let mut t = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
        width,
    };
    t.run(n + m);
    if !t.obj[width - 1].is_zero() {
        return LpOutcome::Infeasible;
    }

    // Drive remaining artificials out; rows with no original pivot are redundant.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    for r in t.rows.iter_mut() {
        let rhs = r[width - 1].clone();
        r.truncate(n);
        r.push(rhs);
    }
    t.width = n + 1;

    // Phase 2.
    let mut obj: Vec<BigRat> = c.to_vec();
    obj.push(BigRat::zero());
    for (r, &bv) in t.rows.iter().zip(&t.basis) {
        if c[bv].is_zero() {
            continue;
        }
        for (o, v) in obj.iter_mut().zip(r) {
            *o -= &c[bv] * v;
        }
    }
    t.obj = obj;
    if !t.run(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRat::zero(); n];
    for (r, &bv) in t.rows.iter().zip(&t.basis) {
        x[bv] = r[n].clone();
    }
    let value = -t.obj[n].clone();
    LpOutcome::Optimal { x, value }
}

/// A feasible point of `Ax = b, x ≥ 0`, if one exists.
pub fn feasible_point(a: &[Vec<BigRat>], b: &[BigRat]) -> Option<Vec<BigRat>> {
    let n = a.first().map_or(0, |r| r.len());
    match minimize(a, b, &vec![BigRat::zero(); n]) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}
