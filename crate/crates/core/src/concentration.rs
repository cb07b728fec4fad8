//! Tail bounds for sums of independent bounded vectors, their Monte Carlo
//! validation, and the numeric constants behind the knapsack bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{HPReal, Interval, PREC};

/// Replicates simulated per work item.
const CHUNK: usize = 1024;

fn iv(x: f64) -> Interval {
    Interval::point(&Float::with_val(PREC, x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// `Y_i` is the lower or the upper corner of its box, each with
    /// probability 1/2.
    TwoPoint,
    /// Every entry uniform in its interval, independently.
    Uniform,
}

/// `n` independent random vectors `Y_i ∈ R^m` with
/// `lower[i][j] ≤ Y_i[j] ≤ upper[i][j]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundedVectorFamily {
    pub n: usize,
    pub m: usize,
    pub lower: Vec<Vec<f64>>,
    pub upper: Vec<Vec<f64>>,
    pub law: Law,
}

impl BoundedVectorFamily {
    pub fn new(lower: Vec<Vec<f64>>, upper: Vec<Vec<f64>>, law: Law) -> Result<Self> {
        let n = lower.len();
        let m = lower.first().map_or(0, Vec::len);
        if upper.len() != n || lower.iter().chain(&upper).any(|r| r.len() != m) {
            return Err(Error::Dimension("lower and upper must both be n × m".into()));
        }
        for (l, u) in lower.iter().flatten().zip(upper.iter().flatten()) {
            if !(l.is_finite() && u.is_finite() && l <= u) {
                return Err(Error::Invalid(format!("bad box [{l}, {u}]")));
            }
        }
        Ok(BoundedVectorFamily {
            n,
            m,
            lower,
            upper,
            law,
        })
    }

    /// Every entry in `[−w/2, w/2]`.
    pub fn symmetric(n: usize, m: usize, width: f64, law: Law) -> Result<Self> {
        let h = width / 2.0;
        Self::new(vec![vec![-h; m]; n], vec![vec![h; m]; n], law)
    }

    /// `±A_i/2` for each column `A_i` of a row-major matrix.
    pub fn from_columns(a: &[Vec<f64>], law: Law) -> Result<Self> {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        let half = |i: usize, s: f64| (0..m).map(|j| s * a[j][i] / 2.0).collect::<Vec<f64>>();
        let lower = (0..n)
            .map(|i| half(i, 1.0).into_iter().zip(half(i, -1.0)).map(|(p, q)| p.min(q)).collect())
            .collect();
        let upper = (0..n)
            .map(|i| half(i, 1.0).into_iter().zip(half(i, -1.0)).map(|(p, q)| p.max(q)).collect())
            .collect();
        Self::new(lower, upper, law)
    }

    pub fn mean(&self) -> Vec<f64> {
        (0..self.m)
            .map(|j| (0..self.n).map(|i| (self.lower[i][j] + self.upper[i][j]) / 2.0).sum())
            .collect()
    }

    fn width(&self, i: usize, j: usize) -> Interval {
        iv(self.upper[i][j]).sub(&iv(self.lower[i][j]))
    }

    fn sample(&self, rng: &mut ChaCha8Rng, mu: &[f64], y: &mut [f64]) -> f64 {
        y.fill(0.0);
        for i in 0..self.n {
            match self.law {
                Law::TwoPoint => {
                    let row = if rng.gen_bool(0.5) { &self.upper[i] } else { &self.lower[i] };
                    for (acc, v) in y.iter_mut().zip(row) {
                        *acc += v;
                    }
                }
                Law::Uniform => {
                    for (j, acc) in y.iter_mut().enumerate() {
                        let (l, u) = (self.lower[i][j], self.upper[i][j]);
                        *acc += if l < u { rng.gen_range(l..=u) } else { l };
                    }
                }
            }
        }
        y.iter().zip(mu).map(|(v, m)| (v - m).abs()).sum()
    }
}

/// `(T, D)` with `T = 1.12·Σ_j √(Σ_i (u_i[j]−l_i[j])²)` and
/// `D = Σ_i (Σ_j (u_i[j]−l_i[j]))²`, both rounded up.
pub fn hoeffding_vector_threshold(fam: &BoundedVectorFamily) -> (HPReal, HPReal) {
    let mut t = Interval::from_i64(0);
    for j in 0..fam.m {
        let mut s = Interval::from_i64(0);
        for i in 0..fam.n {
            s = s.add(&fam.width(i, j).square());
        }
        t = t.add(&s.sqrt());
    }
    let t = Interval::ratio(112, 100).mul(&t);
    let mut d = Interval::from_i64(0);
    for i in 0..fam.n {
        let mut c = Interval::from_i64(0);
        for j in 0..fam.m {
            c = c.add(&fam.width(i, j));
        }
        d = d.add(&c.square());
    }
    (t.upper(), d.upper())
}

/// `2·exp(−2δ²/D)`; `D = 0` means no deviation at all.
fn two_exp(delta: &Interval, denom: &Interval) -> Interval {
    if !denom.is_positive() {
        let zero = delta.hi().is_zero();
        return Interval::from_i64(if zero { 1 } else { 0 });
    }
    let e = delta.square().scale(-2).div(denom).exp();
    e.scale(2)
}

/// `2·exp(−2δ²/Σ w_i²)`.
pub fn scalar_hoeffding_bound(widths: &[f64], delta: f64) -> Result<HPReal> {
    if delta < 0.0 {
        return Err(Error::Invalid("δ must be nonnegative".into()));
    }
    let s = widths
        .iter()
        .fold(Interval::from_i64(0), |acc, w| acc.add(&iv(*w).square()));
    Ok(two_exp(&iv(delta), &s).upper())
}

/// `2·exp(−2δ²/Σ c_i²)`.
pub fn mcdiarmid_bound(c: &[f64], delta: f64) -> Result<HPReal> {
    if c.iter().any(|&v| v < 0.0) {
        return Err(Error::Invalid("sensitivities must be nonnegative".into()));
    }
    scalar_hoeffding_bound(c, delta)
}

/// Per-variable sensitivities `c_i = Σ_j (u_i[j] − l_i[j])`.
pub fn sensitivities(fam: &BoundedVectorFamily) -> Vec<f64> {
    (0..fam.n)
        .map(|i| (0..fam.m).map(|j| fam.upper[i][j] - fam.lower[i][j]).sum())
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TailPoint {
    pub delta: HPReal,
    pub empirical: f64,
    pub stderr: f64,
    /// `2·exp(−2δ²/D)`, rounded up.
    pub theoretical: HPReal,
}

impl TailPoint {
    /// Empirical frequency within three standard errors of the bound.
    pub fn consistent(&self) -> bool {
        self.empirical <= self.theoretical.to_f64() + 3.0 * self.stderr
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TailReport {
    pub threshold: HPReal,
    pub denominator: HPReal,
    pub points: Vec<TailPoint>,
    /// Sample mean of `‖Y − μ‖₁` and its standard error.
    pub mean_deviation: f64,
    pub mean_stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Default)]
struct Tally {
    hits: Vec<u64>,
    sum: f64,
    sum_sq: f64,
}

/// Frequency of `‖Y − μ‖₁ ≥ T + δ` over `samples` replicates.
///
/// Replicate `r` draws from its own ChaCha stream `(seed, r)`, so the
/// result does not depend on the thread count.
pub fn mc_tail(
    fam: &BoundedVectorFamily,
    delta_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<TailReport> {
    if samples < 10_000 {
        return Err(Error::Invalid(format!("need at least 10^4 samples, got {samples}")));
    }
    if delta_grid.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
        return Err(Error::Invalid("δ values must be finite and nonnegative".into()));
    }
    let (t, d) = hoeffding_vector_threshold(fam);
    let mu = fam.mean();
    let cuts: Vec<f64> = delta_grid.iter().map(|dl| t.to_f64() + dl).collect();
    let chunks = samples.div_ceil(CHUNK);
    let tallies: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut tally = Tally {
                hits: vec![0; cuts.len()],
                ..Tally::default()
            };
            let mut y = vec![0.0; fam.m];
            for r in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(r as u64);
                let dev = fam.sample(&mut rng, &mu, &mut y);
                for (h, cut) in tally.hits.iter_mut().zip(&cuts) {
                    if dev >= *cut {
                        *h += 1;
                    }
                }
                tally.sum += dev;
                tally.sum_sq += dev * dev;
            }
            tally
        })
        .collect();
    let mut total = Tally {
        hits: vec![0; cuts.len()],
        ..Tally::default()
    };
    for tl in tallies {
        for (a, b) in total.hits.iter_mut().zip(tl.hits) {
            *a += b;
        }
        total.sum += tl.sum;
        total.sum_sq += tl.sum_sq;
    }
    let nf = samples as f64;
    let d_iv = Interval::point(d.value());
    let points = delta_grid
        .iter()
        .zip(&total.hits)
        .map(|(&dl, &h)| {
            let p = h as f64 / nf;
            TailPoint {
                delta: iv(dl).upper(),
                empirical: p,
                stderr: (p * (1.0 - p) / nf).sqrt(),
                theoretical: two_exp(&iv(dl), &d_iv).upper(),
            }
        })
        .collect();
    let mean = total.sum / nf;
    let var = (total.sum_sq / nf - mean * mean).max(0.0);
    Ok(TailReport {
        threshold: t,
        denominator: d,
        points,
        mean_deviation: mean,
        mean_stderr: (var / nf).sqrt(),
        samples,
        seed,
    })
}

/// `min_α (α + exp(−2α²)/α)·√b` over the grid.
pub fn expectation_claim_check(b: f64, alpha_grid: &[f64]) -> Result<HPReal> {
    if b.is_nan() || b <= 0.0 {
        return Err(Error::Invalid("b must be positive".into()));
    }
    if alpha_grid.is_empty() || alpha_grid.iter().any(|&a| a.is_nan() || a <= 0.0) {
        return Err(Error::Invalid("α grid must be nonempty and positive".into()));
    }
    let root_b = iv(b).sqrt();
    let best = alpha_grid
        .iter()
        .map(|&a| {
            let a = iv(a);
            let v = a.add(&a.square().scale(-2).exp().div(&a));
            v.mul(&root_b).upper()
        })
        .min_by(|x, y| x.value().partial_cmp(y.value()).expect("finite"))
        .expect("nonempty grid");
    Ok(best)
}

/// Which exponent the knapsack constant uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantVariant {
    /// `2α / (1 − 2·exp(2 − 2α²))`.
    Printed,
    /// `2α / (1 − 2·exp(−2α²))`.
    Hoeffding,
}

impl ConstantVariant {
    fn shift(self) -> i64 {
        match self {
            ConstantVariant::Printed => 2,
            ConstantVariant::Hoeffding => 0,
        }
    }

    fn f(self, a: f64) -> f64 {
        2.0 * a / (1.0 - 2.0 * (self.shift() as f64 - 2.0 * a * a).exp())
    }

    fn f_interval(self, a: f64) -> Interval {
        let a = iv(a);
        let e = Interval::from_i64(self.shift()).sub(&a.square().scale(2)).exp().scale(2);
        a.scale(2).div(&Interval::from_i64(1).sub(&e))
    }

    /// Where the denominator vanishes: `α² = (shift + ln 2)/2`.
    fn pole(self) -> f64 {
        ((self.shift() as f64 + std::f64::consts::LN_2) / 2.0).sqrt()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstantMin {
    /// `f` at `argmin`, rounded up.
    pub value: HPReal,
    pub argmin: HPReal,
    pub variant: ConstantVariant,
}

/// Golden-section minimum of the knapsack constant on `[lo, hi]`, clipped
/// to where its denominator is positive.
pub fn thm4_constant(lo: f64, hi: f64, variant: ConstantVariant, tol: f64) -> Result<ConstantMin> {
    let pole = variant.pole();
    if !(hi > pole && lo < hi && tol > 0.0) {
        return Err(Error::Invalid(format!(
            "range [{lo}, {hi}] has no point with positive denominator (pole at {pole})"
        )));
    }
    let mut a = lo.max(pole * (1.0 + 1e-9));
    let mut b = hi;
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (variant.f(c), variant.f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = variant.f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = variant.f(d);
        }
    }
    let x = (a + b) / 2.0;
    Ok(ConstantMin {
        value: variant.f_interval(x).upper(),
        argmin: iv(x).upper(),
        variant,
    })
}

/// `w·e^w − z` for `w = −(4α² + 1)/2` and `z = −1/(4e^{5/2})`; zero at the
/// exact minimiser of the printed constant.
pub fn lambert_residual(alpha: f64) -> f64 {
    let w = -(4.0 * alpha * alpha + 1.0) / 2.0;
    let z = -1.0 / (4.0 * 2.5f64.exp());
    w * w.exp() - z
}
