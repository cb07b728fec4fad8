//! Instance families: powers-of-two knapsacks, their block-diagonal
//! stacking, the lower-triangular all-ones matrix, and random instances.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::is_vertex_exact;
use crate::error::{Error, Result};
use crate::model::{Instance, IntMatrix, IntPoint};
use crate::oracle::{enumerate_lattice, hull_candidates, knapsack_minimizers};

/// Lattice size above which single-row families go to branch and bound.
const FAMILY_LATTICE_LIMIT: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum FamilySpec {
    KnapsackPowers { d: usize },
    BlockDiagonal { m: usize, d: usize },
    Triangular { m: usize },
    Random { n: usize, m: usize, delta: u64, seed: u64 },
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::KnapsackPowers { d } => write!(f, "knapsack-powers({d})"),
            FamilySpec::BlockDiagonal { m, d } => write!(f, "block-diagonal({m},{d})"),
            FamilySpec::Triangular { m } => write!(f, "triangular({m})"),
            FamilySpec::Random { n, m, delta, seed } => write!(f, "random({n},{m},{delta},{seed})"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// `knapsack-powers(d)`, `block-diagonal(m,d)`, `triangular(m)` or
    /// `random(n,m,Δ,seed)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("unrecognised family spec {s:?}"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let args: Vec<u64> = inner
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let spec = match (&s[..open], args.as_slice()) {
            ("knapsack-powers", [d]) => FamilySpec::KnapsackPowers { d: *d as usize },
            ("block-diagonal", [m, d]) => FamilySpec::BlockDiagonal {
                m: *m as usize,
                d: *d as usize,
            },
            ("triangular", [m]) => FamilySpec::Triangular { m: *m as usize },
            ("random", [n, m, delta, seed]) => FamilySpec::Random {
                n: *n as usize,
                m: *m as usize,
                delta: *delta,
                seed: *seed,
            },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            FamilySpec::KnapsackPowers { d } => d >= 1,
            FamilySpec::BlockDiagonal { m, d } => m >= 1 && d >= 1,
            FamilySpec::Triangular { m } => m >= 1,
            FamilySpec::Random { n, m, delta, .. } => n >= 1 && m >= 1 && delta >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("parameters of {self} must be at least 1")))
        }
    }
}

fn powers(d: usize) -> Vec<BigInt> {
    (0..d).map(|i| BigInt::one() << i).collect()
}

pub fn gen(spec: &FamilySpec) -> Result<Instance> {
    spec.validate()?;
    let name = spec.to_string();
    match *spec {
        FamilySpec::KnapsackPowers { d } => {
            let a = powers(d);
            let b = (BigInt::one() << d) - 1u32;
            let inst = Instance::new(name, IntMatrix::from_rows(vec![a.clone()])?, vec![b])?;
            inst.with_objective(a)
        }
        FamilySpec::BlockDiagonal { m, d } => {
            let p = powers(d);
            let rows: Vec<Vec<BigInt>> = (0..m)
                .map(|j| {
                    let mut row = vec![BigInt::zero(); m * d];
                    row[j * d..(j + 1) * d].clone_from_slice(&p);
                    row
                })
                .collect();
            let b = vec![(BigInt::one() << d) - 1u32; m];
            let c: Vec<BigInt> = (0..m).flat_map(|_| p.clone()).collect();
            Instance::new(name, IntMatrix::from_rows(rows)?, b)?.with_objective(c)
        }
        FamilySpec::Triangular { m } => {
            let rows: Vec<Vec<BigInt>> = (0..m)
                .map(|j| (0..m).map(|i| BigInt::from(u8::from(i <= j))).collect())
                .collect();
            let b = (1..=m).map(BigInt::from).collect();
            Instance::new(name, IntMatrix::from_rows(rows)?, b)
        }
        FamilySpec::Random { n, m, delta, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<Vec<BigInt>> = (0..m)
                .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(1..=delta))).collect())
                .collect();
            let x0: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(0..=2u32))).collect();
            let a = IntMatrix::from_rows(rows)?;
            let b = a.mul_vec(&x0)?;
            Instance::new(name, a, b)
        }
    }
}

/// Confirms that the all-ones point is a vertex of the family's integer
/// hull and returns it with its support size.
///
/// Uses the full lattice when it has at most 10^5 points; a single-row
/// family larger than that is settled by showing the all-ones point is
/// the unique minimiser of `Σ x_i`.
pub fn verify_family_vertex(spec: &FamilySpec) -> Result<(IntPoint, usize)> {
    let inst = gen(spec)?;
    let ones = IntPoint(vec![BigInt::one(); inst.n()]);
    if !inst.is_feasible(&ones) {
        return Err(Error::Infeasible(format!("all-ones point is not in {spec}")));
    }
    let confirmed = match enumerate_lattice(&inst, FAMILY_LATTICE_LIMIT) {
        Ok(cloud) if cloud.complete => is_vertex_exact(&hull_candidates(&inst, &cloud), &ones),
        Err(Error::Budget(_)) if inst.m() == 1 => {
            let c = vec![BigInt::one(); inst.n()];
            knapsack_minimizers(&inst, &c, 2)? == vec![ones.clone()]
        }
        Ok(_) => return Err(Error::Unbounded(format!("{spec} has no derivable bounds"))),
        Err(e) => return Err(e),
    };
    if !confirmed {
        return Err(Error::Invalid(format!("all-ones point is not a vertex of {spec}")));
    }
    let s = ones.support_size();
    Ok((ones, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::int_vec;

    #[test]
    fn parse_and_display() {
        for s in ["knapsack-powers(3)", "block-diagonal(2,2)", "triangular(3)", "random(4,1,8,42)"] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("knapsack-powers(0)".parse::<FamilySpec>().is_err());
        assert!("cube(3)".parse::<FamilySpec>().is_err());
        assert!("triangular(3".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn generated_examples() {
        let k = gen(&FamilySpec::KnapsackPowers { d: 3 }).unwrap();
        assert_eq!(k.a.row(0), int_vec(&[1, 2, 4]).as_slice());
        assert_eq!(k.b, int_vec(&[7]));
        let bd = gen(&FamilySpec::BlockDiagonal { m: 2, d: 2 }).unwrap();
        assert_eq!(bd.a, IntMatrix::from_i64(&[&[1, 2, 0, 0], &[0, 0, 1, 2]]).unwrap());
        assert_eq!(bd.b, int_vec(&[3, 3]));
        let t = gen(&FamilySpec::Triangular { m: 3 }).unwrap();
        assert_eq!(t.a, IntMatrix::from_i64(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1]]).unwrap());
        let big = gen(&FamilySpec::KnapsackPowers { d: 80 }).unwrap();
        assert_eq!(big.b[0], (BigInt::one() << 80) - 1);
    }

    #[test]
    fn random_is_feasible_and_seeded() {
        let spec = FamilySpec::Random {
            n: 5,
            m: 2,
            delta: 8,
            seed: 3,
        };
        let a = gen(&spec).unwrap();
        assert_eq!(a, gen(&spec).unwrap());
        assert!(a.delta() <= BigInt::from(8));
        assert!(!enumerate_lattice(&a, 100_000).unwrap().points.is_empty());
    }

    #[test]
    fn family_vertices() {
        let (p, s) = verify_family_vertex(&FamilySpec::KnapsackPowers { d: 3 }).unwrap();
        assert_eq!((p, s), (IntPoint::from_i64(&[1, 1, 1]), 3));
        let (_, s) = verify_family_vertex(&FamilySpec::BlockDiagonal { m: 2, d: 2 }).unwrap();
        assert_eq!(s, 4);
        let (p, _) = verify_family_vertex(&FamilySpec::KnapsackPowers { d: 1 }).unwrap();
        assert_eq!(p, IntPoint::from_i64(&[1]));
        let (_, s) = verify_family_vertex(&FamilySpec::Triangular { m: 4 }).unwrap();
        assert_eq!(s, 4);
        // Too many lattice points for the oracle; settled by branch and bound.
        let (_, s) = verify_family_vertex(&FamilySpec::KnapsackPowers { d: 10 }).unwrap();
        assert_eq!(s, 10);
    }
}
