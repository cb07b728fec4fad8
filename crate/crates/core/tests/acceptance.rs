//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines print in order; the
//! process exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use ihull::bounds::{
    ineq_case, ineq_table_bound, ineq_uniform_bound, instance_report, knapsack_l2_bound, minimal_y,
    tags, vertex_count_bounds,
};
use ihull::certify::{kernel_certificate, witness_is_sound, Certificate};
use ihull::concentration::{
    expectation_claim_check, hoeffding_vector_threshold, lambert_residual, mc_tail, thm4_constant, BoundedVectorFamily,
    ConstantVariant, Law,
};
use ihull::enumerate::{enumerate_vertices, EnumOptions};
use ihull::instances::{gen, verify_family_vertex, FamilySpec};
use ihull::model::{BigRat, Instance, IntPoint};
use ihull::oracle::{enumerate_lattice, hull_vertices_oracle, DEFAULT_MAX_POINTS};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Case {
    inst: Instance,
    points: Vec<IntPoint>,
    vertices: Vec<IntPoint>,
}

type Outcome = Result<String, String>;

fn report(id: usize, outcome: Outcome, started: Instant) -> bool {
    let secs = started.elapsed().as_secs_f64();
    match outcome {
        Ok(msg) => {
            println!("PASS criterion {id}: {msg} ({secs:.1}s)");
            true
        }
        Err(msg) => {
            println!("FAIL criterion {id}: {msg} ({secs:.1}s)");
            false
        }
    }
}

fn oracle_cases() -> Vec<Case> {
    common::criterion_suite()
        .into_iter()
        .map(|inst| {
            let cloud = enumerate_lattice(&inst, DEFAULT_MAX_POINTS).expect("bounded suite");
            assert!(cloud.complete);
            let vertices = hull_vertices_oracle(&inst, &cloud);
            Case {
                inst,
                points: cloud.points,
                vertices,
            }
        })
        .collect()
}

fn enumeration_matches(cases: &[Case]) -> Outcome {
    let opts = EnumOptions::default();
    let mut bad = Vec::new();
    for c in cases {
        match enumerate_vertices(&c.inst, &opts) {
            Ok(r) if r.vertices == c.vertices => {}
            Ok(r) => bad.push(format!("{}: {} vs oracle {}", c.inst.name, r.vertices.len(), c.vertices.len())),
            Err(e) => bad.push(format!("{}: {e}", c.inst.name)),
        }
    }
    if bad.is_empty() {
        Ok(format!("enumeration equals the oracle on {} instances", cases.len()))
    } else {
        Err(format!("{} mismatches, first: {}", bad.len(), bad[0]))
    }
}

const SUPPORT_TAGS: [&str; 11] = [
    tags::THM4,
    tags::LEM5,
    tags::COR6,
    tags::PIGEONHOLE_KNAPSACK,
    tags::THM9,
    tags::LEM11,
    tags::COR12,
    tags::PIGEONHOLE_GENERAL,
    tags::RELATED_ROWSUM,
    tags::LEM18,
    tags::LEM19,
];

fn support_dominance(cases: &[Case]) -> Outcome {
    let mut checks = 0usize;
    let mut bad = Vec::new();
    for c in cases {
        for v in &c.vertices {
            let supp = v.support();
            let r = instance_report(&c.inst, Some(&supp), None);
            for tag in SUPPORT_TAGS {
                let Some(e) = r.get(tag) else { continue };
                if !e.applicable {
                    continue;
                }
                checks += 1;
                match &e.value {
                    Some(b) if b.dominates(supp.len()) => {}
                    other => bad.push(format!("{} {v} {tag}: {:?}", c.inst.name, other.as_ref().map(|b| b.to_f64()))),
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{checks} bound evaluations, zero violations"))
    } else {
        Err(format!("{} violations, first: {}", bad.len(), bad[0]))
    }
}

fn family_gap() -> Outcome {
    let mut worst = 0.0f64;
    for d in 1..=10usize {
        let spec = FamilySpec::KnapsackPowers { d };
        let (_, s) = verify_family_vertex(&spec).map_err(|e| format!("{spec}: {e}"))?;
        let inst = gen(&spec).map_err(|e| e.to_string())?;
        let log_delta = inst.delta().bits() as usize - 1;
        if s != d || s != log_delta + 1 {
            return Err(format!("{spec}: support {s}, log2(Delta)+1 = {}", log_delta + 1));
        }
        let bound = knapsack_l2_bound(inst.a.row(0), None).map_err(|e| e.to_string())?;
        let gap = bound.to_f64() - d as f64;
        if bound.cmp_int(&BigInt::from(d)).is_le() || gap >= 1.03 {
            return Err(format!("{spec}: gap {gap}"));
        }
        worst = worst.max(gap);
    }
    for m in 1..=3usize {
        for d in 1..=3usize {
            let spec = FamilySpec::BlockDiagonal { m, d };
            let (_, s) = verify_family_vertex(&spec).map_err(|e| format!("{spec}: {e}"))?;
            let inst = gen(&spec).map_err(|e| e.to_string())?;
            let log_delta = inst.delta().bits() as usize - 1;
            if s != m * d || s != m * log_delta + m {
                return Err(format!("{spec}: support {s}"));
            }
        }
    }
    Ok(format!("largest knapsack gap {worst:.6}, block-diagonal supports m*d"))
}

fn tail_check() -> Outcome {
    let fam = BoundedVectorFamily::symmetric(50, 5, 1.0, Law::TwoPoint).map_err(|e| e.to_string())?;
    let root_d = hoeffding_vector_threshold(&fam).1.to_f64().sqrt();
    let grid: Vec<f64> = [0.25, 0.5, 1.0, 1.5, 2.0].iter().map(|k| k * root_d).collect();
    let r = mc_tail(&fam, &grid, 100_000, 7).map_err(|e| e.to_string())?;
    for p in &r.points {
        if !p.consistent() {
            return Err(format!(
                "delta {}: empirical {} > {} + 3*{}",
                p.delta.to_f64(),
                p.empirical,
                p.theoretical.to_f64(),
                p.stderr
            ));
        }
    }
    let worst = r
        .points
        .iter()
        .map(|p| p.empirical - p.theoretical.to_f64())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(format!("5 grid points, largest empirical minus bound {worst:.4}"))
}

fn constants() -> Outcome {
    let c = thm4_constant(1.0, 3.0, ConstantVariant::Printed, 1e-10).map_err(|e| e.to_string())?;
    let (v, a) = (c.value.to_f64(), c.argmin.to_f64());
    if !(v > 3.50 && v <= 3.51) {
        return Err(format!("minimum {v}"));
    }
    if !(a > 1.598 && a < 1.599) {
        return Err(format!("argmin {a}"));
    }
    let res = lambert_residual(a);
    if res.abs() > 1e-8 {
        return Err(format!("residual {res} at argmin"));
    }
    let e = expectation_claim_check(1.0, &[0.9]).map_err(|e| e.to_string())?.to_f64();
    if e > 1.12 {
        return Err(format!("expectation constant {e}"));
    }
    Ok(format!("minimum {v:.9} at {a:.9}, expectation constant {e:.9}"))
}

fn inequality_grid() -> Outcome {
    let mut checked = 0;
    let mut case3 = Vec::new();
    for m in 1..=8usize {
        for cd in [4i64, 8, 9, 10, 16, 32, 64] {
            let x = BigRat::from_integer(cd.into());
            let root = minimal_y(m, &x).map_err(|e| e.to_string())?.root;
            let table = ineq_table_bound(m, &x).map_err(|e| e.to_string())?;
            let uniform = ineq_uniform_bound(m, &x).map_err(|e| e.to_string())?;
            if table.case_id != ineq_case(m, &x) {
                return Err(format!("m={m}, cD={cd}: case mismatch"));
            }
            if root.value() > table.bound.value() || root.value() > uniform.value() {
                return Err(format!(
                    "m={m}, cD={cd}: root {} vs case {} bound {} and uniform {}",
                    root.to_f64(),
                    table.case_id,
                    table.bound.to_f64(),
                    uniform.to_f64()
                ));
            }
            if table.case_id == 3 {
                case3.push((m, cd));
            }
            checked += 1;
        }
    }
    if let Some(&(m, cd)) = case3.iter().find(|&&(m, cd)| m != 2 || !(9..=10).contains(&cd)) {
        return Err(format!("case 3 at m={m}, cD={cd}"));
    }
    Ok(format!("{checked} grid points, case 3 only at {case3:?}"))
}

fn vertex_counts(cases: &[Case]) -> Outcome {
    let mut bad = Vec::new();
    for c in cases {
        let want = if c.inst.m() == 1 { tags::COUNT_KNAPSACK } else { tags::THM14 };
        let r = vertex_count_bounds(c.inst.n(), c.inst.m(), &c.inst.delta());
        match r.get(want).and_then(|e| e.exact.clone()) {
            Some(bound) if BigInt::from(c.vertices.len()) <= bound => {}
            other => bad.push(format!("{} {want}: {} vs {other:?}", c.inst.name, c.vertices.len())),
        }
    }
    if bad.is_empty() {
        Ok(format!("{} instances within their count bounds", cases.len()))
    } else {
        Err(format!("{} violations, first: {}", bad.len(), bad[0]))
    }
}

fn certificates(cases: &[Case]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let usable: Vec<&Case> = cases.iter().filter(|c| !c.points.is_empty()).collect();
    let (mut witnesses, mut vertices) = (0, 0);
    for _ in 0..1000 {
        let c = usable[rng.gen_range(0..usable.len())];
        let p = &c.points[rng.gen_range(0..c.points.len())];
        let is_vertex = c.vertices.binary_search(p).is_ok();
        match kernel_certificate(&c.inst, p).map_err(|e| format!("{} {p}: {e}", c.inst.name))? {
            Certificate::Witness(w) => {
                if is_vertex {
                    return Err(format!("{} {p}: witness against an oracle vertex", c.inst.name));
                }
                if !witness_is_sound(&c.inst, p, &w) {
                    return Err(format!("{} {p}: unsound witness {}", c.inst.name, w.x));
                }
                witnesses += 1;
            }
            Certificate::NoWitness => vertices += usize::from(is_vertex),
        }
    }
    Ok(format!("1000 pairs, {witnesses} sound witnesses, {vertices} vertices with no witness"))
}

fn main() -> ExitCode {
    let t = Instant::now();
    let cases = oracle_cases();
    println!("oracle ground truth for {} instances ({:.1}s)", cases.len(), t.elapsed().as_secs_f64());

    let mut ok = true;
    let t = Instant::now();
    ok &= report(1, enumeration_matches(&cases), t);
    let t = Instant::now();
    ok &= report(2, support_dominance(&cases), t);
    let t = Instant::now();
    ok &= report(3, family_gap(), t);
    let t = Instant::now();
    ok &= report(4, tail_check(), t);
    let t = Instant::now();
    ok &= report(5, constants(), t);
    let t = Instant::now();
    ok &= report(6, inequality_grid(), t);
    let t = Instant::now();
    ok &= report(7, vertex_counts(&cases), t);
    let t = Instant::now();
    ok &= report(8, certificates(&cases), t);

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
