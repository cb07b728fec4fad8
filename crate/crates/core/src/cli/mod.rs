//! The `ihull` command line.
//!
//! Exit codes: 0 success, 2 parse error, 3 budget refusal, 4 infeasible or
//! degenerate input, 1 anything else.

mod file;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

pub use file::{instance_to_json, parse_instance, read_instance};
pub use report::{LabeledPoint, Provenance, Report, ReportEntry};

use crate::bounds::{c_delta, ineq_report, instance_report, tags};
use crate::certify::{kernel_certificate, Certificate};
use crate::concentration::{
    expectation_claim_check, mc_tail, thm4_constant, BoundedVectorFamily, ConstantVariant, Law,
};
use crate::enumerate::{enumerate_vertices, EnumOptions, HullStatus};
use crate::error::{Error, Result};
use crate::instances::{gen, FamilySpec};
use crate::model::{BigRat, IntPoint};
use crate::oracle::{enumerate_lattice, hull_vertices_oracle, min_support_optimum, Sense};

#[derive(Parser, Debug)]
#[command(name = "ihull", version, about = "Sparse vertices of integer hulls")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the machine-readable report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LawArg {
    TwoPoint,
    Uniform,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Every support and vertex-count bound for an instance.
    Bounds {
        file: PathBuf,
        /// Restrict support-dependent bounds to these 0-based columns, e.g. `0,2`.
        #[arg(long)]
        support: Option<String>,
        /// ε for the warm-up bound, decimal or `p/q`.
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Enumerate the vertices of the integer hull.
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 50_000_000)]
        max_boxes: u64,
    },
    /// Brute-force lattice points, hull vertices and a minimal-support optimum.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = crate::oracle::DEFAULT_MAX_POINTS)]
        max_lattice_points: usize,
    },
    /// Search for a {−1,0,1} kernel vector on the support of a point.
    Certify {
        file: PathBuf,
        /// Comma-separated coordinates, e.g. `1,1`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Monte Carlo check of the vector tail bound, plus the numeric constants.
    Concentration {
        /// Use the ±A_i/2 family of this instance instead of a symmetric one.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        m: usize,
        /// Box width of every entry of the symmetric family.
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        #[arg(long, value_enum, default_value_t = LawArg::TwoPoint)]
        law: LawArg,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// `start:stop:step`, in units of √D unless `--absolute`.
        #[arg(long, default_value = "0.25:2:0.25")]
        delta_grid: String,
        #[arg(long)]
        absolute: bool,
    },
    /// Write an instance of a named family.
    Gen {
        /// `knapsack-powers(d)`, `block-diagonal(m,d)`, `triangular(m)` or `random(n,m,Δ,seed)`.
        spec: String,
    },
    /// Bounds on the smallest Y with Y − (m/2)·log₂Y > m·log₂(cΔ).
    Ineq {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        c: String,
        #[arg(long)]
        delta: String,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 2,
        Error::Budget(_) => 3,
        Error::Infeasible(_) | Error::Unbounded(_) => 4,
        _ => 1,
    }
}

fn parse_err(message: String) -> Error {
    Error::Parse {
        line: 1,
        column: 1,
        message,
    }
}

/// Decimal (`2.3514`), integer or `p/q`.
pub fn parse_rational(text: &str) -> Result<BigRat> {
    let t = text.trim();
    let bad = || parse_err(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRat::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars())).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let den = BigInt::from(10).pow(frac.len() as u32);
    let v = BigRat::new(num, den);
    Ok(if neg { -v } else { v })
}

pub fn parse_point(text: &str) -> Result<IntPoint> {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    t.split(',')
        .map(|s| BigInt::from_str(s.trim()).map_err(|_| parse_err(format!("bad coordinate {s:?} in {text:?}"))))
        .collect::<Result<Vec<_>>>()
        .map(IntPoint)
}

/// `start:stop:step`, both ends included.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || parse_err(format!("grid must be start:stop:step, got {text:?}"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [a, b, s] = parts[..] else {
        return Err(bad());
    };
    if !(s > 0.0 && a <= b && a.is_finite() && b.is_finite()) {
        return Err(bad());
    }
    let count = ((b - a) / s + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| a + k as f64 * s).collect())
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

fn cmd_bounds(path: &Path, support: Option<&str>, epsilon: Option<&str>) -> Result<(Report, i32)> {
    let inst = read_instance(path)?;
    let support: Option<Vec<usize>> = support
        .map(|s| {
            s.split(',')
                .map(|t| {
                    let i: usize = t.trim().parse().map_err(|_| parse_err(format!("bad column {t:?}")))?;
                    if i >= inst.n() {
                        return Err(parse_err(format!("column {i} out of range (n = {})", inst.n())));
                    }
                    Ok(i)
                })
                .collect::<Result<_>>()
        })
        .transpose()?;
    let eps = epsilon.map(parse_rational).transpose()?;
    let mut r = Report::new("bounds", &inst.name);
    r.bounds(&instance_report(&inst, support.as_deref(), eps.as_ref()));
    Ok((r, 0))
}

fn cmd_enumerate(path: &Path, max_n: usize, max_boxes: u64) -> Result<(Report, i32)> {
    let inst = read_instance(path)?;
    let opts = EnumOptions {
        max_n,
        max_boxes,
        ..EnumOptions::default()
    };
    let h = enumerate_vertices(&inst, &opts)?;
    let mut r = Report::new("enumerate", &inst.name);
    r.exact("vertices", h.vertices.len(), "");
    r.exact("bfs_used", h.bfs_used, "LP basic feasible solutions");
    r.exact("boxes_probed", h.boxes_probed, "");
    r.exact("candidates_considered", h.candidates_considered, "single-point boxes");
    r.exact("ell", h.ell, "support cap on box level vectors");
    r.exact("radius", &h.radius, "proximity radius");
    r.exact("d", h.d, "dyadic levels per coordinate");
    if h.unbounded_warning {
        r.exact("unbounded", "true", "no finite variable bounds; recession directions used");
    }
    for v in &h.vertices {
        r.point("vertex", v);
    }
    let code = match h.status {
        HullStatus::Ok => 0,
        HullStatus::Infeasible => {
            r.status = "infeasible".into();
            4
        }
    };
    Ok((r, code))
}

fn cmd_oracle(path: &Path, max_points: usize) -> Result<(Report, i32)> {
    let inst = read_instance(path)?;
    let cloud = enumerate_lattice(&inst, max_points)?;
    let mut r = Report::new("oracle", &inst.name);
    r.exact("lattice_points", cloud.points.len(), "");
    r.exact(
        "complete",
        cloud.complete,
        if cloud.complete { "bounds derived from Ax = b" } else { "user bounds only" },
    );
    if cloud.points.is_empty() {
        r.status = "infeasible".into();
        return Ok((r, 4));
    }
    let verts = hull_vertices_oracle(&inst, &cloud);
    r.exact("vertices", verts.len(), "");
    if let (Some(c), true) = (&inst.c, cloud.complete) {
        let (p, s) = min_support_optimum(&cloud, c, Sense::Minimize)?;
        r.exact("min_support", s, "minimal support among minimisers of c");
        r.point("min-support-optimum", &p);
    }
    for v in &verts {
        r.point("vertex", v);
    }
    Ok((r, 0))
}

fn cmd_certify(path: &Path, point: &str) -> Result<(Report, i32)> {
    let inst = read_instance(path)?;
    let v = parse_point(point)?;
    let mut r = Report::new("certify", &inst.name);
    r.exact("support", v.support_size(), "");
    match kernel_certificate(&inst, &v)? {
        Certificate::Witness(w) => {
            r.status = format!("NOT a vertex, witness {}", w.x);
            r.point("witness", &w.x);
        }
        Certificate::NoWitness => {
            r.status = "passes necessary condition (no kernel witness)".into();
        }
    }
    Ok((r, 0))
}

#[allow(clippy::too_many_arguments)]
fn cmd_concentration(
    path: Option<&Path>,
    n: usize,
    m: usize,
    width: f64,
    law: LawArg,
    samples: usize,
    seed: u64,
    grid: &str,
    absolute: bool,
) -> Result<(Report, i32, String)> {
    let law = match law {
        LawArg::TwoPoint => Law::TwoPoint,
        LawArg::Uniform => Law::Uniform,
    };
    let (fam, subject) = match path {
        Some(p) => {
            let inst = read_instance(p)?;
            let rows: Vec<Vec<f64>> = (0..inst.m())
                .map(|j| {
                    inst.a
                        .row(j)
                        .iter()
                        .map(|v| v.to_string().parse::<f64>().unwrap_or(f64::INFINITY))
                        .collect()
                })
                .collect();
            (BoundedVectorFamily::from_columns(&rows, law)?, inst.name)
        }
        None => (
            BoundedVectorFamily::symmetric(n, m, width, law)?,
            format!("symmetric n={n} m={m} width={width}"),
        ),
    };
    let grid = parse_grid(grid)?;
    let (_, d) = crate::concentration::hoeffding_vector_threshold(&fam);
    let unit = if absolute { 1.0 } else { d.to_f64().sqrt() };
    let deltas: Vec<f64> = grid.iter().map(|g| g * unit).collect();
    let tail = mc_tail(&fam, &deltas, samples, seed)?;
    let mut r = Report::new("concentration", &subject);
    r.real("Thm10.T", &tail.threshold, "1.12 * sum_j sqrt(sum_i width^2)");
    r.real("Thm10.D", &tail.denominator, "sum_i (sum_j width)^2");
    let mut ok = true;
    for p in &tail.points {
        let note = format!("delta={:.6}, stderr={:.3e}", p.delta.to_f64(), p.stderr);
        r.sampled("Thm10.empirical", p.empirical, &note);
        r.real("Thm10.bound", &p.theoretical, &note);
        ok &= p.consistent();
    }
    r.sampled("mean_deviation", tail.mean_deviation, &format!("stderr={:.3e}", tail.mean_stderr));
    let c = thm4_constant(1.0, 3.0, ConstantVariant::Printed, 1e-8)?;
    r.real(tags::THM4, &c.value, "min of 2a/(1-2exp(2-2a^2))");
    r.real("Thm4.argmin", &c.argmin, "");
    let v = thm4_constant(0.1, 3.0, ConstantVariant::Hoeffding, 1e-8)?;
    r.real("Thm4.variant", &v.value, "min of 2a/(1-2exp(-2a^2))");
    r.real("Thm4.variant.argmin", &v.argmin, "");
    r.real("Claim.expectation", &expectation_claim_check(1.0, &[0.9])?, "alpha=0.9, b=1");
    if !ok {
        r.status = "tail bound exceeded beyond 3 stderr".into();
    }
    let json = serde_json::to_string_pretty(&tail).expect("serialisable") + "\n";
    Ok((r, if ok { 0 } else { 1 }, json))
}

fn cmd_ineq(m: usize, c: &str, delta: &str) -> Result<(Report, i32)> {
    let c = parse_rational(c)?;
    let delta = BigInt::from_str(delta.trim()).map_err(|_| parse_err(format!("bad Δ {delta:?}")))?;
    let cd = c_delta(&c, &delta);
    let mut r = Report::new("ineq", &format!("m={m}, c*Delta={cd}"));
    r.bounds(&ineq_report(m, &cd)?);
    Ok((r, 0))
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let (report, code, raw) = match &cli.command {
        Command::Gen { spec } => {
            let spec: FamilySpec = spec.parse().map_err(|e: Error| parse_err(e.to_string()))?;
            let text = instance_to_json(&gen(&spec)?);
            match &cli.out {
                Some(p) => write_out(p, &text)?,
                None => stdout.write_all(text.as_bytes())?,
            }
            return Ok(0);
        }
        Command::Bounds { file, support, epsilon } => {
            let (r, c) = cmd_bounds(file, support.as_deref(), epsilon.as_deref())?;
            (r, c, None)
        }
        Command::Enumerate { file, max_n, max_boxes } => {
            let (r, c) = cmd_enumerate(file, *max_n, *max_boxes)?;
            (r, c, None)
        }
        Command::Oracle { file, max_lattice_points } => {
            let (r, c) = cmd_oracle(file, *max_lattice_points)?;
            (r, c, None)
        }
        Command::Certify { file, point } => {
            let (r, c) = cmd_certify(file, point)?;
            (r, c, None)
        }
        Command::Concentration {
            file,
            n,
            m,
            width,
            law,
            samples,
            seed,
            delta_grid,
            absolute,
        } => {
            let (r, c, tail) = cmd_concentration(
                file.as_deref(),
                *n,
                *m,
                *width,
                *law,
                *samples,
                *seed,
                delta_grid,
                *absolute,
            )?;
            (r, c, Some(tail))
        }
        Command::Ineq { m, c, delta } => {
            let (r, code) = cmd_ineq(*m, c, delta)?;
            (r, code, None)
        }
    };
    stdout.write_all(report.table().as_bytes())?;
    if let Some(p) = &cli.out {
        write_out(p, &raw.unwrap_or_else(|| report.to_json()))?;
    }
    Ok(code)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    if let Some(w) = cli.workers {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global();
    }
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
