//! Closed-form and implicit support bounds, vertex-count bounds, structure
//! bounds and the `|Y| − (m/2)·log|Y| > m·log(cΔ)` analysis.
//!
//! Every logarithm is base 2. Real values are evaluated on outward-rounded
//! intervals and reported at their upper end.

mod closed;
mod count;
mod ineq;
mod roots;
mod structure;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use closed::{
    general_delta_bound, general_gamma, general_supp_bound, knapsack_delta_bound,
    knapsack_implicit_bound, knapsack_l2_bound, knapsack_pigeonhole, pigeonhole_general,
    simple_related, DeltaVariant, ImplicitBound,
};
pub use count::{
    box_count_limit, ceil_log2, general_vertex_count, knapsack_vertex_count, support_cap,
    CountBound,
};
pub use ineq::{
    c_delta, ineq_case, ineq_table_bound, ineq_uniform_bound, minimal_y, sqrt_log_crossover,
    IneqCase, MinimalY,
};
pub use structure::{
    minkowski_bound, structure_bound, structure_distance, structure_distance_exact,
    structure_product, STRUCTURE_MAX_ROWS,
};

use crate::error::Result;
use crate::model::{BigRat, HPReal, Instance, Interval};

/// Identifiers carried by every report entry.
pub mod tags {
    pub const THM4: &str = "Thm4";
    pub const LEM5: &str = "Lem5";
    pub const LEM5_CLOSED: &str = "Lem5.closed";
    pub const COR6: &str = "Cor6";
    pub const PIGEONHOLE_KNAPSACK: &str = "Pigeonhole.knapsack";
    pub const COUNT_KNAPSACK: &str = "Count.knapsack";
    pub const THM9_GAMMA: &str = "Thm9.Gamma";
    pub const THM9: &str = "Thm9";
    pub const LEM11: &str = "Lem11";
    pub const COR12: &str = "Cor12";
    pub const LEM15: &str = "Lem15";
    pub const PIGEONHOLE_GENERAL: &str = "Pigeonhole.general";
    pub const RELATED_ROWSUM: &str = "Related.rowsum";
    pub const THM14: &str = "Thm14";
    pub const LEM18: &str = "Lem18";
    pub const LEM19: &str = "Lem19";
    pub const MIN_Y_ROOT: &str = "MinY.root";
    pub const MIN_Y_INTEGER: &str = "MinY.integer";
    pub const THM21: &str = "Thm21";
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundEntry {
    pub tag: String,
    /// Upper bound, rounded up; absent when the bound does not apply.
    pub value: Option<HPReal>,
    /// Exact integer value, for counting bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<BigInt>,
    pub applicable: bool,
    pub condition_note: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn push(&mut self, tag: &str, value: Result<HPReal>, note: &str) {
        let entry = match value {
            Ok(v) => BoundEntry {
                tag: tag.into(),
                value: Some(v),
                exact: None,
                applicable: true,
                condition_note: note.into(),
            },
            Err(e) => BoundEntry {
                tag: tag.into(),
                value: None,
                exact: None,
                applicable: false,
                condition_note: e.to_string(),
            },
        };
        self.entries.push(entry);
    }

    pub fn push_exact(&mut self, tag: &str, value: BigInt, note: &str) {
        self.entries.push(BoundEntry {
            tag: tag.into(),
            value: Some(Interval::from_int(&value).upper()),
            exact: Some(value),
            applicable: true,
            condition_note: note.into(),
        });
    }

    pub fn inapplicable(&mut self, tag: &str, why: &str) {
        self.entries.push(BoundEntry {
            tag: tag.into(),
            value: None,
            exact: None,
            applicable: false,
            condition_note: why.into(),
        });
    }

    pub fn get(&self, tag: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.tag == tag)
    }

    pub fn value(&self, tag: &str) -> Option<&HPReal> {
        self.get(tag).and_then(|e| e.value.as_ref())
    }

    pub fn extend(&mut self, other: BoundReport) {
        self.entries.extend(other.entries);
    }
}

/// Vertex-count bounds for `n` variables, `m` rows and entry bound `Δ`.
pub fn vertex_count_bounds(n: usize, m: usize, delta: &BigInt) -> BoundReport {
    let mut r = BoundReport::default();
    if m == 1 {
        match knapsack_vertex_count(n, delta) {
            Ok(c) => r.push_exact(
                tags::COUNT_KNAPSACK,
                c.value,
                &format!("ell={}, d={}", c.ell, c.d),
            ),
            Err(e) => r.inapplicable(tags::COUNT_KNAPSACK, &e.to_string()),
        }
    } else {
        r.inapplicable(tags::COUNT_KNAPSACK, "requires m = 1");
    }
    match general_vertex_count(n, m, delta) {
        Ok(c) => r.push_exact(
            tags::THM14,
            c.value,
            &format!("ell={}, log-cube={}", c.ell, c.d),
        ),
        Err(e) => r.inapplicable(tags::THM14, &e.to_string()),
    }
    r
}

/// Every support bound for `inst`, restricted to the columns in `support`
/// where a bound depends on them.
pub fn instance_report(
    inst: &Instance,
    support: Option<&[usize]>,
    epsilon: Option<&BigRat>,
) -> BoundReport {
    let a = &inst.a;
    let m = inst.m();
    let delta = inst.delta();
    let s = support.map_or(inst.n(), |s| s.len());
    let mut r = BoundReport::default();

    if m == 1 {
        let row = a.row(0);
        r.push(tags::THM4, knapsack_l2_bound(row, support), "log2(3.51*|a[S]|_2)");
        match knapsack_implicit_bound(&delta) {
            Ok(b) => {
                r.push(tags::LEM5, Ok(b.root), "largest s with s <= log2(3.51*sqrt(s)*Delta)");
                r.push(tags::LEM5_CLOSED, Ok(b.closed_form), "log2(2D*sqrt(1.5*log2(2D)))");
            }
            Err(e) => r.inapplicable(tags::LEM5, &e.to_string()),
        }
        r.push(tags::COR6, knapsack_delta_bound(&delta), "(3/2)log2(2.4*Delta)");
        let restricted: Vec<BigInt> = match support {
            Some(s) => s.iter().filter_map(|&i| row.get(i).cloned()).collect(),
            None => row.to_vec(),
        };
        r.push(tags::PIGEONHOLE_KNAPSACK, knapsack_pigeonhole(&restricted), "log2|a[S]|_1 + 1");
    } else {
        for tag in [tags::THM4, tags::LEM5, tags::COR6, tags::PIGEONHOLE_KNAPSACK] {
            r.inapplicable(tag, "requires m = 1");
        }
    }

    r.push(tags::THM9_GAMMA, general_gamma(a, support), "1.12*sum|a_j|_2 + sqrt(sum|A_i|_1^2)");
    r.push(tags::THM9, general_supp_bound(a, support), "m*log2(2e*Gamma/m + 2e)");
    r.push(
        tags::LEM11,
        general_delta_bound(m, &delta, &DeltaVariant::ImplicitRoot),
        "root of s = m*log2(4.24e*sqrt(s)*Delta + 2e)",
    );
    r.push(
        tags::COR12,
        general_delta_bound(m, &delta, &DeltaVariant::Explicit),
        "2m*log2(24*sqrt(m)*Delta)",
    );
    match epsilon {
        Some(eps) => r.push(
            tags::LEM15,
            general_delta_bound(m, &delta, &DeltaVariant::Warmup(eps.clone())),
            &format!("epsilon={eps}"),
        ),
        None => r.inapplicable(tags::LEM15, "needs --epsilon"),
    }
    r.push(
        tags::PIGEONHOLE_GENERAL,
        pigeonhole_general(m, s, &delta),
        &format!("m*log2(s*Delta+1), s={s}"),
    );
    r.push(tags::RELATED_ROWSUM, simple_related(a, support), "sum_j log2(|a_j[S]|_1 + 1)");
    let sub = match support {
        Some(s) if !s.is_empty() => a.select_columns(s),
        _ => Ok(a.clone()),
    };
    r.push(tags::LEM18, sub.and_then(|sub| structure_bound(&sub)), "min over row orders");
    r.push(tags::LEM19, minkowski_bound(a), "m + m*log2(m) + log2(sqrt(det(AA^T)))");
    r.extend(vertex_count_bounds(inst.n(), m, &delta));
    r
}

/// Table case, real and integer roots, and the uniform bound for one `(m, cΔ)`.
pub fn ineq_report(m: usize, c_delta: &BigRat) -> Result<BoundReport> {
    let mut r = BoundReport::default();
    let root = minimal_y(m, c_delta)?;
    let case = ineq_table_bound(m, c_delta)?;
    r.push(tags::MIN_Y_ROOT, Ok(root.root), "real root of Y - (m/2)log2 Y = m log2(c*Delta)");
    r.push_exact(tags::MIN_Y_INTEGER, root.integer_min, "smallest integer Y with strict inequality");
    r.push(&case.tag(), Ok(case.bound), &format!("case {} of the table", case.case_id));
    r.push(tags::THM21, ineq_uniform_bound(m, c_delta), "(3/2)m*log2(2.3514*c*Delta*sqrt(m))");
    Ok(r)
}
