use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundEntry, BoundReport};
use crate::model::{HPReal, IntPoint, Rounding};

/// Digits written for real values.
const DIGITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    RoundedUp,
    RoundedDown,
    MonteCarlo,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Exact => "exact",
            Provenance::RoundedUp => "rounded-up",
            Provenance::RoundedDown => "rounded-down",
            Provenance::MonteCarlo => "monte-carlo",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub tag: String,
    pub value: Option<String>,
    pub provenance: Provenance,
    pub applicable: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub label: String,
    pub point: IntPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub subject: String,
    pub status: String,
    pub entries: Vec<ReportEntry>,
    #[serde(default)]
    pub points: Vec<LabeledPoint>,
}

impl Report {
    pub fn new(command: &str, subject: &str) -> Self {
        Report {
            command: command.into(),
            subject: subject.into(),
            status: "ok".into(),
            entries: Vec::new(),
            points: Vec::new(),
        }
    }

    pub fn exact(&mut self, tag: &str, value: impl ToString, note: &str) {
        self.entries.push(ReportEntry {
            tag: tag.into(),
            value: Some(value.to_string()),
            provenance: Provenance::Exact,
            applicable: true,
            note: note.into(),
        });
    }

    pub fn real(&mut self, tag: &str, value: &HPReal, note: &str) {
        self.entries.push(ReportEntry {
            tag: tag.into(),
            value: Some(value.to_decimal(DIGITS)),
            provenance: match value.rounding() {
                Rounding::Up => Provenance::RoundedUp,
                Rounding::Down => Provenance::RoundedDown,
            },
            applicable: true,
            note: note.into(),
        });
    }

    pub fn sampled(&mut self, tag: &str, value: f64, note: &str) {
        self.entries.push(ReportEntry {
            tag: tag.into(),
            value: Some(format!("{value}")),
            provenance: Provenance::MonteCarlo,
            applicable: true,
            note: note.into(),
        });
    }

    pub fn bounds(&mut self, r: &BoundReport) {
        for e in &r.entries {
            self.entries.push(bound_entry(e));
        }
    }

    pub fn point(&mut self, label: &str, p: &IntPoint) {
        self.points.push(LabeledPoint {
            label: label.into(),
            point: p.clone(),
        });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialisable");
        s.push('\n');
        s
    }

    /// Aligned plain-text rendering.
    pub fn table(&self) -> String {
        let rows: Vec<[String; 4]> = self
            .entries
            .iter()
            .map(|e| {
                let value = e.value.as_deref().map_or_else(|| "n/a".to_string(), shorten);
                [e.tag.clone(), value, e.provenance.to_string(), e.note.clone()]
            })
            .collect();
        let head = ["tag", "value", "provenance", "note"];
        let mut w = head.map(str::len);
        for r in &rows {
            for (k, cell) in r.iter().enumerate().take(3) {
                w[k] = w[k].max(cell.chars().count());
            }
        }
        let line = |r: [&str; 4]| {
            format!("{:<a$}  {:>b$}  {:<c$}  {}", r[0], r[1], r[2], r[3], a = w[0], b = w[1], c = w[2])
                .trim_end()
                .to_string()
        };
        let mut out = format!("{} {}: {}\n", self.command, self.subject, self.status);
        out += &line(head);
        out.push('\n');
        for r in &rows {
            out += &line([&r[0], &r[1], &r[2], &r[3]]);
            out.push('\n');
        }
        for p in &self.points {
            out += &format!("{}: {}\n", p.label, p.point);
        }
        out
    }
}

/// Twelve significant digits for the table; the JSON keeps all of them.
fn shorten(v: &str) -> String {
    match v.find('.') {
        Some(dot) if v.len() > dot + 13 && !v.contains('e') => v[..dot + 13].to_string(),
        _ => v.to_string(),
    }
}

fn bound_entry(e: &BoundEntry) -> ReportEntry {
    let (value, provenance) = match (&e.exact, &e.value) {
        (Some(x), _) => (Some(x.to_string()), Provenance::Exact),
        (None, Some(v)) => (
            Some(v.to_decimal(DIGITS)),
            match v.rounding() {
                Rounding::Up => Provenance::RoundedUp,
                Rounding::Down => Provenance::RoundedDown,
            },
        ),
        (None, None) => (None, Provenance::RoundedUp),
    };
    ReportEntry {
        tag: e.tag.clone(),
        value,
        provenance,
        applicable: e.applicable,
        note: e.condition_note.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Interval;

    #[test]
    fn json_round_trip_and_table() {
        let mut r = Report::new("bounds", "k3");
        r.real("Thm4", &Interval::ratio(4007629742, 1_000_000_000).upper(), "log2");
        r.exact("count", 4, "");
        r.sampled("tail", 0.25, "delta=1");
        r.point("vertex", &IntPoint::from_i64(&[1, 1, 1]));
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let t = r.table();
        assert!(t.contains("Thm4") && t.contains("rounded-up") && t.contains("monte-carlo"));
        assert!(t.contains("vertex: (1,1,1)"));
    }
}
