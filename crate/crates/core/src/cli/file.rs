//! Instance files: one JSON object per file with `name`, `m`, `n`, `A`,
//! `b` and optional `c` and `var_upper_bounds`. Integers are plain JSON
//! numbers of any size (quoted decimal strings are accepted too).

use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, Deserializer};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{Instance, IntMatrix};

struct DecInt(BigInt);

impl<'de> Deserialize<'de> for DecInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = match Value::deserialize(d)? {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s,
            other => return Err(de::Error::custom(format!("expected an integer, found {other}"))),
        };
        BigInt::from_str(text.trim())
            .map(DecInt)
            .map_err(|_| de::Error::custom(format!("expected an integer, found {text}")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    name: String,
    m: usize,
    n: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<DecInt>>,
    b: Vec<DecInt>,
    #[serde(default)]
    c: Option<Vec<DecInt>>,
    #[serde(default)]
    var_upper_bounds: Option<Vec<DecInt>>,
}

/// 1-based line and column of the first occurrence of `"key"`.
fn locate(text: &str, key: &str) -> (usize, usize) {
    let needle = format!("\"{key}\"");
    let Some(at) = text.find(&needle) else {
        return (1, 1);
    };
    let before = &text[..at];
    let line = before.matches('\n').count() + 1;
    let column = at - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

fn at(text: &str, key: &str, message: String) -> Error {
    let (line, column) = locate(text, key);
    Error::Parse {
        line,
        column,
        message,
    }
}

fn ints(v: Vec<DecInt>) -> Vec<BigInt> {
    v.into_iter().map(|d| d.0).collect()
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.a.len() != raw.m {
        return Err(at(
            text,
            "A",
            format!("A has {} rows but m = {} (row {} missing)", raw.a.len(), raw.m, raw.a.len() + 1),
        ));
    }
    for (j, row) in raw.a.iter().enumerate() {
        if row.len() != raw.n {
            return Err(at(
                text,
                "A",
                format!("A row {} has {} entries but n = {}", j + 1, row.len(), raw.n),
            ));
        }
    }
    let check = |key: &str, len: usize| {
        if len == raw.n {
            Ok(())
        } else {
            Err(at(text, key, format!("{key} has {len} entries but n = {}", raw.n)))
        }
    };
    if raw.b.len() != raw.m {
        return Err(at(text, "b", format!("b has {} entries but m = {}", raw.b.len(), raw.m)));
    }
    if let Some(c) = &raw.c {
        check("c", c.len())?;
    }
    if let Some(u) = &raw.var_upper_bounds {
        check("var_upper_bounds", u.len())?;
    }
    let rows: Vec<Vec<BigInt>> = raw.a.into_iter().map(ints).collect();
    let a = IntMatrix::from_rows(rows).map_err(|e| at(text, "A", e.to_string()))?;
    let mut inst = Instance::new(raw.name, a, ints(raw.b)).map_err(|e| at(text, "b", e.to_string()))?;
    if let Some(c) = raw.c {
        inst = inst.with_objective(ints(c)).map_err(|e| at(text, "c", e.to_string()))?;
    }
    if let Some(u) = raw.var_upper_bounds {
        inst = inst
            .with_upper_bounds(ints(u))
            .map_err(|e| at(text, "var_upper_bounds", e.to_string()))?;
    }
    Ok(inst)
}

fn list(v: &[BigInt]) -> String {
    let items: Vec<String> = v.iter().map(BigInt::to_string).collect();
    format!("[{}]", items.join(", "))
}

/// Fields in the documented order, one matrix row per line.
pub fn instance_to_json(inst: &Instance) -> String {
    let rows: Vec<String> = (0..inst.m()).map(|j| format!("    {}", list(inst.a.row(j)))).collect();
    let mut s = format!(
        "{{\n  \"name\": {},\n  \"m\": {},\n  \"n\": {},\n  \"A\": [\n{}\n  ],\n  \"b\": {}",
        serde_json::to_string(&inst.name).expect("string"),
        inst.m(),
        inst.n(),
        rows.join(",\n"),
        list(&inst.b)
    );
    if let Some(c) = &inst.c {
        s += &format!(",\n  \"c\": {}", list(c));
    }
    if let Some(u) = &inst.var_upper_bounds {
        s += &format!(",\n  \"var_upper_bounds\": {}", list(u));
    }
    s += "\n}\n";
    s
}

pub fn read_instance(path: &std::path::Path) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}
