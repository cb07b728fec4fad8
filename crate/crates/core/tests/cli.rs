use std::path::Path;
use std::process::{Command, Output};

use ihull::cli::{parse_instance, Report};
use ihull::instances::{gen, FamilySpec};
use tempfile::TempDir;

fn ihull(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ihull"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_round_trips_through_a_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bd.json");
    let p = path.to_str().unwrap();
    let o = ihull(&["gen", "block-diagonal(2,3)", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let want = gen(&FamilySpec::BlockDiagonal { m: 2, d: 3 }).unwrap();
    assert_eq!(parse_instance(&text).unwrap(), want);

    let o = ihull(&["gen", "knapsack-powers(4)"]);
    assert_eq!(parse_instance(&stdout(&o)).unwrap(), gen(&FamilySpec::KnapsackPowers { d: 4 }).unwrap());
}

#[test]
fn enumerate_and_oracle_agree_on_the_json_report() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "k.json", r#"{"name": "k3", "m": 1, "n": 3, "A": [[1, 2, 4]], "b": [7], "c": [1, 2, 4]}"#);
    let mut reports = Vec::new();
    for cmd in ["enumerate", "oracle"] {
        let out = dir.path().join(format!("{cmd}.json"));
        let o = ihull(&[cmd, &inst, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let r: Report = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(r.status, "ok");
        let mut pts: Vec<String> = r
            .points
            .iter()
            .filter(|p| p.label.starts_with("vertex"))
            .map(|p| p.point.to_string())
            .collect();
        pts.sort();
        reports.push(pts);
    }
    assert_eq!(reports[0].len(), 4);
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn bounds_report_carries_tags() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "k.json", r#"{"name": "k3", "m": 1, "n": 3, "A": [[1, 2, 4]], "b": [7]}"#);
    let o = ihull(&["bounds", &inst]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for tag in ["Thm4", "Cor6", "Thm9", "Cor12", "Lem19", "Count.knapsack"] {
        assert!(text.contains(tag), "missing {tag} in\n{text}");
    }
    let o = ihull(&["ineq", "--m", "2", "--c", "1", "--delta", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Thm20.case3"));
}

#[test]
fn certify_prints_a_witness() {
    let dir = TempDir::new().unwrap();
    let inst = write(dir.path(), "t.json", r#"{"name": "t", "m": 1, "n": 2, "A": [[1, 1]], "b": [2]}"#);
    let o = ihull(&["certify", &inst, "--point", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("NOT a vertex"));
    let o = ihull(&["certify", &inst, "--point", "2,0"]);
    assert!(stdout(&o).contains("no kernel witness"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let broken = write(dir.path(), "bad.json", "{\n  \"name\": \"t\",\n  \"m\": 2,\n  \"n\": 2,\n  \"A\": [[1, 2]],\n  \"b\": [1, 1]\n}");
    let o = ihull(&["enumerate", &broken]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5"));

    assert_eq!(ihull(&["enumerate"]).status.code(), Some(2));
    assert_eq!(ihull(&["gen", "cube(3)"]).status.code(), Some(2));

    let parity = write(dir.path(), "p.json", r#"{"name": "p", "m": 1, "n": 1, "A": [[2]], "b": [1]}"#);
    let o = ihull(&["enumerate", &parity]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("infeasible"));

    let k = write(dir.path(), "k.json", r#"{"name": "k", "m": 1, "n": 4, "A": [[1, 2, 3, 5]], "b": [30]}"#);
    assert_eq!(ihull(&["enumerate", &k, "--max-boxes", "2"]).status.code(), Some(3));
    assert_eq!(ihull(&["oracle", &k, "--max-lattice-points", "3"]).status.code(), Some(3));
    assert_eq!(ihull(&["enumerate", &k, "--max-n", "3"]).status.code(), Some(3));

    let missing = dir.path().join("nope.json");
    assert_eq!(ihull(&["bounds", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn concentration_writes_the_tail_report() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("tail.json");
    let o = ihull(&[
        "concentration",
        "--n",
        "20",
        "--m",
        "3",
        "--samples",
        "10000",
        "--seed",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["samples"], 10000);
    assert_eq!(v["points"].as_array().unwrap().len(), 8);
    assert!(stdout(&o).contains("Thm4"));
}
