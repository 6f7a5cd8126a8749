use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn npart(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_npart"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(',')))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn gen_is_deterministic_and_in_range() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for out in [&a, &b] {
        let o = npart(&[
            "gen",
            "--bits",
            "150",
            "--n",
            "100",
            "--seed",
            "5",
            "--out",
            p(out),
        ]);
        assert!(o.status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let limit = two_pow_150();
    let values: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(values.len(), 100);
    for v in values {
        assert!(v.chars().all(|c| c.is_ascii_digit()));
        assert!(v.len() < limit.len() || (v.len() == limit.len() && v < limit.as_str()));
    }
}

/// 2^150 in decimal.
fn two_pow_150() -> String {
    let mut digits = vec![1u32];
    for _ in 0..150 {
        let mut carry = 0;
        for d in digits.iter_mut() {
            let x = *d * 2 + carry;
            *d = x % 10;
            carry = x / 10;
        }
        if carry > 0 {
            digits.push(carry);
        }
    }
    digits
        .iter()
        .rev()
        .map(|d| char::from(b'0' + *d as u8))
        .collect()
}

#[test]
fn gen_rejects_empty_instance() {
    let o = npart(&["gen", "--bits", "8", "--n", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn heuristics() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "five.txt", "8\n7\n6\n5\n4\n");
    let o = npart(&["heuristic", "--alg", "bldm", p(&f)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "delta"), "2");
    assert_eq!(field(&text, "card_diff").parse::<i64>().unwrap().abs(), 1);
    assert_eq!(field(&text, "signs").len(), 5);

    let one = write(&dir, "one.txt", "5\n");
    let o = npart(&["heuristic", "--alg", "ldm", p(&one)]);
    assert_eq!(field(&stdout(&o), "delta"), "5");

    let o = npart(&[
        "heuristic",
        "--alg",
        "ldm",
        p(&dir.path().join("missing.txt")),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());

    let bad = write(&dir, "bad.txt", "3\n-4\n");
    let o = npart(&["heuristic", "--alg", "pdm", p(&bad)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn solve_streams_events_then_summary() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "five.txt", "8\n7\n6\n5\n4\n");
    let o = npart(&["solve", "--mode", "cbldm", "--target", "balanced", p(&f)]);
    assert!(o.status.success());
    let text = stdout(&o);
    let events: Vec<&str> = text.lines().take_while(|l| *l != "summary").collect();
    assert!(!events.is_empty());
    assert!(events.iter().all(|l| l.starts_with("event,")));
    assert_eq!(events[0], "event,5,2");
    assert_eq!(field(&text, "status"), "PerfectFound");
    assert_eq!(field(&text, "delta"), "0");

    let o = npart(&["solve", "--mode", "cbldm", "--target", "5", p(&f)]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "delta"), "30");

    let o = npart(&["solve", "--mode", "cbldm", "--target", "2", p(&f)]);
    assert_eq!(o.status.code(), Some(3));

    let o = npart(&["solve", "--mode", "ckk", p(&f)]);
    assert_eq!(field(&stdout(&o), "delta"), "0");
    assert_eq!(field(&stdout(&o), "proven_optimal"), "true");

    let o = npart(&["solve", "--mode", "ckk", "--target", "1", p(&f)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_budget_without_solution() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "five.txt", "8\n7\n6\n5\n4\n");
    let o = npart(&["solve", "--max-nodes", "3", p(&f)]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(field(&stdout(&o), "status"), "NodeBudgetExhausted");
    let o = npart(&["solve", "--max-nodes", "5", p(&f)]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "delta"), "2");
}

#[test]
fn sweep_shapes() {
    let o = npart(&[
        "sweep",
        "--bits",
        "10",
        "--n-values",
        "6,9",
        "--instances",
        "2",
        "--seed",
        "3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,mean_nodes,median_nodes,fraction_perfect,mean_delta"
    );
    assert_eq!(lines.len(), 3);
    let again = npart(&[
        "sweep",
        "--bits",
        "10",
        "--n-values",
        "6,9",
        "--instances",
        "2",
        "--seed",
        "3",
        "--workers",
        "2",
    ]);
    assert_eq!(stdout(&again), text);

    let o = npart(&[
        "sweep",
        "--kind",
        "bldm-scaling",
        "--n-values",
        "8-10",
        "--instances",
        "3",
        "--format",
        "json-lines",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    let row: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(row["n"], 8);

    let o = npart(&["sweep", "--n-values", "5", "--target", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let o = npart(&["sweep", "--n-values", "9-5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = npart(&["sweep", "--n-values", "5", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("rows.csv");
    let o = npart(&[
        "sweep",
        "--bits",
        "8",
        "--n-values",
        "4-6",
        "--instances",
        "3",
        "--out",
        p(&out),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 4);
}

#[test]
fn trace_ratios_increase() {
    let o = npart(&[
        "trace",
        "--bits",
        "150",
        "--n",
        "100",
        "--seed",
        "1",
        "--max-nodes",
        "10000",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("nodes,ratio"));
    let rows: Vec<(u64, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows[0], (100, 1.0));
    assert!(rows.windows(2).all(|w| w[1].1 > w[0].1 && w[1].0 > w[0].0));

    let dir = TempDir::new().unwrap();
    let f = write(&dir, "five.txt", "8\n7\n6\n5\n4\n");
    let o = npart(&["trace", p(&f)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("nodes,ratio\n5,1"));
    let o = npart(&["trace", "--bits", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn theory_values() {
    let o = npart(&["theory", "--bits", "25", "--balanced"]);
    assert!(o.status.success());
    let nc: f64 = field(&stdout(&o), "critical_n").parse().unwrap();
    assert!((nc - 29.7).abs() < 0.1);

    let o = npart(&[
        "theory",
        "--bits",
        "15",
        "--balanced",
        "--n",
        "20",
        "--format",
        "json-lines",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let nc: f64 = v["critical_n"].as_str().unwrap().parse().unwrap();
    assert!((nc - 19.1).abs() < 0.05);
    assert!(v["expected_optimum"].is_string());
    assert!(v["bldm_prediction_unit"].is_string());
}
