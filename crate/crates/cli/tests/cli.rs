use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn trustcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trustcalc"))
        .args(args)
        .env_remove("TRUSTCALC_JOBS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn synthetic(dir: &TempDir) -> String {
    let p = dir.path().join("syn.tsv");
    let p = p.to_str().unwrap().to_string();
    let out = trustcalc(&["--seed", "3", "generate", "--nodes", "80", "--degree", "5", "--output", &p]);
    assert!(out.status.success());
    p
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn assess_series_fixture() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.tsv", "a\tb\t5\t3\t2\nb\tc\t4\t4\t2\n");
    let v = json(&trustcalc(&[
        "assess", "--graph", &g, "--from", "a", "--to", "c", "--depth", "3", "--algorithm", "3vsl",
    ]));
    assert_eq!(floats(&v["opinion"]), vec![2.0, 2.0, 6.0]);
    assert!((v["expected_belief"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn assess_trace_lists_invocations() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.tsv", "a\tb\t5\t3\t2\nb\tc\t4\t4\t2\n");
    let v = json(&trustcalc(&["assess", "--graph", &g, "--from", "a", "--to", "c", "--trace"]));
    assert_eq!(v["trace"]["expression"], "Δ(ω[a→b], ω[b→c])");
    assert_eq!(v["trace"]["invocations"].as_array().unwrap().len(), 2);
}

#[test]
fn assess_other_algorithms() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.tsv", "a\tb\t5\t3\t2\nb\tc\t4\t4\t2\n");
    let sl = json(&trustcalc(&["assess", "--graph", &g, "--from", "a", "--to", "c", "--algorithm", "sl"]));
    assert_eq!(floats(&sl["opinion"]).len(), 2);
    let tt = json(&trustcalc(&["assess", "--graph", &g, "--from", "a", "--to", "c", "--algorithm", "tt"]));
    assert!((tt["value"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    let et = json(&trustcalc(&["assess", "--graph", &g, "--from", "a", "--to", "c", "--algorithm", "et"]));
    assert!(et["score"].as_f64().unwrap() > 0.0);
}

#[test]
fn stats_on_empty_file() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "empty.tsv", "");
    let v = json(&trustcalc(&["stats", "--graph", &g]));
    assert_eq!(v["nodes"], 0);
    assert_eq!(v["edges"], 0);
}

#[test]
fn stats_counts_levels() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.tsv", "# header\na\tb\tx\nb\tc\ty\nc\ta\tx\n");
    let v = json(&trustcalc(&["stats", "--graph", &g]));
    assert_eq!(v["nodes"], 3);
    assert_eq!(v["edges"], 3);
    assert_eq!(v["level_counts"]["x"], 2);
}

#[test]
fn sweep_writes_one_report_per_combination() {
    let dir = TempDir::new().unwrap();
    let g = synthetic(&dir);
    let out_dir = dir.path().join("sweep");
    let v = json(&trustcalc(&[
        "sweep", "--graph", &g, "--style", "advogato", "--pairs", "20", "--out-dir",
        out_dir.to_str().unwrap(),
    ]));
    assert_eq!(v.as_array().unwrap().len(), 25);
    let files = fs::read_dir(&out_dir).unwrap().count();
    assert_eq!(files, 25);
}

#[test]
fn reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let g = synthetic(&dir);
    let run = |jobs: &str| {
        let out = trustcalc(&[
            "--seed", "11", "--jobs", jobs, "experiment-f1", "--graph", &g, "--style", "advogato", "--pairs",
            "40",
        ]);
        assert!(out.status.success());
        out.stdout
    };
    let first = run("1");
    assert_eq!(first, run("1"));
    assert_eq!(first, run("3"));
}

#[test]
fn ranking_report_and_csv() {
    let dir = TempDir::new().unwrap();
    let g = synthetic(&dir);
    let csv = dir.path().join("tau.csv");
    let v = json(&trustcalc(&[
        "experiment-rank", "--graph", &g, "--style", "advogato", "--seeds", "5", "--algorithm", "tr",
        "--tau-csv", csv.to_str().unwrap(),
    ]));
    let taus = floats(&v["tau"]);
    assert!(taus.iter().all(|t| (-1.0..=1.0).contains(t)));
    let lines = fs::read_to_string(&csv).unwrap().lines().count();
    assert_eq!(lines, taus.len() + 1);
}

#[test]
fn f1_rejects_relative_algorithms() {
    let dir = TempDir::new().unwrap();
    let g = synthetic(&dir);
    let out = trustcalc(&["experiment-f1", "--graph", &g, "--style", "advogato", "--algorithm", "et"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn convert_round_trips_through_assess() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.tsv", "a\tb\tmaster\nb\tc\tjourneyer\nc\td\tapprentice\nd\ta\tobserver\n");
    let out = dir.path().join("op.tsv");
    let out_s = out.to_str().unwrap();
    json(&trustcalc(&["convert", "--graph", &g, "--style", "advogato", "--output", out_s]));
    let direct = json(&trustcalc(&["assess", "--graph", &g, "--style", "advogato", "--from", "a", "--to", "c"]));
    let converted = json(&trustcalc(&["assess", "--graph", out_s, "--from", "a", "--to", "c"]));
    for (x, y) in floats(&direct["opinion"]).iter().zip(floats(&converted["opinion"])) {
        assert!((x - y).abs() < 1e-9 * x.abs().max(1.0));
    }
}

fn code(args: &[&str]) -> Option<i32> {
    trustcalc(args).status.code()
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let levels = write(&dir, "l.tsv", "a\tb\tmaster\nb\tc\tjourneyer\nc\td\tapprentice\nd\ta\tobserver\n");
    let sparse = write(&dir, "s.tsv", "a\tb\tmaster\n");
    let broken = write(&dir, "b.tsv", "a\tb\n");
    let bad_level = write(&dir, "x.tsv", "a\tb\tWizard\n");
    let missing = dir.path().join("missing.tsv");
    let missing = missing.to_str().unwrap();

    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["--version"]), Some(0));
    assert_eq!(code(&["stats", "--bogus"]), Some(1));
    assert_eq!(code(&["assess", "--graph", &levels, "--from", "a", "--to", "b"]), Some(1));
    assert_eq!(
        code(&["assess", "--graph", &levels, "--style", "advogato", "--from", "a", "--to", "a"]),
        Some(1)
    );
    assert_eq!(
        code(&["assess", "--graph", &levels, "--style", "advogato", "--from", "a", "--to", "b", "--depth", "0"]),
        Some(1)
    );
    assert_eq!(code(&["stats", "--graph", missing]), Some(2));
    assert_eq!(
        code(&["assess", "--graph", &sparse, "--style", "advogato", "--from", "a", "--to", "b"]),
        Some(2)
    );
    assert_eq!(code(&["stats", "--graph", &broken]), Some(2));
    assert_eq!(
        code(&["assess", "--graph", &bad_level, "--style", "advogato", "--from", "a", "--to", "b"]),
        Some(2)
    );
    assert_eq!(
        code(&["assess", "--graph", &levels, "--style", "advogato", "--from", "a", "--to", "zz"]),
        Some(2)
    );
}

#[test]
fn jobs_env_var_must_be_numeric() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "empty.tsv", "");
    let out = Command::new(env!("CARGO_BIN_EXE_trustcalc"))
        .args(["stats", "--graph", &g])
        .env("TRUSTCALC_JOBS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(Path::new(&g).exists());
}
