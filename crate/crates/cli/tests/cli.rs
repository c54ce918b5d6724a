use std::path::Path;
use std::process::{Command, Output};

fn ringlll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringlll"))
        .args(args)
        .env_remove("RINGLLL_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn bounds_without_adversaries_are_one() {
    let o = ringlll(&["bounds", "--alpha", "0.2,0.6", "--gamma", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(lines.len(), 8);
    for l in lines {
        assert_eq!(l.split(',').nth(5), Some("1.00000"), "{l}");
    }
}

#[test]
fn dynamic_uninformed_bound_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = ringlll(&["bounds", "--alpha", "0.5", "--gamma", "0.1:1:0.3", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    let rows = csv_rows(&out);
    let du: Vec<_> = rows.iter().filter(|r| r[0] == "DU").collect();
    assert_eq!(du.len(), 4);
    assert!(du.iter().all(|r| r[5] == "0.666667"));
    let meta = std::fs::read_to_string(dir.path().join("b.csv.meta")).unwrap();
    assert!(meta.contains("command=bounds"));
    assert!(meta.contains("rng="));
}

#[test]
fn simulate_writes_row_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = ringlll(&[
        "simulate", "--model", "DU", "--n", "10", "--alpha", "0.5", "--gamma", "0.5", "--steps", "500",
        "--reps", "3", "--seed", "9", "--output", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].last().unwrap(), "ok");
    assert_eq!(rows[0][15].split(';').count(), 3);
    assert!(dir.path().join("s.csv.meta").exists());

    // same seed, same numbers
    let again = dir.path().join("t.csv");
    ringlll(&[
        "simulate", "--model", "DU", "--n", "10", "--alpha", "0.5", "--gamma", "0.5", "--steps", "500",
        "--reps", "3", "--seed", "9", "--workers", "1", "--output", again.to_str().unwrap(),
    ]);
    assert_eq!(csv_rows(&again), rows);
}

#[test]
fn sweep_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(&cfg, "models = [\"SU\", \"DU\"]\nn = 8\nalpha = [0.3, 0.6]\ngamma = 0.5\nsteps = 200\nreps = 2\n").unwrap();
    let out = dir.path().join("out.csv");
    let args = ["sweep", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()];
    assert!(ringlll(&args).status.success());
    let first = csv_rows(&out);
    assert_eq!(first.len(), 4);

    let o = ringlll(&args);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("0 rows written, 4 already present"), "{}", stdout(&o));
    assert_eq!(csv_rows(&out), first);
}

#[test]
fn sweep_recomputes_truncated_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(&cfg, "kind = \"bounds\"\nmodels = [\"SI\", \"DI\"]\nalpha = 0.5\ngamma = [0.2, 0.4]\n").unwrap();
    let out = dir.path().join("out.csv");
    let args = ["sweep", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()];
    assert!(ringlll(&args).status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    // simulate a crash midway through the last row
    let last = lines.pop().unwrap();
    let cut = format!("{}\n{}", lines.join("\n"), &last[..last.len() / 2]);
    std::fs::write(&out, cut).unwrap();

    let o = ringlll(&args);
    assert!(stdout(&o).starts_with("1 rows written, 3 already present"), "{}", stdout(&o));
}

#[test]
fn empty_sweep_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(&cfg, "models = []\nn = [10]\nalpha = [0.3]\ngamma = 1.0\n").unwrap();
    let out = dir.path().join("out.csv");
    let o = ringlll(&["sweep", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(csv_rows(&out).is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("model,n,k,"));
}

#[test]
fn malformed_sweep_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(&cfg, "models = [\"SI\"]\nalpah = [0.3]\ngamma = 1.0\n").unwrap();
    let out = dir.path().join("out.csv");
    let o = ringlll(&["sweep", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("alpah"), "{err}");
}

#[test]
fn exit_codes() {
    let bad_alpha = ringlll(&["simulate", "--model", "DU", "--n", "10", "--alpha", "1.5", "--gamma", "0.5"]);
    assert_eq!(bad_alpha.status.code(), Some(2));

    let short = ringlll(&[
        "simulate", "--model", "DI", "--n", "14", "--alpha", "0.5", "--gamma", "0.2", "--target", "x2y5",
    ]);
    assert_eq!(short.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&short.stderr).contains("short by 3"));

    let big = ringlll(&["oracle", "--model", "none", "--n", "20", "--alpha", "0.3"]);
    assert_eq!(big.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&big.stderr).contains("reduce --n"));
}

#[test]
fn oracle_without_adversaries_selects_all_x() {
    let o = ringlll(&["oracle", "--model", "none", "--n", "8", "--alpha", "0.3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("stochastically stable states: 1"));
    assert!(text.contains("  xxxxxxxx  efficiency 1.00000"));
}

#[test]
fn oracle_aggressive_target_and_dropped_defender() {
    let base = ["oracle", "--model", "DI", "--n", "10", "--alpha", "0.3", "--gamma", "1", "--target", "x2y8"];
    let o = ringlll(&base);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("stochastically stable states: 1"));
    assert!(text.contains("  xxyyyyyyyy  "));

    let mut weak = base.to_vec();
    weak.extend(["--drop-defender", "0"]);
    let o = ringlll(&weak);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("xxyyyyyyyy"));
}
