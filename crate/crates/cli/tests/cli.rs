use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_helmstab");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn run_in(out: &Path, cmd: &str, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p
}

fn error_json(o: &Output) -> Value {
    serde_json::from_slice(o.stderr.trim_ascii()).unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().map(|l| l.split(',').map(String::from).collect::<Vec<_>>());
    (lines.next().unwrap(), lines.collect())
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let (head, rows) = csv_rows(path);
    let i = head.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_slice(&fs::read(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn forward_writes_dataset_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(tmp.path(), "forward", &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(tmp.path());
    assert_eq!(m["tool"], "helmstab");
    assert_eq!(m["command"], "forward");
    assert_eq!(m["seed"], 20240917);
    assert!(m["version"].as_str().unwrap().starts_with('v'));
    for a in m["artifacts"].as_array().unwrap() {
        let bytes = fs::read(tmp.path().join(a["file"].as_str().unwrap())).unwrap();
        assert_eq!(a["bytes"], bytes.len() as u64);
        assert_eq!(a["sha256"], helmstab::io::sha256_hex(&bytes));
    }
    let (head, rows) = csv_rows(&tmp.path().join("data.csv"));
    assert_eq!(head, ["omega", "node_index", "re_u", "im_u", "re_ux", "im_ux", "re_uy", "im_uy"]);
    assert_eq!(rows.len(), 64 * 128);
    let stdout: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(stdout["command"], "forward");
}

#[test]
fn unknown_config_key_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "bad.json", r#"{"grid": {"k_max": 4, "kmax": 5}}"#);
    let o = run_in(&tmp.path().join("out"), "forward", &["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = error_json(&o);
    assert_eq!(e["error"]["kind"], "config");
    assert_eq!(e["exit_code"], 2);
    assert!(e["error"]["message"].as_str().unwrap().contains("kmax"));
}

#[test]
fn coarse_grid_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", r#"{"grid": {"points_per_unit": 4}}"#);
    let o = run_in(tmp.path(), "forward", &["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn source_outside_domain_exits_four() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "g.json",
        r#"{"scene": {"domain": {"kind": "disk", "radius": 1.0, "nodes": 64}, "f0": [{"center": [1.5, 0.0], "radius": 0.2, "amplitude": 1.0}]}}"#,
    );
    let o = run_in(tmp.path(), "forward", &["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_json(&o)["error"]["kind"], "geometry");
}

#[test]
fn zero_source_gives_zero_data() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "z.json",
        r#"{"scene": {"domain": {"kind": "disk", "radius": 1.0, "nodes": 32}}, "grid": {"k_max": 2}, "noise": {"level": 0}}"#,
    );
    let o = run_in(tmp.path(), "forward", &["--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = csv_rows(&tmp.path().join("data.csv"));
    assert_eq!(rows.len(), 16 * 32);
    for r in rows {
        assert!(r[2..].iter().all(|v| v.parse::<f64>().unwrap() == 0.0));
    }
}

#[test]
fn bounds_margins_are_nonnegative() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(tmp.path(), "bounds", &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let margins = column(&tmp.path().join("bounds.csv"), "margin");
    assert_eq!(margins.len(), 4 * 2 * 3);
    assert!(margins.iter().all(|m| *m >= 0.0));
    let kt = column(&tmp.path().join("tail.csv"), "k_times_tail");
    assert!(kt.windows(2).all(|w| w[1] <= 1.1 * w[0]));
}

#[test]
fn reconstruction_from_saved_dataset_matches_in_process_data() {
    let tmp = tempfile::tempdir().unwrap();
    let (fwd, direct, loaded) = (tmp.path().join("fwd"), tmp.path().join("direct"), tmp.path().join("loaded"));
    assert!(run_in(&fwd, "forward", &[]).status.success());
    let cfg = write_config(
        tmp.path(),
        "d.json",
        &format!(
            r#"{{"reconstruct": {{"data": {{"csv": {:?}, "sidecar": {:?}}}}}}}"#,
            fwd.join("data.csv").to_str().unwrap(),
            fwd.join("data.json").to_str().unwrap()
        ),
    );
    assert!(run_in(&direct, "reconstruct", &[]).status.success());
    let o = run_in(&loaded, "reconstruct", &["--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["coefficients.csv", "fields.csv"] {
        assert_eq!(fs::read(direct.join(f)).unwrap(), fs::read(loaded.join(f)).unwrap(), "{f}");
    }
    let m = manifest(&loaded);
    assert_eq!(m["inputs"].as_array().unwrap().len(), 2);
    let summary: Value = serde_json::from_slice(&fs::read(loaded.join("reconstruction.json")).unwrap()).unwrap();
    assert_eq!(summary["data"], "file");
    assert_eq!(summary["status"], "converged");
}

#[test]
fn manifest_config_reproduces_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(run_in(&a, "reconstruct", &["--seed", "99", "--inverse-crime"]).status.success());
    let m = manifest(&a);
    assert_eq!(m["config"]["reconstruct"]["inverse_crime"], true);
    assert_eq!(m["config"]["noise"]["seed"], 99);
    let cfg = write_config(tmp.path(), "echo.json", &m["config"].to_string());
    assert!(run_in(&b, "reconstruct", &["--config", cfg.to_str().unwrap()]).status.success());
    for f in ["coefficients.csv", "fields.csv", "reconstruction.json", "manifest.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn seed_changes_noise_only_through_the_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let dirs: Vec<PathBuf> = ["s1", "s1b", "s2"].iter().map(|d| tmp.path().join(d)).collect();
    assert!(run_in(&dirs[0], "forward", &["--seed", "1"]).status.success());
    assert!(run_in(&dirs[1], "forward", &["--seed", "1", "--threads", "1"]).status.success());
    assert!(run_in(&dirs[2], "forward", &["--seed", "2"]).status.success());
    let read = |d: &Path| fs::read(d.join("data.csv")).unwrap();
    assert_eq!(read(&dirs[0]), read(&dirs[1]));
    assert_ne!(read(&dirs[0]), read(&dirs[2]));
    assert_eq!(manifest(&dirs[2])["seed"], 2);
}

#[test]
fn wave_check_small_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "w.json",
        r#"{"wave": {"nodes": [0, 64], "k_values": [2.0], "refine": false, "export_traces": true, "parseval_nodes": 16, "omega_max": 24}}"#,
    );
    let o = run_in(tmp.path(), "wave-check", &["--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dev = column(&tmp.path().join("fourier.csv"), "rel_deviation");
    assert_eq!(dev.len(), 2);
    assert!(dev.iter().all(|d| *d < 1e-3));
    let (head, rows) = csv_rows(&tmp.path().join("traces.csv"));
    assert_eq!(head, ["t", "node_index", "U", "dU_dt"]);
    assert!(!rows.is_empty());
}

#[test]
fn wave_check_rejects_bad_node_index() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "w.json", r#"{"wave": {"nodes": [500]}}"#);
    let o = run_in(tmp.path(), "wave-check", &["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_experiment_improves_with_k() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "s.json", r#"{"experiment": {"k_values": [2, 8]}}"#);
    let o = run_in(tmp.path(), "sweep-experiment", &["--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let path = tmp.path().join("stability.csv");
    let (head, _) = csv_rows(&path);
    assert!(head.contains(&"err_f0_H1".to_string()) && head.contains(&"err_f1_L2".to_string()));
    let h1 = column(&path, "err_f0_H1");
    let l2 = column(&path, "err_f1_L2");
    assert!(h1[1].powi(2) + l2[1].powi(2) < h1[0].powi(2) + l2[0].powi(2));
}

#[test]
fn unknown_subcommand_fails() {
    let o = run(&["invert"]);
    assert!(!o.status.success());
}
