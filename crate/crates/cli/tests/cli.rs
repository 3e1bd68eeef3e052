use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn allpay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_allpay")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sweep_without_capacity_picks_full_admission() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = allpay(&[
        "sweep", "--n1", "20", "--capacity", "20", "--prior", "power:1", "--cost", "linear", "--prizes", "wta:1",
        "--out", path(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let body = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "n2,expected_highest,expected_total,expected_admitted_total,error");
    assert_eq!(lines.len(), 20);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(summary["argmax_highest"], 20);
    assert_eq!(summary["argmax_total"], 20);
}

#[test]
fn verify_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let o = allpay(&["verify", "--samples", "20000", "--seed", "7", "--out", path(p)]);
        assert!(o.status.success());
    }
    let (x, y) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(x, y);
    let v: serde_json::Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["total"].as_u64().unwrap() as usize, v["checks"].as_array().unwrap().len());
}

#[test]
fn figure_one_writes_six_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = allpay(&["figure", "fig1", "--out", path(dir.path())]);
    assert!(o.status.success());
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 6);
    assert!(names.iter().filter(|n| n.starts_with("fig1_pdf")).count() == 3);
    let pdf = fs::read_to_string(dir.path().join("fig1_pdf_a0.5.csv")).unwrap();
    assert!(pdf.starts_with("a_j,prior_pdf,posterior_pdf\n"));
}

#[test]
fn figure_presets_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for (fig, file) in [("fig4", "fig4_jump.csv"), ("fig5", "fig5_j.csv")] {
        let o = allpay(&["figure", fig, "--out", path(dir.path())]);
        assert!(o.status.success());
        let first = fs::read(dir.path().join(file)).unwrap();
        allpay(&["figure", fig, "--out", path(dir.path())]);
        assert_eq!(first, fs::read(dir.path().join(file)).unwrap());
    }
}

#[test]
fn two_stage_reports_nonzero_slope() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.csv");
    let o = allpay(&["two-stage", "--n1", "4", "--n2", "2", "--a", "0.5", "--points", "11", "--out", path(&curve)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&curve).unwrap().lines().count(), 12);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(curve.with_extension("json")).unwrap()).unwrap();
    assert_eq!(v["nonzero"], true);
    assert!(v["slope"].as_f64().unwrap().abs() > 5.0 * v["noise_floor"].as_f64().unwrap());
}

#[test]
fn equilibrium_to_stdout_as_json() {
    let o = allpay(&["equilibrium", "--n1", "5", "--n2", "5", "--grid", "4", "--format", "json"]);
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        let (b, o) = (r["b_restricted"].as_f64().unwrap(), r["b_one_round"].as_f64().unwrap());
        assert!((b - o).abs() < 1e-9);
    }
}

#[test]
fn beliefs_csv_header() {
    let o = allpay(&["beliefs", "--n1", "5", "--n2", "2", "--a-i", "0.3", "--grid", "10"]);
    assert!(o.status.success());
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.starts_with("a_j,prior_pdf,posterior_pdf,prior_cdf,posterior_cdf\n"));
    assert_eq!(s.lines().count(), 10);
}

#[test]
fn exit_codes() {
    assert_eq!(allpay(&["equilibrium", "--n1", "5", "--n2", "6"]).status.code(), Some(2));
    assert_eq!(allpay(&["equilibrium", "--n1", "5", "--n2", "2", "--prior", "beta:1"]).status.code(), Some(2));
    assert_eq!(allpay(&["equilibrium", "--n1", "5", "--n2", "2", "--bogus", "1"]).status.code(), Some(2));
    assert_eq!(allpay(&["two-stage", "--n1", "4", "--n2", "2", "--prizes", "1,1"]).status.code(), Some(2));
    let o = allpay(&["equilibrium", "--n1", "6", "--n2", "3", "--prizes", "1,1,1", "--grid", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}
