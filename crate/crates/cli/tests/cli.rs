use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn geolab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geolab")).args(args).arg("--out").arg(out).output().expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn period_table_matches_published_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = geolab(&["geo", "period-table", "--beta", "0.999"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(dir.path(), "period_table.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("alpha,P,pi_sqrt2_over_sqrt_alpha"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 10);
    assert!((rows[0][1] - 14.0792).abs() < 5e-3 && (rows[9][1] - 4.44622).abs() < 5e-3);
    assert!((rows[4][2] - 2.0 * std::f64::consts::PI).abs() < 1e-12);

    let m: serde_json::Value = serde_json::from_str(&read(dir.path(), "manifest.json")).unwrap();
    assert_eq!(m["experiment"], "geo period-table");
    assert_eq!(m["parameters"]["beta"], 0.999);
    assert_eq!(m["files"][0], "period_table.csv");
    assert!(m["wall_time_seconds"].is_f64() && m["library_version"].is_string());
}

#[test]
fn helix_stability_starts_at_published_value() {
    let dir = tempfile::tempdir().unwrap();
    let o = geolab(&["torsion", "stability", "--amplitude", "0.01", "--T", "2"], dir.path());
    assert!(o.status.success());
    let csv = read(dir.path(), "stability.csv");
    let first: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 0.0177245).abs() < 1e-6);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["geo", "boundary", "--alpha", "0.5", "--x0-min", "0.6", "--x0-max", "0.9", "--x0-step", "0.05"];
    assert!(geolab(&args, a.path()).status.success());
    let single = Command::new(env!("CARGO_BIN_EXE_geolab"))
        .args(args)
        .arg("--out")
        .arg(b.path())
        .env("GEOFLOW_THREADS", "1")
        .output()
        .unwrap();
    assert!(single.status.success());
    assert_eq!(read(a.path(), "boundary.csv"), read(b.path(), "boundary.csv"));
}

#[test]
fn json_format() {
    let dir = tempfile::tempdir().unwrap();
    let o = geolab(&["--format", "json", "geo", "curvature", "--alpha", "0.5"], dir.path());
    assert!(o.status.success());
    let rows: serde_json::Value = serde_json::from_str(&read(dir.path(), "curvature.json")).unwrap();
    assert_eq!(rows[0]["plane"], "XY");
    assert_eq!(rows[0]["sectional"], 0.5);
    assert_eq!(rows[0]["mean"], 0.25);
    let m: serde_json::Value = serde_json::from_str(&read(dir.path(), "manifest.json")).unwrap();
    assert_eq!(m["summary"]["scalar"], -1.5);
}

#[test]
fn circle_run_writes_frames_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let o = geolab(&["csf", "run", "--curve", "circle", "--n", "128", "--T", "0.05", "--frame-dt", "0.01"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let frames = read(dir.path(), "frames.csv");
    assert_eq!(frames.lines().next(), Some("t,point_index,x,y"));
    assert_eq!(frames.lines().count(), 1 + 6 * 128);
    let diag = read(dir.path(), "diagnostics.csv");
    let last: Vec<f64> = diag.lines().last().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!((last[0] - 0.05).abs() < 1e-12);
    assert!((last[1] - (std::f64::consts::PI - 0.1 * std::f64::consts::PI)).abs() < 2e-3);
}

#[test]
fn reconstructed_helix_closes_up_to_translation() {
    let dir = tempfile::tempdir().unwrap();
    let o = geolab(&["torsion", "reconstruct", "--profile", "constant", "--base", "1", "--n", "32"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m: serde_json::Value = serde_json::from_str(&read(dir.path(), "manifest.json")).unwrap();
    assert!(m["summary"]["max_frame_drift"].as_f64().unwrap() < 1e-8);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(geolab(&["geo", "nonsense"], dir.path()).status.code(), Some(2));
    assert_eq!(geolab(&["geo", "period", "--alpha", "x"], dir.path()).status.code(), Some(2));
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_geolab"))
        .args(["geo", "curvature"])
        .env("GEOFLOW_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_one_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let o = geolab(&["geo", "period", "--alpha", "0.3", "--method", "closed"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("closed form"));
    assert!(!dir.path().join("manifest.json").exists());
}

#[test]
fn verify_geo_passes_and_reports_measurements() {
    let dir = tempfile::tempdir().unwrap();
    let o = geolab(&["verify", "geo"], dir.path());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{stdout}");
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 10);
    assert!(lines[..9].iter().all(|l| l.contains(" PASS ")));
    assert!(lines[9].starts_with("[19] MEASURED"));
}
