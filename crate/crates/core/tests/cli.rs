use std::fs;
use std::path::Path;
use std::process::Command;

use plasma_skin::cli::{read_sweep_csv, RowStatus, SelfcheckReport};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_plasma-skin"))
}

fn run(args: &[&str]) -> i32 {
    bin().args(args).output().expect("spawn").status.code().expect("exit code")
}

fn sweep_to(path: &Path, extra: &[&str]) -> i32 {
    let mut args = vec!["sweep", "--gamma-start", "0.5", "--gamma-end", "1.5", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn sweep_csv_parses_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert_eq!(sweep_to(&a, &["--points", "41"]), 0);
    assert_eq!(sweep_to(&b, &["--points", "41"]), 0);
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().next().unwrap(), "gamma,re_Z0,im_Z0,abs_Z0,arg_Z0,n_zeros,eta0_re,eta0_im,status");
    let rows = read_sweep_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 41);
    assert!(rows.windows(2).all(|w| w[0].gamma < w[1].gamma));
    for r in &rows {
        assert_eq!(r.status, RowStatus::Ok);
        let (re, im, abs) = (r.re_Z0.unwrap(), r.im_Z0.unwrap(), r.abs_Z0.unwrap());
        assert!((abs - re.hypot(im)).abs() <= 1e-14 * abs);
    }
}

#[test]
fn wide_sweep_has_a_sharp_peak_near_resonance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    assert_eq!(sweep_to(&out, &["--points", "401"]), 0);
    let rows = read_sweep_csv(fs::File::open(&out).unwrap()).unwrap();
    let m: Vec<f64> = rows.iter().map(|r| r.abs_Z0.unwrap()).collect();
    let maxima: Vec<usize> = (1..m.len() - 1).filter(|&i| m[i] > m[i - 1] && m[i] > m[i + 1]).collect();
    assert_eq!(maxima.len(), 1);
    let pk = maxima[0];
    assert!((rows[pk].gamma - 1.0).abs() < 0.01);
    let window: Vec<f64> = rows.iter().filter(|r| (r.gamma - rows[pk].gamma).abs() <= 0.05).map(|r| r.arg_Z0.unwrap()).collect();
    let swing = window.iter().cloned().fold(f64::MIN, f64::max) - window.iter().cloned().fold(f64::MAX, f64::min);
    assert!(swing > 1.0, "{swing}");
}

#[test]
fn json_sweep_and_two_point_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    assert_eq!(sweep_to(&out, &["--points", "2", "--format", "json", "--scale", "log"]), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["gamma"], 0.5);
    assert_eq!(rows[1]["status"], "ok");
}

#[test]
fn profile_starts_at_one_and_decays() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let path = out.to_str().unwrap();
    assert_eq!(run(&["profile", "--xmax", "20", "--points", "60", "--out", path]), 0);
    let mut rd = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["x", "re_e", "im_e", "abs_e"]);
    let rows: Vec<Vec<f64>> = rd.records().map(|r| r.unwrap().iter().map(|s| s.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 60);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][3] - 1.0).abs() < 1e-6);
    assert!(rows[59][3] < 1e-6);
    assert_eq!(run(&["profile", "--points", "2", "--out", path]), 0);
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 3);
}

#[test]
fn selfcheck_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    assert_eq!(run(&["selfcheck", "--out", out.to_str().unwrap()]), 0);
    let report: SelfcheckReport = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report.passed);
    assert_eq!(report.points.len(), 5);
    assert!(report.points.iter().all(|p| p.checks.len() == 7));

    let panel = dir.path().join("panel.json");
    fs::write(&panel, r#"[{"gamma": 0.5, "epsilon": 1e-3, "v_c": 1e3}]"#).unwrap();
    assert_eq!(run(&["selfcheck", "--panel", panel.to_str().unwrap(), "--out", out.to_str().unwrap()]), 1);
    let report: SelfcheckReport = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(!report.passed);
    assert!(report.points[0].error.is_some());

    fs::write(&panel, "[]").unwrap();
    assert_eq!(run(&["selfcheck", "--panel", panel.to_str().unwrap()]), 2);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["sweep", "--gamma-start", "1.5", "--gamma-end", "0.5"]), 2);
    assert_eq!(run(&["sweep", "--points", "1"]), 2);
    assert_eq!(run(&["sweep", "--scale", "cubic"]), 2);
    assert_eq!(run(&["profile", "--xmax", "-1"]), 2);
    assert_eq!(run(&["frobnicate"]), 2);
    assert_eq!(run(&["--help"]), 0);
}

#[test]
fn io_failure_exits_with_one() {
    assert_eq!(run(&["sweep", "--points", "2", "--out", "/nonexistent-dir/x.csv"]), 1);
}
