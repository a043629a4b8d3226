use std::path::Path;
use std::process::{Command, Output};

fn biflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biflab")).args(args).output().expect("run biflab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

fn floats(csv: &str, name: &str) -> Vec<f64> {
    column(csv, name).iter().map(|v| v.parse().unwrap()).collect()
}

fn write_model(dir: &Path, json: &str) -> String {
    let path = dir.join("model.json");
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn lplus_samples_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lplus.csv");
    let out = biflab(&["curves", "--curve", "Lplus", "--nu", "+1", "--m2", "-3:0:50", "-o", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let m2 = floats(&text, "m2");
    let m1 = floats(&text, "m1");
    // two branches M1 = +-sqrt(4/27 (2 - M2)^3) per sample
    assert_eq!(m2.len(), 100);
    for (a, b) in m1.iter().zip(&m2) {
        assert!((a * a - 4.0 / 27.0 * (2.0 - b).powi(3)).abs() < 1e-12);
    }
}

#[test]
fn nontwist_roots_at_zero() {
    let out = biflab(&["curves", "--curve", "nontwist", "--sign", "-", "--m1", "0"]);
    assert!(out.status.success());
    assert_eq!(floats(&stdout(&out), "m2"), vec![-1.0, 2.0, 3.2]);
}

#[test]
fn tangency_curve_leading_order() {
    let out = biflab(&["curves", "--curve", "H0", "--d", "1", "--mu2", "-3"]);
    assert!(out.status.success());
    assert_eq!(floats(&stdout(&out), "mu1"), vec![-2.0, 2.0]);
}

#[test]
fn bad_curve_flags_exit_2() {
    let out = biflab(&["curves", "--curve", "Lphi", "--nu", "+1", "--m2", "-1:0:5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("phi"));
    let out = biflab(&["curves", "--curve", "nosuch", "--nu", "+1", "--m2", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = biflab(&["curves", "--curve", "Lplus", "--nu", "2", "--m2", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_finds_period_doubling() {
    let out = biflab(&["scan", "--nu", "+1", "--m1", "0", "--m2", "-3:-1:41", "--period", "1"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    let hits: Vec<f64> = floats(&csv, "value")
        .into_iter()
        .zip(column(&csv, "kind"))
        .filter(|(_, k)| k == "period-doubling")
        .map(|(v, _)| v)
        .collect();
    assert!(hits.iter().any(|v| (v + 2.0).abs() < 1e-8), "{csv}");
}

#[test]
fn symmetric_scan_has_two_pitchforks() {
    let out = biflab(&["scan", "--nu", "+1", "--m2", "-0.5", "--m1", "0.65:0.8:31", "--period", "4", "--symmetric"]);
    assert!(out.status.success());
    let kinds = column(&stdout(&out), "kind");
    assert!(kinds.iter().filter(|k| *k == "pitchfork").count() >= 2);
}

#[test]
fn empty_scan_is_header_only() {
    let out = biflab(&["scan", "--nu", "+1", "--m1", "0", "--m2", "-3:-1:0", "--period", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn scan_rejects_two_ranges() {
    let out = biflab(&["scan", "--nu", "+1", "--m1", "0:1:5", "--m2", "-3:-1:5", "--period", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exact_rescaling_table() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(
        dir.path(),
        r#"{"lambda": 0.5, "beta1": 0, "mu1": 1e-4, "mu2": -2e-4, "b": 1, "d": 1, "x_plus": 1, "y_minus": 1}"#,
    );
    let out = biflab(&["rescale", "--model", &model, "--k", "2:12"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let errs = floats(&stdout(&out), "sup_error");
    assert_eq!(errs.len(), 11);
    assert!(errs.iter().all(|e| *e < 1e-12), "{errs:?}");
}

#[test]
fn remainder_decays_in_k() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), r#"{"lambda": 0.5, "beta1": 0.3, "b": 1, "d": 1, "x_plus": 1, "y_minus": 1}"#);
    let out = biflab(&["rescale", "--model", &model, "--k", "8:20", "--m1", "0.3", "--m2", "-0.5"]);
    assert!(out.status.success());
    let errs = floats(&stdout(&out), "sup_error");
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn model_validation_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), r#"{"lambda": 1.5, "b": 1, "d": 1, "x_plus": 1, "y_minus": 1}"#);
    let out = biflab(&["rescale", "--model", &model, "--k", "2:4", "--m1", "0.3", "--m2", "-0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let model = write_model(dir.path(), r#"{"lambda": 0.5, "b": 1, "d": 1, "x_plus": 1, "y_minus": 1, "extra": 0}"#);
    let out = biflab(&["rescale", "--model", &model, "--k", "2:4", "--m1", "0.3", "--m2", "-0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("extra"));
}

#[test]
fn missing_model_file_exit_1() {
    let out = biflab(&["rescale", "--model", "/nonexistent/model.json", "--k", "2", "--m1", "0", "--m2", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn resonance_reports() {
    let out = biflab(&["resonance", "--nu", "-1", "--m2", "0.3333333333333333"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("degeneracy = AEqualsOne"), "{text}");
    assert!(text.contains("classification = Degenerate"));
    let out = biflab(&["resonance", "--nu", "+1", "--m2", "-0.3333333333333333", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["degeneracy"], "B03Zero");
}

#[test]
fn flow_equilibria_of_rotation_invariant_family() {
    let out = biflab(&["flow", "--variant", "eq11", "--b1", "-1", "--beta", "0.1", "--mu", "0.01"]);
    assert!(out.status.success());
    let kinds = column(&stdout(&out), "kind");
    // origin plus four centers and four saddles
    assert_eq!(kinds.iter().filter(|k| *k == "center").count(), 4 + 1);
    assert_eq!(kinds.iter().filter(|k| *k == "saddle").count(), 4);
}

#[test]
fn portrait_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let svg = dir.path().join(format!("{tag}.svg"));
        let csv = dir.path().join(format!("{tag}.csv"));
        let out = biflab(&[
            "portrait", "--nu", "+1", "--m1", "0.7", "--m2", "-0.5", "--grid-x", "-1:1:4", "--grid-y", "-1:1:4",
            "--iterations", "300", "--svg", svg.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (std::fs::read(svg).unwrap(), std::fs::read(csv).unwrap())
    };
    let first = run("a");
    assert_eq!(first, run("b"));
    assert!(String::from_utf8_lossy(&first.0).starts_with("<svg"));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["orbits", "--nu", "+1", "--m1", "0.7", "--m2", "-0.5", "--period", "4"];
    let serial = Command::new(env!("CARGO_BIN_EXE_biflab")).args(args).env("BIFLAB_THREADS", "1").output().unwrap();
    let parallel = Command::new(env!("CARGO_BIN_EXE_biflab")).args(args).env("BIFLAB_THREADS", "4").output().unwrap();
    assert!(serial.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_biflab")).args(args).env("BIFLAB_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
