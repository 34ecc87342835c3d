use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn ccch(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccch")).args(args).current_dir(dir).output().expect("run ccch")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn phase_counts_per_region() {
    let tmp = tempfile::tempdir().unwrap();
    let out = ccch(&["phase", "--out", "o"], tmp.path());
    assert!(out.status.success());
    let counts: Vec<String> = read(tmp.path(), "o/phase_counts.csv")
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().to_string())
        .collect();
    assert_eq!(counts, ["0", "4", "8", "0"]);
    let manifest: Value = serde_json::from_str(&read(tmp.path(), "o/phase_points.json")).unwrap();
    assert_eq!(manifest["schema"], 1);
    assert_eq!(manifest["config"]["xi"].as_array().unwrap().len(), 4);
    assert_eq!(manifest["rows"], 12);
}

#[test]
fn empty_xi_list_gives_empty_output() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.json", r#"{"schema": 1, "xi": []}"#);
    let out = ccch(&["phase", "--config", "c.json", "--out", "o"], tmp.path());
    assert!(out.status.success());
    assert_eq!(read(tmp.path(), "o/phase_counts.csv"), "xi,region,count\n");
}

#[test]
fn critical_xi_is_a_numeric_error() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.json", r#"{"schema": 1, "xi": [-0.5, -1.0]}"#);
    let out = ccch(&["phase", "--config", "c.json", "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("critical value -1"));
}

#[test]
fn config_errors_exit_with_two_and_a_line_number() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "bad.json", "{\n  \"schema\": 1,\n  \"xi\": [0.5,\n   \"x\"]\n}\n");
    let out = ccch(&["phase", "--config", "bad.json", "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    write(tmp.path(), "v2.json", r#"{"schema": 2, "xi": []}"#);
    assert_eq!(ccch(&["phase", "--config", "v2.json"], tmp.path()).status.code(), Some(2));
    write(tmp.path(), "nov.json", r#"{"xi": []}"#);
    assert_eq!(ccch(&["phase", "--config", "nov.json"], tmp.path()).status.code(), Some(2));
    write(tmp.path(), "extra.json", r#"{"schema": 1, "xi": [], "zeta": 3}"#);
    assert_eq!(ccch(&["phase", "--config", "extra.json"], tmp.path()).status.code(), Some(2));
    assert_eq!(ccch(&["phase", "--config", "missing.json"], tmp.path()).status.code(), Some(2));
}

#[test]
fn simulate_zero_data_is_flat() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "z.json",
        r#"{"schema": 1, "datum": {"profile": {"kind": "zero"}, "l": 20, "n": 128}, "times": [1, 2]}"#,
    );
    let out = ccch(&["simulate", "--config", "z.json", "--out", "o"], tmp.path());
    assert!(out.status.success());
    for k in 0..3 {
        let text = read(tmp.path(), &format!("o/sim_{k}.csv"));
        let rows: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(rows.len(), 128);
        assert!(rows.iter().all(|r| r.ends_with(",0.0000000000000000e0,0.0000000000000000e0")));
        let m: Value = serde_json::from_str(&read(tmp.path(), &format!("o/sim_{k}.json"))).unwrap();
        assert_eq!(m["summary"]["n"], 128);
    }
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "s.json",
        r#"{"schema": 1, "datum": {"profile": {"kind": "sech", "amplitude": 0.3, "phase_velocity": 0.5}, "l": 20, "n": 256}, "times": [0.5]}"#,
    );
    for dir in ["a", "b"] {
        assert!(ccch(&["simulate", "--config", "s.json", "--out", dir, "--threads", "1"], tmp.path()).status.success());
    }
    for f in ["sim_1.csv", "sim_1.json"] {
        assert_eq!(read(tmp.path(), &format!("a/{f}")), read(tmp.path(), &format!("b/{f}")));
    }
}

#[test]
fn scatter_spectrum_asym_chain() {
    let tmp = tempfile::tempdir().unwrap();
    let datum = r#"{"profile": {"kind": "sech", "amplitude": 0.2, "phase_velocity": 0.5}, "l": 30, "n": 1024}"#;
    write(tmp.path(), "sc.json", &format!(r#"{{"schema": 1, "datum": {datum}, "n_half": 300}}"#));
    write(tmp.path(), "sp.json", &format!(r#"{{"schema": 1, "datum": {datum}}}"#));
    assert!(ccch(&["scatter", "--config", "sc.json", "--out", "run"], tmp.path()).status.success());
    assert!(ccch(&["spectrum", "--config", "sp.json", "--out", "run"], tmp.path()).status.success());
    assert_eq!(read(tmp.path(), "run/scatter.csv").lines().count(), 601);
    assert_eq!(read(tmp.path(), "run/spectrum.csv"), "re_rho,im_rho,re_c,im_c\n");
    let m: Value = serde_json::from_str(&read(tmp.path(), "run/scatter.json")).unwrap();
    assert!(m["summary"]["unitarity_defect"].as_f64().unwrap() < 1e-10);

    write(
        tmp.path(),
        "as.json",
        r#"{"schema": 1, "table": "run/scatter.csv", "spectrum": "run/spectrum.csv", "times": [40], "xi": [-0.5, 1.0]}"#,
    );
    let out = ccch(&["asym", "--config", "as.json", "--out", "run"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = read(tmp.path(), "run/asym.csv");
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][7], "FourPoints");
    assert_eq!(rows[1][7], "RightNoPoint");
    assert_eq!(rows[1][6], "0.0000000000000000e0");
    let m: Value = serde_json::from_str(&read(tmp.path(), "run/asym.json")).unwrap();
    assert_eq!(m["summary"]["terms"][0]["t_j"].as_array().unwrap().len(), 4);
    assert_eq!(m["summary"]["terms"][0]["nu_j"].as_array().unwrap().len(), 4);

    write(tmp.path(), "gone.json", r#"{"schema": 1, "table": "nope.csv", "spectrum": "nope.csv", "times": [40], "xi": [-0.5]}"#);
    assert_eq!(ccch(&["asym", "--config", "gone.json", "--out", "run"], tmp.path()).status.code(), Some(2));
}

#[test]
fn soliton_slices() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "s.json",
        r#"{"schema": 1, "pairs": [{"rho": [0.8910065241883679, 0.45399049973954675], "c": [1, 0]}], "times": [0, 1], "l": 20, "n": 64, "n_y": 200}"#,
    );
    assert!(ccch(&["soliton", "--config", "s.json", "--out", "o"], tmp.path()).status.success());
    let peak = read(tmp.path(), "o/soliton_1.csv")
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(peak > 0.1);
    write(tmp.path(), "low.json", r#"{"schema": 1, "pairs": [{"rho": [0.5, -0.5], "c": [1, 0]}], "times": [0], "l": 20, "n": 64}"#);
    assert_eq!(ccch(&["soliton", "--config", "low.json"], tmp.path()).status.code(), Some(2));
}

#[test]
fn validate_reports_every_criterion() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "v.json", r#"{"schema": 1, "times": [20, 40], "l": 128, "n": 2048, "n_half": 600}"#);
    let out = ccch(&["validate", "--config", "v.json", "--out", "o", "--seed", "7"], tmp.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("criterion ")).count(), 8);
    let m: Value = serde_json::from_str(&read(tmp.path(), "o/validation.json")).unwrap();
    assert_eq!(m["seed"], 7);
    let criteria = m["summary"]["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 8);
    let all = criteria.iter().all(|c| c["passed"] == true);
    assert_eq!(out.status.code(), Some(if all { 0 } else { 4 }));
}
