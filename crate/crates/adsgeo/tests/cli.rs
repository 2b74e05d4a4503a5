use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn adsgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adsgeo")).args(args).output().unwrap()
}

fn adsgeo_out(args: &[&str], out: &Path) -> Output {
    let mut a: Vec<&str> = args.to_vec();
    a.push("--out");
    a.push(out.to_str().unwrap());
    adsgeo(&a)
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_time_s");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn invalid_parameter_exits_2_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = adsgeo_out(&["static", "--param", "M=x"], &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert!(String::from_utf8_lossy(&o.stderr).contains("M"));
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["static", "--n", "7"][..],
        &["twist", "--metric", "schwarzschild-ads"],
        &["obata", "--tol", "nonsense=1e-3"],
        &["obata", "--tol", "obata.phi=-1"],
        &["twist", "--csv", "x.csv"],
        &["static", "--param", "eps=0.5"],
        &["frobnicate"],
    ] {
        assert_eq!(adsgeo(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn threads_variable_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_adsgeo"))
        .args(["obata"])
        .env("ADSGEO_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn horizon_entry_for_unit_mass() {
    let o = adsgeo(&["static", "--metric", "schwarzschild-ads", "--param", "M=1"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["schema"], "adsgeo-report/1");
    let h = r["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["check_name"] == "static.horizon")
        .unwrap();
    assert_eq!(h["pass"], true);
    let event = h["details"]["event_radius"].as_f64().unwrap();
    assert!((event - 0.682_327_803_8).abs() < 1e-6);
}

#[test]
fn tolerance_override_can_fail_a_check() {
    let o = adsgeo(&["obata", "--tol", "obata.phi=1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<_> = r["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["pass"] == false)
        .collect();
    assert!(failed.iter().all(|e| e["check_name"] == "obata.phi"), "{failed:?}");
    assert_eq!(r["summary"]["failed"], 1);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Value> = (0..2)
        .map(|k| {
            let p = dir.path().join(format!("{k}.json"));
            assert_eq!(adsgeo_out(&["compactify", "--seed", "7"], &p).status.code(), Some(0));
            let mut v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
            strip_timing(&mut v);
            v
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let other = adsgeo(&["compactify", "--seed", "8"]);
    let mut v: Value = serde_json::from_slice(&other.stdout).unwrap();
    strip_timing(&mut v);
    assert_ne!(runs[0], v);
}

#[test]
fn entries_are_sorted() {
    let o = adsgeo(&["twist"]);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<(String, u64)> = r["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["check_name"].as_str().unwrap().to_string(),
                e["index"].as_u64().unwrap(),
            )
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn csv_outputs_have_headers() {
    let dir = tempfile::tempdir().unwrap();
    let entries = dir.path().join("entries.csv");
    let tables = dir.path().join("run.csv");
    let o = adsgeo(&[
        "all",
        "--format",
        "csv",
        "--out",
        entries.to_str().unwrap(),
        "--csv",
        tables.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let first = |p: &Path| std::fs::read_to_string(p).unwrap().lines().next().unwrap().to_string();
    assert_eq!(
        first(&entries),
        "check_name,metric_id,index,point,lhs,rhs,residual,tolerance,pass,cause,wall_time_s"
    );
    assert_eq!(first(&dir.path().join("run.fg.csv")), "order,A2,B2");
    assert_eq!(first(&dir.path().join("run.static.csv")), "r,V,f,W");
    assert_eq!(first(&dir.path().join("run.obata.csv")), "s,phi,f");

    let single = dir.path().join("obata.csv");
    assert_eq!(
        adsgeo(&["obata", "--csv", single.to_str().unwrap()]).status.code(),
        Some(0)
    );
    let text = std::fs::read_to_string(&single).unwrap();
    let row: Vec<f64> = text
        .lines()
        .nth(21)
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert!((row[0] - 1.0).abs() < 1e-12);
    assert!((row[1] - 1f64.cosh()).abs() < 1e-9 && (row[2] - 1f64.sinh()).abs() < 1e-9);
}

#[test]
fn nonpositive_mass_has_no_horizon() {
    let o = adsgeo(&["static", "--metric", "schwarzschild-ads", "--param", "M=-0.5"]);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let h = r["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["check_name"] == "static.horizon")
        .unwrap();
    assert_eq!(h["pass"], true, "{h}");
    assert!(h["details"].get("event_radius").is_none());
}
