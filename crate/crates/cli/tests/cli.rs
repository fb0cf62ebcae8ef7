use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

use parafermion::braid::dense_braid_gates;
use parafermion::optics::{r_gate_simulate, RGateSettings};
use parafermion::tensor::{c, max_abs_diff};
use serde_json::Value;

fn pfsim(out: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_pfsim"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn compile_emits_settings_that_reproduce_the_gates() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfsim(dir.path(), &["compile"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_json(&dir.path().join("compile.json"));
    assert_eq!(report["tool"], "pfsim");
    assert_eq!(report["provenance"]["parts"], "analytic");
    let g = dense_braid_gates();
    for (gate, target) in report["data"]["r_gates"].as_array().unwrap().iter().zip([&g.r2, &g.btilde]) {
        let settings: RGateSettings = serde_json::from_value(gate["settings"].clone()).unwrap();
        let scale = gate["scale"].as_f64().unwrap();
        let t = r_gate_simulate(&settings).unwrap();
        assert!(max_abs_diff(&t, &(target * c(scale, 0.0))) < 1e-9);
    }
    let manifest = read_json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["runs"]["compile"]["files"][0]["name"], "compile.json");
}

#[test]
fn csv_schema_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfsim(
        dir.path(),
        &["noise", "--seed", "3", "--grid-step", "0.5", "--resamples", "4", "--format", "csv"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("noise_hopping_phase.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["p", "q", "M", "K", "leakage", "sigma_M", "sigma_K"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 9);
    let m0: f64 = rows[0][2].parse().unwrap();
    for r in &rows {
        let m: f64 = r[2].parse().unwrap();
        assert!((m - m0).abs() < 1e-9);
        let s: f64 = r[5].parse().unwrap();
        assert!(s.is_finite());
    }
    let traj = std::fs::read_to_string(dir.path().join("noise_trajectory.csv")).unwrap();
    assert!(traj.contains("0.6666666666666666"));
    let manifest = read_json(&dir.path().join("manifest.json"));
    let names: Vec<&str> = manifest["runs"]["noise"]["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"noise.json") && names.contains(&"noise_flip_dephase.csv"));

    // a second experiment in the same directory keeps the first entry
    assert!(pfsim(dir.path(), &["witness"]).status.success());
    let manifest = read_json(&dir.path().join("manifest.json"));
    assert!(manifest["runs"]["noise"].is_object() && manifest["runs"]["witness"].is_object());
}

#[test]
fn sampled_outputs_are_byte_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["kcbs", "--seed", "11", "--grid-step", "0.25", "--resamples", "5"];
    assert!(pfsim(a.path(), &args).status.success());
    assert!(pfsim(b.path(), &args).status.success());
    for f in ["kcbs.json", "manifest.json"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        // reports echo the output directory; compare with it removed
        let strip = |v: Vec<u8>, p: &Path| String::from_utf8(v).unwrap().replace(&p.display().to_string(), "");
        assert_eq!(strip(x, a.path()), strip(y, b.path()), "{f}");
    }
    let other = tempfile::tempdir().unwrap();
    let args2 = ["kcbs", "--seed", "12", "--grid-step", "0.25", "--resamples", "5"];
    assert!(pfsim(other.path(), &args2).status.success());
    let r1 = read_json(&a.path().join("kcbs.json"));
    let r2 = read_json(&other.path().join("kcbs.json"));
    assert_ne!(r1["data"]["sampled_k"], r2["data"]["sampled_k"]);
}

#[test]
fn braid_report_phases_and_error_bars() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfsim(dir.path(), &["braid", "--seed", "7", "--resamples", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&dir.path().join("braid.json"));
    let states = r["data"]["states"].as_array().unwrap();
    assert_eq!(states.len(), 9);
    for s in states {
        assert!(s["delta_phi_1"].as_f64().unwrap().abs() < 1e-9);
        assert!((s["delta_phi_2"].as_f64().unwrap() - 2.0 * PI / 3.0).abs() < 1e-9);
        let sig = s["sampled"]["sigma_delta_phi_2"].as_f64().unwrap();
        assert!(sig.is_finite() && sig > 0.0);
        assert!((s["sampled"]["delta_phi_2"].as_f64().unwrap() - 2.0 * PI / 3.0).abs() < 0.05);
    }
    assert!(r["data"]["chi"]["fidelity"].as_f64().unwrap() >= 0.99);
    assert_eq!(r["provenance"]["states.sampled"], "sampled");
    assert_eq!(r["seed"], 7);
}

#[test]
fn tomo_writes_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = pfsim(dir.path(), &["tomo", "--seed", "1", "--resamples", "2", "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let counts = std::fs::read_to_string(dir.path().join("tomo_counts.csv")).unwrap();
    assert!(counts.starts_with("prep,meas,count"));
    assert_eq!(counts.lines().count(), 82);
    let r = read_json(&dir.path().join("tomo.json"));
    assert!(r["data"]["chi"]["fidelity"].as_f64().unwrap() >= 0.99);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(pfsim(dir.path(), &["noise"]).status.code(), Some(2));
    assert_eq!(pfsim(dir.path(), &["noise", "--seed", "1", "--grid-step", "1.5"]).status.code(), Some(2));
    assert_eq!(pfsim(dir.path(), &["kcbs", "--seed", "1", "--shots", "0"]).status.code(), Some(2));
    assert_eq!(pfsim(dir.path(), &["bogus"]).status.code(), Some(2));
    assert_eq!(pfsim(dir.path(), &["compile", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    std::fs::write(&file, b"x").unwrap();
    assert_eq!(pfsim(&file, &["compile"]).status.code(), Some(1));
}
