use std::path::Path;
use std::process::{Command, Output};

use qph::circuit::{library, Assignment, Role};
use qph::quantifier::{HierarchyInstance, InstanceFile, Quantifier};
use qph::state::Qustring;
use serde_json::Value;

fn qph(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qph")).current_dir(dir).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, value: &impl serde::Serialize) {
    std::fs::write(dir.join(name), serde_json::to_string(value).unwrap()).unwrap();
}

fn measure_instance(dir: &Path) {
    let f = library::measure_qubit("w1", Role::Witness).unwrap();
    let inst = HierarchyInstance::new(f, vec![vec!["w1".into()]], Quantifier::Sup, Assignment::new()).unwrap();
    write(dir, "inst.json", &InstanceFile::from(&inst));
}

#[test]
fn codec_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let phi = Qustring::from_real(&[0.6, 0.0, 0.0, 0.8]).unwrap();
    write(d, "phi.json", &phi);

    let out = qph(d, &["decompose", "--state", "phi.json", "--out", "gen.json"]);
    assert!(out.status.success());
    let out = qph(d, &["quantize", "--generator", "gen.json", "--eps", "0.001", "--out", "frag.qgf"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let bytes = std::fs::read(d.join("frag.qgf")).unwrap();
    assert_eq!(&bytes[..4], b"QGF1");
    assert_eq!(bytes.len(), qph::codec::encoded_len(1, 10));

    let out = qph(d, &["reconstruct", "--fragment", "frag.qgf", "--state", "phi.json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["trace_distance"].as_f64().unwrap() < 0.001);

    // Without --out the fragment is printed as hex.
    let out = qph(d, &["quantize", "--state", "phi.json", "--eps", "0.25"]);
    assert!(json(&out)["hex"].as_str().unwrap().starts_with("51474631"));

    std::fs::write(d.join("bad.qgf"), b"QGF0").unwrap();
    assert_eq!(qph(d, &["reconstruct", "--fragment", "bad.qgf"]).status.code(), Some(2));
}

#[test]
fn evaluation_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    measure_instance(d);

    let v = json(&qph(d, &["eval", "--instance", "inst.json"]));
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let v = json(&qph(d, &["eval", "--instance", "inst.json", "--method", "grid:2"]));
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let v = json(&qph(d, &["decide", "--instance", "inst.json"]));
    assert_eq!(v["verdict"], "accept");
    let out = qph(d, &["decide", "--instance", "inst.json", "--a", "0.6", "--b", "0.6"]);
    assert_eq!(out.status.code(), Some(2));

    let out = qph(d, &["amplify", "--instance", "inst.json", "--t", "3", "--out", "amp.json"]);
    assert!(out.status.success());
    let v = json(&qph(d, &["eval", "--instance", "amp.json"]));
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(qph(d, &["amplify", "--instance", "inst.json", "--t", "2"]).status.code(), Some(2));

    let csv = qph(d, &["eval", "--instance", "inst.json", "--format", "csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("certified,method,value,witness\n"));
}

#[test]
fn algebra_and_separability_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (x, y, z) = (Qustring::basis(1, 0), Qustring::basis(1, 1), Qustring::plus(1));
    let p = serde_json::json!({"mode": "explicit", "ground_size": 1, "accept": [[x]], "reject": [[y]]});
    let q = serde_json::json!({"mode": "explicit", "ground_size": 1, "accept": [[x]], "reject": [[z]]});
    write(d, "p.json", &p);
    write(d, "q.json", &q);

    let v = json(&qph(d, &["algebra", "--op", "intersect", "--problem", "p.json", "--other", "q.json"]));
    assert_eq!(v["accept"].as_array().unwrap().len(), 1);
    assert!(v["reject"].as_array().unwrap().is_empty());
    let v = json(&qph(d, &["algebra", "--op", "includes", "--problem", "p.json", "--other", "p.json"]));
    assert_eq!(v["includes"], true);
    let v = json(&qph(d, &["algebra", "--op", "complement", "--problem", "p.json"]));
    assert_eq!(v["accept"][0][0]["amplitudes"][1][0], 1.0);
    assert_eq!(qph(d, &["algebra", "--op", "union", "--problem", "p.json"]).status.code(), Some(2));

    // The accept set {|0>, |1>} without |+> fails on the probe |+>.
    let s = serde_json::json!({"mode": "explicit", "ground_size": 1, "accept": [[x], [y]], "reject": []});
    write(d, "s.json", &s);
    write(d, "probes.json", &vec![z.clone()]);
    let out = qph(d, &["separability", "--problem", "s.json", "--probes", "probes.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!json(&out)["counterexample"].is_null());
    let out = qph(d, &["separability", "--problem", "s.json", "--probes", "probes.json", "--side", "reject"]);
    assert_eq!(out.status.code(), Some(0));

    // Threshold complement flips the instance.
    let f = library::measure_qubit("x", Role::Input).unwrap();
    let inst = HierarchyInstance::new(f, vec![], Quantifier::Sup, [("x".to_string(), x)].into()).unwrap();
    write(d, "t.json", &serde_json::json!({"mode": "threshold", "instance": InstanceFile::from(&inst)}));
    let v = json(&qph(d, &["algebra", "--op", "complement", "--problem", "t.json"]));
    assert_eq!(v["mode"], "threshold");
    assert_eq!(v["instance"]["leading"], "inf");
}

#[test]
fn check_exit_codes_and_formats() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("cfg.json"), r#"{"seed": 5, "sweeps": {"samples": 3, "v": [0.75], "t": [3]}}"#).unwrap();

    let out = qph(d, &["check", "amplification", "--config", "cfg.json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["meta"]["seed"], 5);
    assert!((v["cases"][0]["value"].as_f64().unwrap() - 0.84375).abs() < 1e-12);

    let out = qph(d, &["check", "amplification", "--config", "cfg.json", "--seed", "9", "--format", "csv", "--out", "r.csv"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(d.join("r.csv")).unwrap();
    assert!(text.starts_with("# suite=amplification\n# seed=9\n"));

    assert_eq!(qph(d, &["check", "nope"]).status.code(), Some(2));
    std::fs::write(d.join("bad.json"), r#"{"budgets": {"qubits": 0}}"#).unwrap();
    assert_eq!(qph(d, &["check", "duality", "--config", "bad.json"]).status.code(), Some(2));
    std::fs::write(d.join("tiny.json"), r#"{"budgets": {"grid_count": 10}, "sweeps": {"samples": 1}}"#).unwrap();
    assert_eq!(qph(d, &["check", "grid-convergence", "--config", "tiny.json"]).status.code(), Some(2));

    // Seed 7 draws mixed problems whose threshold sets are not separable,
    // so the suite reports failing cases.
    std::fs::write(d.join("sep.json"), r#"{"seed": 7, "sweeps": {"samples": 20, "probes": 100}}"#).unwrap();
    let out = qph(d, &["check", "separability", "--config", "sep.json"]);
    assert_eq!(out.status.code(), Some(1));
}
