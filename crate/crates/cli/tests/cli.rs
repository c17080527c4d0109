use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gaplabel"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("experiment.toml");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn finite_counterexample_summary() {
    let out = tempfile::tempdir().unwrap();
    let o = run(&["run", "--config", config("finite-counterexample.toml").to_str().unwrap(), "--out-dir", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("label group     (1/2)ℤ"), "{text}");
    assert!(text.contains("character group ℤ"), "{text}");
    assert!(text.contains("0.50000  member 1/2"), "{text}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("gaps.json")).unwrap()).unwrap();
    assert_eq!(report["gaps"].as_array().unwrap().len(), 1);
    assert_eq!(report["group"]["rational_collapse"], 2);
    let ids = std::fs::read_to_string(out.path().join("ids.csv")).unwrap();
    assert!(ids.starts_with("E,k(E)\n"));
}

#[test]
fn cat_map_group_has_empty_certificate() {
    let out = tempfile::tempdir().unwrap();
    let o = run(&["group", "--config", config("cat-map.toml").to_str().unwrap(), "--out-dir", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("label group     ℤ\n") && text.contains("fixed lattice   [] (rank 0)"), "{text}");
    let group: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("group.json")).unwrap()).unwrap();
    assert_eq!(group["fixed_lattice"], serde_json::json!([]));
}

#[test]
fn rotation_group_lists_one_and_alpha() {
    let o = run(&["group", "--config", config("almost-mathieu.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["label_group"]["generators"], serde_json::json!([1.0, 0.6180339887498949]));
    assert!(json["label_group"]["rational_collapse"].is_null());
    assert!(String::from_utf8_lossy(&o.stderr).contains("generators      1, 0.6180339887498949"));
}

#[test]
fn malformed_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        "schema_version = 1\n[system]\nkind = \"circle-doubling\"\nbogus = 1\n",
        "schema_version = 7\n[system]\nkind = \"circle-doubling\"\n",
        "schema_version = 1\n[system\n",
        "schema_version = 1\n[system]\nkind = \"torus-affine\"\nmatrix = [[2, 0], [0, 1]]\nshift = [0.1, 0.2]\n",
    ];
    for body in cases {
        let path = write_config(dir.path(), body);
        let o = run(&["group", "--config", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{body}");
    }
    let o = run(&["group", "--config", "/nonexistent/experiment.toml"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["group"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn doubling_map_estimate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        dir.path(),
        "schema_version = 1\n[system]\nkind = \"circle-doubling\"\n[estimate]\ncharacter = { torus = [0] }\nbeta = 1.0\n",
    );
    let o = run(&["estimate", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not invertible"));
}

#[test]
fn estimate_recovers_beta() {
    let o = run(&["estimate", "--config", config("finite-counterexample.toml").to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let est = v["estimate"].as_f64().unwrap();
    assert!((est + 1.0).abs() <= 5e-3, "{est}");
    assert_eq!(v["tolerance"], 5e-3);
}

#[test]
fn solenoid_check_passes() {
    let o = run(&["solenoid-check"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("PASS T₂∘ḡ = ḡ∘T₁")), "{text}");
    assert!(text.lines().any(|l| l.starts_with("PASS T₂∘h = h∘T₃")), "{text}");
}

#[test]
fn refuted_labels_exit_3() {
    // a band-edge label 1999/2000 cannot match ℤ once the tolerance is below 1/N
    let dir = tempfile::tempdir().unwrap();
    let body = std::fs::read_to_string(config("cat-map.toml")).unwrap().replace("schedule", "membership_tol = 1e-6\n# schedule");
    let path = write_config(dir.path(), &body);
    let o = run(&["gaps", "--config", path.to_str().unwrap(), "--out-dir", dir.path().join("out").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn reports_are_byte_stable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = run(&[
            "gaps",
            "--config",
            config("almost-mathieu.toml").to_str().unwrap(),
            "--n",
            "600",
            "--seed",
            "5",
            "--quiet",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    for name in ["gaps-0.json", "gaps-1.json"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn ids_csv_on_stdout() {
    let o = run(&["ids", "--config", config("finite-counterexample.toml").to_str().unwrap(), "--n", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("E,k(E)"));
    let last: Vec<f64> = lines.last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[1], 1.0);
}
