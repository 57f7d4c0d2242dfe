use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phasespace"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn validate(schema: &str, v: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn spin_ground_state() {
    let v = json_of(&run(&["spin", "--state", "1,0"]));
    validate("spin", &v);
    let f: Vec<f64> = ["fpp", "fpm", "fmp", "fmm"].iter().map(|k| v["f"][k].as_f64().unwrap()).collect();
    assert_eq!(f, [0.5, 0.5, 0.0, 0.0]);
    assert_eq!(v["t"], 0.0);
    assert_eq!(v["nonnegative"], true);
}

#[test]
fn spin_t_override() {
    let v = json_of(&run(&["spin", "--state", "0.92387953251128674,0.38268343236508978", "--t", "0.7"]));
    assert_eq!(v["nonnegative"], true);
    let v = json_of(&run(&["spin", "--state", "0.92387953251128674,0.38268343236508978", "--t", "feynman"]));
    assert_eq!(v["nonnegative"], false);
    assert_eq!(v["zx_report"]["mismatch"], true);
    let v = json_of(&run(&["spin", "--state", "0.7071067811865476,0.7071067811865476i", "--t", "neg-feynman"]));
    assert!((v["t"].as_f64().unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn wigner_first_excited_with_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v =
        json_of(&run(&["wigner", "--state", "hermite:1", "--xmin", "-6", "--xmax", "6", "--n", "256", "--out", out]));
    validate("wigner", &v);
    assert!(v["negative_volume"].as_f64().unwrap() > 0.0);
    let csv = std::fs::read_to_string(dir.path().join("wigner.csv")).unwrap();
    assert!(csv.starts_with("x,p,f\n"));
    assert_eq!(csv.lines().count(), 1 + 256 * 256);
    let dat = std::fs::read_to_string(dir.path().join("wigner.dat")).unwrap();
    let rows: Vec<&str> = dat.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 256);
    assert_eq!(rows[0].split_whitespace().count(), 256);
    let on_disk: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("wigner.json")).unwrap()).unwrap();
    assert_eq!(on_disk, v);
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = d.path().to_str().unwrap();
        assert!(run(&["wigner", "--state", "gaussian:0.5,-1,1.2", "--n", "64", "--out", o]).status.success());
        assert!(run(&["marginal", "--state", "hermite:2", "--theta", "0.4", "--out", o]).status.success());
    }
    for name in ["wigner.csv", "wigner.dat", "marginal.csv"] {
        assert_eq!(std::fs::read(a.path().join(name)).unwrap(), std::fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    for name in ["wigner.json", "marginal.json"] {
        let strip = |d: &tempfile::TempDir| {
            let mut v: Value = serde_json::from_str(&std::fs::read_to_string(d.path().join(name)).unwrap()).unwrap();
            v.as_object_mut().unwrap().remove("files");
            v
        };
        assert_eq!(strip(&a), strip(&b), "{name}");
    }
}

#[test]
fn charfn_marginal_negativity_schemas() {
    let v = json_of(&run(&["charfn", "--state", "gaussian:2,3,1", "--alpha", "0.7", "--beta", "-1.3"]));
    validate("charfn", &v);
    let p = &v["points"][0];
    assert!((p["re"].as_f64().unwrap() + 0.46453654275006645).abs() < 1e-9);
    assert!((p["im"].as_f64().unwrap() - 0.34701915531645955).abs() < 1e-9);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v = json_of(&run(&["marginal", "--state", "hermite:0", "--theta", "0.7", "--source", "wigner", "--out", out]));
    validate("marginal", &v);
    assert!((v["normalization"].as_f64().unwrap() - 1.0).abs() < 1e-7);
    let csv = std::fs::read_to_string(dir.path().join("marginal.csv")).unwrap();
    assert!(csv.starts_with("z,g\n"));

    let v = json_of(&run(&["negativity", "--values", "0.6,-0.1,0.3,0.2"]));
    validate("negativity", &v);
    assert_eq!(v["negative_volume"], 0.1);
    let v = json_of(&run(&["negativity", "--state", "hermite:1", "--n", "128"]));
    validate("negativity", &v);
    assert!(v["negative_volume"].as_f64().unwrap() > 0.2);
}

#[test]
fn tomo_and_tamper_reports() {
    let v = json_of(&run(&["tomo", "--state", "hermite:1", "--ndirs", "64", "--n", "128"]));
    validate("tomo", &v);
    assert_eq!(v["ndirs"], 64);
    assert!(v["l2_error"].as_f64().unwrap() < 1e-2);

    let out = run(&["tomo", "--state", "hermite:1", "--ndirs", "2", "--n", "128"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gaps"));
    let v = json_of(&run(&["tomo", "--state", "hermite:1", "--ndirs", "2", "--n", "128", "--allow-gaps"]));
    assert_eq!(v["gaps"].as_array().unwrap().len(), 2);

    for kind in ["rect", "smooth"] {
        let v = json_of(&run(&["tamper", "--kind", kind, "--c", "0.1", "--n", "128"]));
        validate("tamper", &v);
        assert_eq!(v["axis_marginals_preserved"], true);
        assert_eq!(v["detected"], true);
    }
}

#[test]
fn weyl_check_report_and_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v =
        json_of(&run(&["weyl-check", "--g", "gauss", "--state", "hermite:1", "--dim", "32", "--matrix", "--out", out]));
    validate("weyl", &v);
    assert_eq!(v["passed"], true);
    assert!(v["lhs"].as_f64().unwrap().abs() < 1e-5);
    let csv = std::fs::read_to_string(dir.path().join("weyl_matrix.csv")).unwrap();
    assert!(csv.starts_with("row,col,re,im\n"));
    assert_eq!(csv.lines().count(), 1 + 32 * 32);
    let tight = json_of(&run(&["weyl-check", "--g", "x2", "--state", "hermite:0", "--tol", "1e-30"]));
    assert_eq!(tight["passed"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["wigner", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let bad = run(&["wigner", "--state", "hermite:x"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("hermite"));
    assert_eq!(
        run(&["wigner", "--state", "hermite:0", "--n", "16", "--xmin", "-6", "--xmax", "6"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["spin", "--state", "0,0"]).status.code(), Some(1));
    assert_eq!(run(&["tamper", "--kind", "smooth", "--c", "0.1", "--a=-1"]).status.code(), Some(1));
    assert_eq!(run(&["spin", "--hbar=-1"]).status.code(), Some(1));
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# defaults\nstate = hermite:1\nn = 192\nhbar = 0.5\n").unwrap();
    let c = cfg.to_str().unwrap();
    let v = json_of(&run(&["--config", c, "wigner"]));
    assert_eq!(v["state"], "hermite:1");
    assert_eq!(v["hbar"], 0.5);
    assert_eq!(v["grid"]["x"]["n"], 192);
    let v = json_of(&run(&["--hbar", "2", "wigner", "--config", c, "--n", "128"]));
    assert_eq!(v["state"], "hermite:1");
    assert_eq!(v["hbar"], 2.0);
    assert_eq!(v["grid"]["x"]["n"], 128);
    assert_eq!(run(&["--config", "/nonexistent/run.conf", "spin"]).status.code(), Some(1));
}

#[test]
fn file_states_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.csv");
    let grid = phasespace::Grid1D::centered(10.0, 256).unwrap();
    let psi = phasespace::states::oscillator_eigenstate(1, 1.0).unwrap().sample(&grid);
    phasespace::numerics::io::write_sampled(&path, &psi, "wavefunction").unwrap();
    let spec = format!("file:{}", path.display());
    let v = json_of(&run(&["wigner", "--state", &spec, "--xmin", "-6", "--xmax", "6", "--n", "128"]));
    assert!((v["min"].as_f64().unwrap() + 1.0 / std::f64::consts::PI).abs() < 1e-6);
}

#[test]
fn verify_report_schema_with_tolerance_override() {
    let out = run(&["verify", "--tol", "spin.zx_mismatch=2"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    validate("verify", &v);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["spin.zx_mismatch"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL spin.zx_mismatch"));
    assert_eq!(run(&["verify", "--tol", "spin.zx_mismatch=2"]).stdout, out.stdout);
}
