use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn striplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_striplab"))
        .args(args)
        .env_remove("STRIPLAB_CONFIG")
        .output()
        .expect("launch striplab")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_closed_form_and_zero() {
    let o = striplab(&["eval", "--z", "1+0i", "--method", "direct"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert!((v["G"][0].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-10);
    assert_eq!(v["method"], "direct");

    let o = striplab(&["eval", "--z", "0.5+14.1347251417i"]);
    assert!(o.status.success());
    assert!(stdout_json(&o)["abs_G"].as_f64().unwrap() < 1e-7);
}

#[test]
fn eval_usage_errors() {
    let o = striplab(&["eval", "--z", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    // left of the half-plane where G is defined
    assert_eq!(striplab(&["eval", "--z", "-1+2i"]).status.code(), Some(2));
    assert_eq!(striplab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn curves_csv_shape_and_sign_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = striplab(&[
        "curves",
        "--sigma",
        "0.5",
        "--samples",
        "101",
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(!text.contains('\r'));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().all(|r| r.split(',').count() == 13));

    let err: Value = serde_json::from_slice(&o.stderr).expect("sign summary on stderr");
    let s = &err["sign_summary"];
    assert_eq!(s["c_prime1_upper"], true);
    assert_eq!(s["c_sigma_all_lower"], false);

    assert_eq!(
        striplab(&["curves", "--sigma", "1.5"]).status.code(),
        Some(2)
    );
}

#[test]
fn fov_boundary_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = striplab(&[
            "fov",
            "--beta",
            "1",
            "--n",
            "128",
            "--angles",
            "360",
            "--out",
            path_str(p),
        ]);
        assert!(o.status.success());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 360);
    let min_re = rows.iter().map(|r| r[1]).fold(f64::INFINITY, f64::min);
    assert!(min_re >= -1e-12, "{min_re}");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    assert_eq!(striplab(&["fov", "--n", "4"]).status.code(), Some(2));
}

#[test]
fn sequential_flag_gives_same_bytes() {
    let par = striplab(&["fov", "--n", "64", "--angles", "90"]);
    let seq = striplab(&["--sequential", "fov", "--n", "64", "--angles", "90"]);
    assert!(par.status.success() && seq.status.success());
    assert_eq!(par.stdout, seq.stdout);
}

#[test]
fn zeros_up_to_thirty() {
    let o = striplab(&["zeros", "--t-max", "30"]);
    assert!(o.status.success());
    let recs = stdout_json(&o);
    let recs = recs.as_array().unwrap();
    assert_eq!(recs.len(), 3);
    for (r, t) in recs.iter().zip([14.134725, 21.022040, 25.010858]) {
        assert!((r["z"]["t"].as_f64().unwrap() - t).abs() < 1e-6);
        assert_eq!(r["on_critical_line"], true);
    }

    let o = striplab(&["zeros", "--t-max", "15", "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "sigma,t,abs_G,G_sigma_re,G_sigma_im,multiplicity,on_line,zeta_residual"
    );
    assert_eq!(lines.len(), 2);
}

#[test]
fn convolve_demo_paths_agree() {
    let o = striplab(&["convolve-demo"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    let conv = v["convolution"].as_array().unwrap();
    assert_eq!(conv.len(), 12);
    assert!(conv.iter().all(|c| c["rel_l2"].as_f64().unwrap() < 1e-3));
    let inv = v["inversion"].as_array().unwrap();
    assert_eq!(inv.len(), 5);
    assert!(inv.iter().all(|c| c["rel_l2"].as_f64().unwrap() < 1e-3));
}

#[test]
fn verify_subsets_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("g.json");
    let o = striplab(&["verify", "--suite", "gfunc", "--report", path_str(&r)]);
    assert_eq!(o.status.code(), Some(0));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&r).unwrap()).unwrap();
    let ids: Vec<&String> = rep["checks"].as_object().unwrap().keys().collect();
    assert_eq!(ids, ["C01", "C02", "C03", "C04", "C05", "C06"]);
    for e in rep["checks"].as_object().unwrap().values() {
        for k in [
            "id",
            "claim",
            "status",
            "measured",
            "tolerance",
            "runtime_ms",
        ] {
            assert!(e.get(k).is_some(), "missing {k}");
        }
        assert!(e["runtime_ms"].is_null());
    }

    // the J- field-of-values clause fails, so the operators suite exits 4
    let r = dir.path().join("o.json");
    let o = striplab(&["verify", "--suite", "operators", "--report", path_str(&r)]);
    assert_eq!(o.status.code(), Some(4));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&r).unwrap()).unwrap();
    assert_eq!(rep["checks"]["C08"]["status"], "fail");
    assert_eq!(rep["checks"].as_object().unwrap().len(), 6);

    assert_eq!(
        striplab(&["verify", "--suite", "nope"]).status.code(),
        Some(2)
    );
}

#[test]
fn config_file_and_env_var() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"{"operator": {"n": 32}}"#).unwrap();
    let o = striplab(&["--config", path_str(&good), "fov", "--angles", "16"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 17);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"operator": {"n": 32}, "extra": true}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_striplab"))
        .args(["eval", "--z", "1+0i"])
        .env("STRIPLAB_CONFIG", &bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));

    // flags override file values
    let o = striplab(&[
        "--config",
        path_str(&good),
        "fov",
        "--n",
        "16",
        "--angles",
        "8",
    ]);
    assert!(o.status.success());
}
