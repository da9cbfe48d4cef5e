use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_complex::Complex64;
use serde_json::{json, Value};

use loopfact::{BirkhoffFactorization, MatrixLoop, RootSubgroupCoordinates, TriangularFactorization};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(rel: &str) -> PathBuf {
    root().join("fixtures").join(rel)
}

fn loopfact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopfact")).args(args).current_dir(root()).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, v: &Value) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mat_close(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2], tol: f64) -> bool {
    (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() <= tol))
}

// Closed form for the single factor with ζ₁ = 1/2.
fn check_single_zeta_triangular(t: &TriangularFactorization) {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    assert!((t.a0 - 1.25f64.sqrt()).abs() <= 1e-12);
    assert!((t.m0 - one).norm() <= 1e-12);
    assert!(mat_close(t.l.coeff(0), [[one, z], [z, one]], 1e-12));
    assert!(mat_close(t.l.coeff(-1), [[z, c(0.5, 0.0)], [z, z]], 1e-12));
    assert!(mat_close(t.u.coeff(0), [[one, z], [z, one]], 1e-12));
    assert!(mat_close(t.u.coeff(1), [[z, z], [c(-0.5, 0.0), z]], 1e-12));
    for n in [-3, -2, 2, 3] {
        assert!(mat_close(t.l.coeff(n), [[z, z], [z, z]], 1e-12));
        assert!(mat_close(t.u.coeff(n), [[z, z], [z, z]], 1e-12));
    }
}

#[test]
fn forward_of_zero_coordinates_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let coords = write_tmp(&dir, "zero.json", &RootSubgroupCoordinates::zero(3).to_json());
    let v = json_of(&loopfact(&["forward", &coords]));
    let g = MatrixLoop::<Complex64>::from_json(&v["loop"]).unwrap();
    assert!(g.max_abs_diff_on(&MatrixLoop::identity(), g.window()) == 0.0);
    assert_eq!(v["diagnostics"]["unitary_defect"], json!(0.0));
}

#[test]
fn forward_single_zeta_matches_golden() {
    let out = loopfact(&["forward", "fixtures/single_zeta/coords.json"]);
    let golden = std::fs::read_to_string(fixture("single_zeta/forward.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout.clone()).unwrap(), golden);
    let v = json_of(&out);
    let t = TriangularFactorization::from_json(&v["triangular"]).unwrap();
    check_single_zeta_triangular(&t);
    // Re-multiplying the factors gives back the loop.
    let g = MatrixLoop::<Complex64>::from_json(&v["loop"]).unwrap();
    assert!(t.recompose().max_abs_diff_on(&g, g.window()) <= 1e-12);
}

#[test]
fn factor_single_zeta_matches_golden() {
    let out = loopfact(&["factor", "fixtures/single_zeta/forward.json"]);
    let golden = std::fs::read_to_string(fixture("single_zeta/factor.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout.clone()).unwrap(), golden);
    let v = json_of(&out);
    check_single_zeta_triangular(&TriangularFactorization::from_json(&v["triangular"]).unwrap());
    let b = BirkhoffFactorization::from_json(&v["birkhoff"]).unwrap();
    let a = 1.25f64.sqrt();
    assert!(mat_close(b.g_zero, [[c(a, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0 / a, 0.0)]], 1e-12));
    assert!((b.g_minus.coeff(-1)[0][1] - c(0.5, 0.0)).norm() <= 1e-12);
    assert!((b.g_plus.coeff(1)[1][0] - c(-0.5, 0.0)).norm() <= 1e-12);
}

#[test]
fn factor_identity_gives_identity_factors() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_tmp(&dir, "id.json", &MatrixLoop::<Complex64>::identity().to_json());
    let v = json_of(&loopfact(&["factor", &g, "--degree", "2"]));
    let t = TriangularFactorization::from_json(&v["triangular"]).unwrap();
    assert!(t.max_abs_diff(&TriangularFactorization::identity()) <= 1e-14);
}

#[test]
fn exit_codes() {
    assert_eq!(loopfact(&["factor", "fixtures/swap_loop.json"]).status.code(), Some(4));
    let out = loopfact(&["factor", "fixtures/lower_stratum_loop.json"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "NotTopStratum");
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"window\": ").unwrap();
    assert_eq!(loopfact(&["solve", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(loopfact(&["forward", "--degree", "8", "--toeplitz-size", "4"]).status.code(), Some(2));
    assert_eq!(loopfact(&["roundtrip", "--mode", "exact"]).status.code(), Some(2));
    assert_eq!(loopfact(&["verify", "--mode", "float"]).status.code(), Some(2));
}

#[test]
fn solve_identity_gives_zero_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_tmp(&dir, "id.json", &MatrixLoop::<Complex64>::identity().to_json());
    let v = json_of(&loopfact(&["solve", &g, "--degree", "3"]));
    let got = RootSubgroupCoordinates::from_json(&v).unwrap();
    assert!(got.max_abs_diff(&RootSubgroupCoordinates::zero(3)) <= 1e-14);
    assert_eq!(v["diagnostics"]["unitary"], json!(true));
}

#[test]
fn solve_recovers_forward_seed_42() {
    let dir = tempfile::tempdir().unwrap();
    let fwd = dir.path().join("fwd.json");
    let out = loopfact(&["forward", "--seed", "42", "--degree", "8", "-o", fwd.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&fwd).unwrap()).unwrap();
    assert!(doc["diagnostics"]["unitary_defect"].as_f64().unwrap() <= 1e-8);
    let v = json_of(&loopfact(&["solve", fwd.to_str().unwrap(), "--degree", "8"]));
    let want = RootSubgroupCoordinates::from_json(&doc["coordinates"]).unwrap();
    let got = RootSubgroupCoordinates::from_json(&v).unwrap();
    assert!(got.max_abs_diff(&want) <= 1e-8, "{}", got.max_abs_diff(&want));

    // ζ alone from g₊ agrees.
    let z = json_of(&loopfact(&["solve", fwd.to_str().unwrap(), "--degree", "8", "--zeta-only"]));
    assert_eq!(z["eta"], Value::Null);
    let zeta = RootSubgroupCoordinates::from_json(&z).unwrap().zeta;
    let err = zeta.iter().zip(&want.zeta).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err <= 1e-8);
}

#[test]
fn non_unitary_loop_omits_chi() {
    let dir = tempfile::tempdir().unwrap();
    let fwd = loopfact(&["forward", "--seed", "42", "--degree", "4"]);
    let doc = json_of(&fwd);
    let g = MatrixLoop::<Complex64>::from_json(&doc["loop"]).unwrap().scale(&c(1.1, 0.0));
    let path = write_tmp(&dir, "scaled.json", &g.to_json());
    let v = json_of(&loopfact(&["solve", &path, "--degree", "4"]));
    assert_eq!(v["chi"], Value::Null);
    assert_eq!(v["diagnostics"]["unitary"], json!(false));
    assert_eq!(v["eta"].as_array().unwrap().len(), 5);
    assert_eq!(v["zeta"].as_array().unwrap().len(), 4);
}

#[test]
fn roundtrip_reports_are_reproducible() {
    let args = ["roundtrip", "--trials", "5", "--degree", "4", "--seed", "9"];
    let a = loopfact(&args);
    let b = loopfact(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v["config"]["seed"], json!(9));
    assert!(v["summary"]["error_p100"].as_f64().unwrap() <= 1e-8);
    assert!(v["trials"][0].get("seconds").is_none());
    let t = json_of(&loopfact(&["roundtrip", "--trials", "2", "--degree", "3", "--timings"]));
    assert!(t["summary"]["seconds_p50"].as_f64().is_some());
}

#[test]
fn roundtrip_zero_decay_is_exact() {
    let v = json_of(&loopfact(&["roundtrip", "--trials", "1", "--rho", "0", "--degree", "4"]));
    assert!(v["summary"]["error_p100"].as_f64().unwrap() <= 1e-14);
}

#[test]
fn roundtrip_stress_does_not_crash() {
    let out = loopfact(&["roundtrip", "--trials", "5", "--rho", "0.95", "--degree", "8"]);
    let v = json_of(&out);
    assert_eq!(v["trials"].as_array().unwrap().len(), 5);
}

#[test]
fn config_file_is_read_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "degree = 3\ntrials = 2\nseed = 5\nrho = 0.4\n").unwrap();
    let v = json_of(&loopfact(&["roundtrip", "--config", cfg.to_str().unwrap(), "--seed", "6"]));
    assert_eq!(v["config"]["degree"], json!(3));
    assert_eq!(v["config"]["seed"], json!(6));
    assert_eq!(v["trials"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_stock_and_negative_fixtures() {
    let v = json_of(&loopfact(&["verify"]));
    assert_eq!(v["ok"], json!(true));
    assert_eq!(v["fixtures"].as_array().unwrap().len(), 3);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["ok"] == json!(true)));

    let out = loopfact(&["verify", "fixtures/oracle_negative"]);
    assert_eq!(out.status.code(), Some(5));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["fixtures"][0]["first_mismatch"], json!(2));

    let empty = tempfile::tempdir().unwrap();
    let out = loopfact(&["verify", empty.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn outputs_round_trip_through_their_parsers() {
    let doc = json_of(&loopfact(&["forward", "--seed", "3", "--degree", "3"]));
    let g = MatrixLoop::<Complex64>::from_json(&doc["loop"]).unwrap();
    assert_eq!(g.to_json(), doc["loop"]);
    let t = TriangularFactorization::from_json(&doc["triangular"]).unwrap();
    assert_eq!(t.to_json(), doc["triangular"]);
    let co = RootSubgroupCoordinates::from_json(&doc["coordinates"]).unwrap();
    assert_eq!(co.to_json(), doc["coordinates"]);

    let f = json_of(&loopfact(&["factor", "fixtures/single_zeta/forward.json"]));
    let b = BirkhoffFactorization::from_json(&f["birkhoff"]).unwrap();
    assert_eq!(b.to_json(), f["birkhoff"]);
}
