use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("opspace").chain(args.iter().copied());
    let code = opspace::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("valid JSON")
}

#[test]
fn car_suite_passes() {
    let (code, out, _) = run(&["verify", "--suite", "car", "--n", "4"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["schema"], "opspace/1");
    let check = &v["suites"][0]["checks"][0];
    assert!(check["value"].as_f64().unwrap() <= 1e-12);
    assert_eq!(check["pass"], true);
}

#[test]
fn row_column_distance_is_n() {
    let (code, out, _) = run(&["distance", "--pair", "Rn:Cn", "--n", "5"]);
    assert_eq!(code, 0);
    let e = &json(&out)["entries"][0];
    assert_eq!(e["pair"], "R_5:C_5");
    assert!((e["product_lower"].as_f64().unwrap() - 5.0).abs() < 1e-9);
    assert_eq!(e["closed_form"].as_f64(), Some(5.0));
}

#[test]
fn output_is_byte_identical() {
    for args in [
        &["verify", "--suite", "projection", "--n", "3", "--seed", "7"][..],
        &["distance", "--pair", "Cn:Hm", "--m", "1", "--n", "4", "--seed", "7"][..],
    ] {
        let (_, a, _) = run(args);
        let (_, b, _) = run(args);
        assert_eq!(a, b);
    }
}

#[test]
fn seed_falls_back_to_environment() {
    let bin = env!("CARGO_BIN_EXE_opspace");
    let args = ["distance", "--pair", "Phin:H2", "--n", "3", "--samples", "5"];
    let via_env = Command::new(bin).args(args).env("OPSPACE_SEED", "123").output().unwrap();
    let via_flag = Command::new(bin).args(args).args(["--seed", "123"]).env_remove("OPSPACE_SEED").output().unwrap();
    assert_eq!(via_env.status.code(), Some(0));
    assert_eq!(via_env.stdout, via_flag.stdout);
    assert_eq!(json(std::str::from_utf8(&via_env.stdout).unwrap())["seed"], 123);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--n", "4", "--bogus"][..],
        &["verify", "--suite", "nope", "--n", "4"][..],
        &["verify", "--suite", "grid", "--n", "9"][..],
        &["verify", "--suite", "fock", "--n", "4", "--k", "5"][..],
        &["distance", "--pair", "Rn", "--n", "4"][..],
        &["distance", "--pair", "Hk:Cn", "--n", "4"][..],
        &["build", "--space", "hnk", "--n", "4"][..],
        &["classify", "--input", "/nonexistent/family.json"][..],
        &["verify", "--n", "3", "--structural-tol", "-1"][..],
        &[][..],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
    let bin = env!("CARGO_BIN_EXE_opspace");
    let status = Command::new(bin).args(["distance", "--n", "3"]).output().unwrap().status;
    assert_eq!(status.code(), Some(2));
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn classify_round_trip_through_build() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("family.json");
    let p = path.to_str().unwrap();
    let (code, _, _) = run(&["build", "--space", "intersection", "--n", "4", "--levels", "1,3", "-o", p]);
    assert_eq!(code, 0);
    let (code, out, _) = run(&["classify", "--input", p]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["components"], serde_json::json!([1, 3]));
    assert_eq!(v["verdict"], "H_4^1 ∩ H_4^3");
    assert_eq!(v["i_r"], 3);
    assert_eq!(v["i_l"], 4);

    run(&["build", "--space", "row", "--n", "3", "-o", p]);
    let v = json(&run(&["classify", "--input", p]).1);
    assert_eq!(v["verdict"], "R_3");
    assert_eq!(v["tro"], "R");
}

#[test]
fn non_collinear_family_is_a_check_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("family.json");
    std::fs::write(
        &path,
        r#"[{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[0,0]]},
            {"rows":2,"cols":2,"data":[[0,0],[0,0],[0,0],[1,0]]}]"#,
    )
    .unwrap();
    let (code, _, err) = run(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("elements 1 and 2"), "{err}");
}

#[test]
fn csv_output() {
    let (code, out, _) = run(&["distance", "--pair", "Rn:Cn", "--n", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("pair,n,forward_lower,inverse_lower,product_lower,closed_form,diverging")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "R_3:C_3");
    assert!((row[4].parse::<f64>().unwrap() - 3.0).abs() < 1e-9);
    assert_eq!(row[6], "true");
}

#[test]
fn full_table() {
    let (code, out, _) = run(&["distance", "--pair", "all", "--n", "3", "--samples", "10"]);
    assert_eq!(code, 0);
    let entries = json(&out)["entries"].as_array().unwrap().len();
    // C_3, R_3, H_3^1..H_3^3, Phi_3.
    assert_eq!(entries, 15);
}

#[test]
fn uij_build() {
    let (code, out, _) = run(&["build", "--space", "uij", "--n", "4", "--k", "2", "--left", "1", "--right", "3,4"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["matrix"]["rows"], 6);
    assert_eq!(v["matrix"]["cols"], 4);
}
