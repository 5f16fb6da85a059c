use std::process::{Command, Output};

use serde_json::Value;

fn cext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cext"))
        .args(args)
        .env_remove("CEXT_BUDGET")
        .output()
        .expect("spawn cext")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn invalid_field_spec_fails() {
    for f in ["Fp:4", "Fp:", "R", "Fp:1"] {
        let out = cext(&["cohomology", "--algebra", "mu0:3", "--variety", "lc", "--field", f]);
        assert!(!out.status.success(), "{f} accepted");
    }
}

#[test]
fn unknown_variety_and_small_char_fail() {
    assert!(!cext(&["cohomology", "--algebra", "mu0:3", "--variety", "lie"]).status.success());
    let out = cext(&["cohomology", "--algebra", "mu0:3", "--variety", "jordan", "--field", "Fp:3"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("too small"));
}

#[test]
fn cohomology_dims() {
    let v = json_of(&cext(&["cohomology", "--algebra", "mu0:5", "--variety", "lc"]));
    assert_eq!(v["dimZ"], 9);
    assert_eq!(v["dimB"], 4);
    assert_eq!(v["dimH"], 5);
    assert_eq!(v["H_reps"].as_array().unwrap().len(), 5);
    let v = json_of(&cext(&["cohomology", "--algebra", "mu0:4", "--variety", "bc", "--field", "Fp:7"]));
    assert_eq!((v["dimZ"].as_u64(), v["dimH"].as_u64()), (Some(5), Some(2)));
}

#[test]
fn cohomology_from_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let alg = dir.path().join("a.json");
    let ext = json_of(&cext(&["extend", "--algebra", "mu0:3", "--variety", "as", "--cocycle", "named:nabla_3"]));
    std::fs::write(&alg, ext["algebra"].to_string()).unwrap();
    let a = alg.to_str().unwrap();
    let from_file = json_of(&cext(&["cohomology", "--algebra", a, "--variety", "as"]));
    let direct = json_of(&cext(&["cohomology", "--algebra", "mu0:4", "--variety", "as"]));
    assert_eq!(from_file, direct);
    assert!(!cext(&["cohomology", "--algebra", a, "--variety", "as", "--field", "Fp:5"]).status.success());
}

#[test]
fn extend_reports_flags() {
    let v = json_of(&cext(&[
        "extend",
        "--algebra",
        "mu0:3",
        "--variety",
        "lc",
        "--cocycle",
        "expr:nabla_3 + 3*delta_2_1",
    ]));
    assert_eq!(v["non_split"], true);
    assert_eq!(v["in_T1"], true);
    assert_eq!(v["annihilator_dim"], 1);
    assert_eq!(v["algebra"]["dim"], 4);

    let v = json_of(&cext(&[
        "extend",
        "--algebra",
        "mu0:4",
        "--variety",
        "lc",
        "--cocycle",
        "named:delta_2_1",
        "--cocycle",
        r#"[["0","0","0","1"],["0","0","1","0"],["0","1","0","0"],["1","0","0","0"]]"#,
    ]));
    assert_eq!(v["algebra"]["dim"], 6);
    assert_eq!(v["non_split"], true);

    let out = cext(&["extend", "--algebra", "mu0:3", "--variety", "lc", "--cocycle", "named:delta_1_3"]);
    assert!(!out.status.success());
}

#[test]
fn aut_and_act() {
    let v = json_of(&cext(&["aut", "--n", "3", "--field", "Fp:5", "--col", "2,1,0"]));
    assert_eq!(v["matrix"][2], serde_json::json!(["0", "4", "3"]));
    assert!(!cext(&["aut", "--n", "3", "--col", "0,1,0"]).status.success());

    // φ·∇₄ = a₁⁵∇₄ + coboundary for the first-column scaling a₁ = 2.
    let v = json_of(&cext(&["act", "--n", "4", "--cocycle", "named:nabla_4", "--col", "2,0,0,0"]));
    assert_eq!(v["H_coords"], serde_json::json!(["0", "0", "0", "32"]));
}

#[test]
fn classify_bc_small() {
    let v = json_of(&cext(&["classify", "--n", "3", "--variety", "bc", "--field", "Fp:5"]));
    assert_eq!(v["orbits"].as_array().unwrap().len(), 2);
    assert_eq!(v["closure_verified"], true);
    let g = json_of(&cext(&["classify", "--n", "2", "--variety", "lc", "--field", "Fp:3", "--grassmann"]));
    assert_eq!(g["domain"], "H2");
    assert!(!cext(&["classify", "--n", "3", "--variety", "novikov", "--field", "Fp:5"]).status.success());
}

#[test]
fn budget_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_cext"))
        .args(["classify", "--n", "4", "--variety", "lc", "--field", "Fp:3"])
        .env("CEXT_BUDGET", "10")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn verify_table1_all_rows_pass() {
    let v = json_of(&cext(&["verify-table1", "--n", "4"]));
    assert_eq!(v["all_pass"], true);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["pass"] == true));
    assert!(rows.iter().any(|r| r["label"] == "nabla_4 + delta_2_1"));
}

#[test]
fn reproduce_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let out = cext(&["reproduce", "--n-max", "3", "--primes", "3", "--seed", "7", "--output", p.to_str().unwrap()]);
        assert!(out.status.success());
        std::fs::read(p).unwrap()
    };
    let a = run("a.json");
    assert_eq!(a, run("b.json"));
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn identities_catalog() {
    let v = json_of(&cext(&["identities", "list"]));
    assert_eq!(v.as_array().unwrap().len(), 10);
    let jordan = v.as_array().unwrap().iter().find(|x| x["name"] == "jordan").unwrap();
    assert_eq!(jordan["char_exclusions"], serde_json::json!([2, 3]));
}
