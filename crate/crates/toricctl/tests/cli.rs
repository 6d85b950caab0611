use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn toricctl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricctl")).args(args).env_remove("TORICCTL_SEED").output().unwrap()
}

fn result(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    assert_eq!(v["tool"], "toricctl");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["provenance"].as_str().is_some_and(|s| !s.is_empty()));
    v["result"].clone()
}

#[test]
fn analyze_cp2() {
    let out = toricctl(&["fan", "analyze", &fixture("cp2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = result(&out);
    assert_eq!(r["smooth"], true);
    assert_eq!(r["complete"], true);
    assert_eq!(r["r_min"], 3);
    assert_eq!(r["primitive_collections"], serde_json::json!([[0, 1, 2]]));
}

#[test]
fn builtin_and_file_hash_alike() {
    let a = result_envelope(&toricctl(&["fan", "analyze", &fixture("hirzebruch2.json")]));
    let b = result_envelope(&toricctl(&["fan", "analyze", "hirzebruch(2)"]));
    assert_eq!(a["input_hash"], b["input_hash"]);
}

fn result_envelope(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn parse_errors_exit_2_with_pointer() {
    let out = toricctl(&["fan", "analyze", &fixture("truncated.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["message"].as_str().unwrap().contains("malformed JSON"));
    assert_eq!(toricctl(&["fan", "frobnicate"]).status.code(), Some(2));
}

#[test]
fn invalid_fan_exit_3() {
    let out = toricctl(&["fan", "validate", &fixture("overlapping.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(result(&out)["violations"][0]["kind"], "bad_intersection");
    let out = toricctl(&["stability", "report", "--fan", &fixture("overlapping.json"), "--degrees", "1,1,1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn membership_verdicts() {
    let cp1 = fixture("cp1.json");
    for sys in ["cp1_planted_double.json", "cp1_planted_double_roots.json"] {
        let out = toricctl(&["poly", "check", "--fan", &cp1, "--system", &fixture(sys), "--n", "2"]);
        assert_eq!(out.status.code(), Some(0));
        let r = result(&out);
        assert_eq!(r["member"], false, "{sys}");
        assert_eq!(r["witness"]["collection"], serde_json::json!([0, 1]));
    }
    let r = result(&toricctl(&["poly", "check", "--fan", &cp1, "--system", &fixture("cp1_clean.json"), "--n", "2"]));
    assert_eq!(r["member"], true);
    let r = result(&toricctl(&["poly", "check", "--fan", &cp1, "--system", &fixture("cp1_clean.json"), "--n", "3"]));
    assert_eq!(r["member"], true);
    assert!(r["note"].as_str().unwrap().contains("contractible"));
    let r = result(&toricctl(&["poly", "check", "--fan", &fixture("hirzebruch1.json"), "--system", &fixture("h1_clean_roots.json"), "--n", "2"]));
    assert_eq!(r["member"], true);
}

#[test]
fn shape_mismatch_exit_4() {
    let out = toricctl(&["poly", "check", "--fan", &fixture("cp2.json"), "--system", &fixture("cp1_clean.json"), "--n", "2"]);
    assert_eq!(out.status.code(), Some(4));
    let out = toricctl(&["stability", "report", "--fan", &fixture("cp2.json"), "--degrees", "1,2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn band_cap_exit_5() {
    assert_eq!(toricctl(&["oracle", "band", "--d-prime-max", "13"]).status.code(), Some(5));
    let out = toricctl(&["stability", "report", "--fan", "hirzebruch(1)", "--degrees", "27,27,27,60", "--n", "2"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn stabilize_and_jet() {
    let out = toricctl(&["poly", "stabilize", "--system", &fixture("cp1_planted_double_roots.json"), "--shift", "1,2"]);
    let r = result(&out);
    assert_eq!(r["degrees_before"], serde_json::json!([3, 2]));
    assert_eq!(r["degrees_after"], serde_json::json!([4, 4]));
    let out = toricctl(&["poly", "stabilize", "--system", &fixture("cp1_clean.json"), "--shift", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    // f_1 = (z-1)^2 (z+2) at 1: value 0, f + f' = 0
    let r = result(&toricctl(&["poly", "jet", "--system", &fixture("cp1_planted_double.json"), "--n", "2", "--at", "1,0"]));
    assert_eq!(r["exact"], true);
    assert_eq!(r["zero_blocks"], serde_json::json!([0, 1]));
}

#[test]
fn oracle_output_is_reproducible_and_seed_from_env() {
    let args = ["oracle", "jetsection", "--trials", "20"];
    let a = toricctl(&args);
    let b = toricctl(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_toricctl")).args(args).env("TORICCTL_SEED", "99").output().unwrap();
    let env: Value = serde_json::from_slice(&c.stdout).unwrap();
    assert_eq!(env["seed"], 99);
    assert_eq!(env["result"]["all_passed"], true);
}

#[test]
fn oracles_pass_from_cli() {
    for args in [
        &["oracle", "vandermonde", "--k", "2", "--n", "2", "--d", "6", "--trials", "10"][..],
        &["oracle", "band", "--trials", "10"],
        &["oracle", "complement", "--fan", &fixture("hirzebruch3.json"), "--samples", "100"],
    ] {
        let out = toricctl(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(result(&out)["failed"], 0);
    }
}

#[test]
fn stability_commands() {
    let r = result(&toricctl(&["stability", "report", "--fan", &fixture("hirzebruch1.json"), "--degrees", "5,7,5,12", "--n", "2"]));
    assert_eq!(r["stability_dim"], 8);
    assert_eq!(r["connectivity"], 3);
    assert_eq!(r["band"]["min"], 10);
    assert_eq!(r["degree_null"], true);
    let r = result(&toricctl(&["stability", "report", "--fan", &fixture("hirzebruch1.json"), "--degrees", "5,7,5,12", "--n", "1"]));
    assert_eq!(r["stability_dim"], 3);
    assert_eq!(r["equivalence"], "homology");
    let out = toricctl(&["stability", "e1", "--fan", "hirzebruch(1)", "--degrees", "5,7,5,12", "--n", "2", "--text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 20 && text.contains('~'));
    let r = result(&toricctl(&["stability", "projective", "--d", "6", "--m", "2", "--n", "2"]));
    assert_eq!(r["stability_dim"], 19);
    assert_eq!(toricctl(&["stability", "projective", "--d", "6", "--m", "1", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn power_commands() {
    let r = result(&toricctl(&["fan", "power", &fixture("cp1.json"), "--n", "2"]));
    assert_eq!(r["complex_matches_power_complex"], true);
    assert_eq!(r["cone_count"], 15);
    assert_eq!(r["validation"]["valid"], false);
    let r = result(&toricctl(&["complex", "power", &fixture("cp1.json"), "--n", "2"]));
    assert_eq!(r["face_count"], 15);
    assert_eq!(r["minimal_non_faces"], serde_json::json!([[0, 1, 2, 3]]));
    let r = result(&toricctl(&["complex", "primitives", &fixture("hirzebruch2.json")]));
    assert_eq!(r["one_based"], serde_json::json!([[1, 3], [2, 4]]));
}
