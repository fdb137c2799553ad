use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coadstrat"))
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("coadstrat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn fixture_part(name: &str, key: &str) -> PathBuf {
    let text = std::fs::read_to_string(fixture_dir().join(format!("{name}.json"))).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    scratch(&format!("{name}-{key}.json"), &v[key].to_string())
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn heisenberg_fixture_run_passes() {
    let out = bin().args(["fixtures", "run", "heisenberg-3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    let checks = v["fixtures"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["check"] == "stratum count" && c["detail"].as_str().unwrap().contains('2')));
}

#[test]
fn free_two_generators_depth_two_has_dimension_three() {
    let out = bin().args(["free", "--weights", "1,1", "--depth", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["words"].as_array().unwrap().len(), 3);
}

#[test]
fn empty_points_give_empty_buckets() {
    let algebra = fixture_part("heisenberg-3", "algebra");
    let points = scratch("empty.json", "[]");
    let out = bin().arg("classify").arg(&algebra).arg("--points").arg(&points).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["strata"].as_array().unwrap().is_empty());
    assert!(v["coarse"].as_array().unwrap().is_empty());
}

#[test]
fn output_is_deterministic() {
    let algebra = fixture_part("engel", "algebra");
    let run = || bin().arg("classify").arg(&algebra).args(["--random", "300", "--seed", "5"]).output().unwrap().stdout;
    assert_eq!(run(), run());
}

#[test]
fn canonicalize_engel_point() {
    let algebra = fixture_part("engel", "algebra");
    let out = bin().arg("canonicalize").arg(&algebra).arg("1,1,1,1").output().unwrap();
    let v = json(&out);
    assert_eq!(v["canonical"], serde_json::json!(["1", "0", "1/2", "0"]));
}

#[test]
fn osculating_martinet_origin_is_four_dimensional() {
    let filtration = fixture_part("martinet", "filtration");
    let out = bin().arg("osculating").arg(&filtration).arg("0,0,0").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["algebra"]["dim"], 4);
}

#[test]
fn hn_limit_on_grushin_line() {
    let filtration = fixture_part("grushin-2", "filtration");
    let curve = scratch("curve.json", r#"{"base": ["2*s", "1"], "covector": ["0", "s^-3"]}"#);
    let out = bin().arg("hn-limit").arg(&filtration).arg(&curve).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["covector"], serde_json::json!(["1", "2", "2", "0"]));
}

#[test]
fn report_writes_to_out_file() {
    let filtration = fixture_part("grushin-1", "filtration");
    let target = std::env::temp_dir().join(format!("coadstrat-report-{}.json", std::process::id()));
    let out = bin()
        .arg("report")
        .arg(&filtration)
        .args(["--point", "0,1", "--budget", "16"])
        .arg("--out")
        .arg(&target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["schema"], "coadstrat-report/1");
    assert_eq!(v["fibers"].as_array().unwrap().len(), 1);
    assert!(v["skeleton"]["chain"].is_array());
}

#[test]
fn exit_codes() {
    let bad_json = scratch("bad.json", "{\"label\": \"x\",\n \"dim\": ");
    let out = bin().arg("validate").arg(&bad_json).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let jacobi = scratch(
        "broken.json",
        r#"{"label": "broken", "dim": 3, "weights": [2, 1, 1],
            "brackets": [{"i": 3, "j": 2, "coeffs": {"1": "1"}}, {"i": 2, "j": 3, "coeffs": {"1": "1"}}]}"#,
    );
    let out = bin().arg("validate").arg(&jacobi).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);

    let out = bin().args(["free", "--depth", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["free", "--weights", "0,1", "--depth", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
