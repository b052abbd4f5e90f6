use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn sdsproof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdsproof")).current_dir(root()).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sdsproof-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn enumerate_and_canon_counts() {
    let o = sdsproof(&["enumerate", "-m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "13\n");
    let o = sdsproof(&["canon", "--count", "-m", "3", "-n", "4"]);
    assert_eq!(stdout(&o), "335\n");
}

#[test]
fn example_profile() {
    let o = sdsproof(&["rsd", "data/example1.profile"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "7/24*a + 7/24*b + 5/24*c + 5/24*d\n");
    let o = sdsproof(&["orbits", "data/example1.profile"]);
    assert!(stdout(&o).contains("{a,b}") && stdout(&o).contains("{c,d}"), "{}", stdout(&o));
}

#[test]
fn appendix_replay_and_rsd_check() {
    let o = sdsproof(&["verify-appendix", "data/appendix"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    // RSD is not SD-efficient, so it breaks some efficiency clause
    let o = sdsproof(&["check-rsd", "data/appendix"]);
    assert_eq!(o.status.code(), Some(1));
    let o = sdsproof(&["check-rsd", "--full", "-m", "3", "-n", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn expand_then_verify() {
    let domain = scratch("domain.txt");
    let o = sdsproof(&["expand", "--seed", "data/example1.profile", "--schedule", "1", "--out", domain.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = sdsproof(&["verify-unsat", "--domain", domain.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "Sat\n");
    let smt = scratch("domain.smt2");
    let o = sdsproof(&["encode", "--domain", domain.to_str().unwrap(), "--named", "--out", smt.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&smt).unwrap();
    assert!(text.contains("(set-logic QF_LRA)") && text.contains(":named"));
}

#[test]
fn error_exit_codes() {
    assert_eq!(sdsproof(&["rsd", "no/such/file"]).status.code(), Some(2));
    assert_eq!(sdsproof(&["enumerate"]).status.code(), Some(2));
    assert_eq!(sdsproof(&["canon", "--count", "-m", "4"]).status.code(), Some(2));
    let o = sdsproof(&["solve", "data/appendix", "--solver", "/no/such/solver"]);
    assert_eq!(o.status.code(), Some(3));
}

fn check_report(report: &Value, schema: &Value, exit: i32) {
    let obj = report.as_object().expect("report is an object");
    for key in schema["required"].as_array().unwrap() {
        assert!(obj.contains_key(key.as_str().unwrap()), "missing {key}");
    }
    let commands = schema["properties"]["command"]["enum"].as_array().unwrap();
    assert!(commands.contains(&report["command"]));
    assert!(report["wall_seconds"].as_f64().unwrap() >= 0.0);
    assert!(report["parameters"].is_object() && report["result"].is_object());
    assert!(report["status"].is_string());
    assert_eq!(report["exit_code"].as_i64(), Some(exit as i64));
}

#[test]
fn json_reports_follow_the_schema() {
    let schema: Value = serde_json::from_str(&fs::read_to_string(root().join("data/run_report.schema.json")).unwrap()).unwrap();
    let runs: [&[&str]; 5] = [
        &["--json", "enumerate", "-m", "2"],
        &["--json", "rsd", "data/example1.profile"],
        &["--json", "eff", "data/example1.profile"],
        &["--json", "verify-appendix", "data/appendix"],
        &["--json", "check-rsd", "data/appendix"],
    ];
    for args in runs {
        let o = sdsproof(args);
        let report: Value = serde_json::from_slice(&o.stdout).expect("stdout is one JSON document");
        check_report(&report, &schema, o.status.code().unwrap());
    }
}
