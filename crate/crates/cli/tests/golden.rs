use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run(args: &[String]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_ress")).args(args).output().expect("ress runs");
    (out.stdout, out.status.code().expect("exit code"))
}

fn args_of(cmd: &Value) -> Vec<String> {
    cmd["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap().to_owned()).collect()
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut cases: Vec<PathBuf> = fs::read_dir(fixtures())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(".cmd.json"))
        .collect();
    cases.sort();
    assert!(!cases.is_empty());
    let mut failures = Vec::new();
    for case in cases {
        let name = case.file_name().unwrap().to_string_lossy().trim_end_matches(".cmd.json").to_owned();
        let cmd: Value = serde_json::from_str(&fs::read_to_string(&case).unwrap()).unwrap();
        let args = args_of(&cmd);
        let (first, code) = run(&args);
        let (second, _) = run(&args);
        if first != second {
            failures.push(format!("{name}: output differs between runs"));
        }
        if i64::from(code) != cmd["exit"].as_i64().unwrap() {
            failures.push(format!("{name}: exit {code}, expected {}", cmd["exit"]));
        }
        if serde_json::from_slice::<Value>(&first).is_err() {
            failures.push(format!("{name}: stdout is not JSON"));
        }
        let golden = case.with_file_name(format!("{name}.out"));
        if update {
            fs::write(&golden, &first).unwrap();
        } else if fs::read(&golden).ok().as_deref() != Some(first.as_slice()) {
            failures.push(format!("{name}: stdout differs from {}", golden.display()));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

fn stdout_json(args: &[&str]) -> Value {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (out, code) = run(&args);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&out));
    serde_json::from_slice(&out).unwrap()
}

fn reclassify(report: &Value, field: &str) -> Value {
    let a = report["model"]["A"].to_string();
    let b = report["model"]["B"].to_string();
    let w = report["model"]["weight"].to_string();
    stdout_json(&["classify", "--field", field, "--A", &a, "--B", &b, "--weight", &w])
}

#[test]
fn echoed_models_reclassify_to_the_same_fibres() {
    let reports = [
        (stdout_json(&["gen", "--family", "i2", "--params", r#"{"Q1":[0,0,1],"Q2":[1]}"#]), "q"),
        (stdout_json(&["gen", "--family", "33", "--params", r#"{"alpha":"2","lambda":"-1"}"#]), "q-sqrt:3"),
        (
            stdout_json(&["quartic", "normal-form", "--case", "two_conics", "--params", r#"{"a":2,"b":3}"#]),
            "q",
        ),
        (stdout_json(&["quartic", "chisini", "--gamma", "2"]), "q"),
    ];
    for (report, field) in reports {
        let again = reclassify(&report, field);
        for key in ["classes", "special_type", "euler_number", "types"] {
            assert_eq!(again[key], report[key], "{key}");
        }
    }
}

#[test]
fn classify_accepts_both_scalar_spellings() {
    let quoted = stdout_json(&["classify", "--A", r#"["0"]"#, "--B", r#"["-1",0,0,0,0,0,"1"]"#]);
    let bare = stdout_json(&["classify", "--A", "[0]", "--B", "[-1,0,0,0,0,0,1]"]);
    assert_eq!(quoted, bare);
}
