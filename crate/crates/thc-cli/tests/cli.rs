use std::process::{Command, Output};

fn thc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thc")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let o = thc(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

#[test]
fn table1_has_fifteen_rows() {
    let out = stdout(&["--format", "text", "table1"]);
    assert_eq!(out.lines().count(), 16);
    assert!(out.lines().next().unwrap().starts_with("class"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&["table1"])).unwrap();
    assert!(json.is_array() || json.is_object());
}

#[test]
fn ranks_in_low_degree() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["ranks", "compute", "--max-degree", "2"])).unwrap();
    assert_eq!(v["hilbert"], serde_json::json!([1, 9, 50]));
    assert_eq!(v["ranks"], serde_json::json!([9, 14]));
    assert_eq!(v["method"], "exact");
    let free: serde_json::Value =
        serde_json::from_str(&stdout(&["ranks", "compute", "--presentation", "free:2", "--max-degree", "3"])).unwrap();
    assert_eq!(free["hilbert"], serde_json::json!([1, 2, 4, 8]));
}

#[test]
fn graph_match_groups_the_first_family() {
    let out = stdout(&["--format", "text", "graphs", "match"]);
    assert!(out.lines().any(|l| l == "{x_{1,1}, x_{1,6}, x_{5,5}, x_{5,6}}"), "{out}");
}

#[test]
fn configs_validate_and_dot() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["configs", "validate", "--id", "1.1"])).unwrap();
    assert!(v.to_string().contains("1.1"));
    let dot = stdout(&["--format", "dot", "configs", "render-dot", "--id", "1.1"]);
    assert!(dot.starts_with("graph"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(thc(&["bogus"]).status.code(), Some(2));
    assert_eq!(thc(&["configs", "validate", "--id", "9.9"]).status.code(), Some(2));
    assert_eq!(thc(&["inflation", "check", "--table", "7"]).status.code(), Some(2));
    assert_eq!(thc(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("thc-cli-test-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = thc(&["--output", p, "ranks", "compute", "--max-degree", "1"]);
    assert!(o.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(written.contains("\"hilbert\""));
}

#[test]
fn output_is_deterministic() {
    let args = ["graphs", "match"];
    assert_eq!(stdout(&args), stdout(&args));
}
