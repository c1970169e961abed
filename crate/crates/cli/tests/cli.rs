use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lineadm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ex(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn analyze_first_example() {
    let o = run(&["analyze", &ex("ex1.arr")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("|M| = 6, condition (C): yes, cycles: 0, strategy: no-cycle"), "{text}");
    assert!(text.contains("system sample: ADMISSIBLE"));
}

#[test]
fn analyze_second_example() {
    let text = stdout(&run(&["analyze", &ex("ex2.arr")]));
    assert!(text.contains("|M| = 6, condition (C): yes, cycles: 2, strategy: none"), "{text}");
    assert!(text.contains("system paper: NOT ADMISSIBLE (obstruction)"));
    assert!(text.contains("system trivial: ADMISSIBLE"));
}

#[test]
fn half_classes_on_both_triangles_are_not_admissible() {
    let o = run(&["admissible", &ex("ex2.arr"), "--system", "paper"]);
    assert_eq!(o.status.code(), Some(4));
    let text = stdout(&o);
    assert!(text.contains("NOT ADMISSIBLE (obstruction)"));
    assert!(text.contains("b_1 = b_2 = b_3 = 0 which is impossible"));
}

#[test]
fn tiny_budget_is_not_covered() {
    let o = run(&["admissible", &ex("ex2.arr"), "--system", "paper", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("NOT COVERED"));
}

#[test]
fn base_line_override() {
    let o = run(&["admissible", &ex("ex1.arr"), "--h0", "L_0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("h0 = L_0"));
    assert_eq!(run(&["admissible", &ex("ex1.arr"), "--h0", "L_99"]).status.code(), Some(2));
    assert_eq!(run(&["admissible", &ex("ex1.arr"), "--system", "nope"]).status.code(), Some(2));
}

#[test]
fn oracle_reports_bound() {
    let o = run(&["oracle", &ex("ex1.arr"), "--bound", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("found at K = 2"));
}

#[test]
fn render_counts_and_determinism() {
    let a = stdout(&run(&["render", &ex("ex1.arr")]));
    let b = stdout(&run(&["render", &ex("ex1.arr")]));
    assert_eq!(a, b);
    assert_eq!(a.matches("class=\"arr-line").count(), 13);
    assert_eq!(a.matches("class=\"arr-line at-infinity\"").count(), 1);
    assert_eq!(a.matches("class=\"m-point\"").count(), 6);
    assert!(a.starts_with("<svg"));
}

#[test]
fn json_certificates_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let r = report.display().to_string();
    let o = run(&["analyze", &ex("ex1.arr"), "--format", "json", "--out", &r]);
    assert_eq!(o.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(value["m_count"], 6);
    assert_eq!(value["systems"][0]["verdict"], "admissible");

    let o = run(&["verify", &ex("ex1.arr"), &r]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 certificate(s) verified"));

    // Shifting one residue by a non-integer breaks exp-compatibility.
    let tampered = std::fs::read_to_string(&report).unwrap().replacen("\"value\": \"1/2\"", "\"value\": \"1/3\"", 1);
    std::fs::write(&report, tampered).unwrap();
    assert_ne!(run(&["verify", &ex("ex1.arr"), &r]).status.code(), Some(0));
}

#[test]
fn json_output_is_stable() {
    let a = stdout(&run(&["admissible", &ex("ex1.arr"), "--format", "json"]));
    let b = stdout(&run(&["admissible", &ex("ex1.arr"), "--format", "json"]));
    assert_eq!(a, b);
    let keys: Vec<String> = serde_json::from_str::<serde_json::Value>(&a).unwrap()[0]
        .as_object()
        .unwrap()
        .keys()
        .cloned()
        .collect();
    assert!(keys.contains(&"certificate".to_string()));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.arr");
    std::fs::write(&path, "[arrangement bad]\nL_0: 1 0 0\nL_1: 0 1 0\nL_2: 1 1 0.5\n").unwrap();
    let o = run(&["analyze", &path.display().to_string()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
}

#[test]
fn size_guard_exits_five() {
    let o = run(&["multinet", &ex("ex2.arr"), "--guard", "5"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn multinets_on_pencil_and_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pencil.arr");
    std::fs::write(&path, "[arrangement pencil]\nA: 1 0 0\nB: 0 1 0\nC: 1 1 0\nD: 1 -1 0\n").unwrap();
    let text = stdout(&run(&["multinet", &path.display().to_string()]));
    assert!(text.contains("(4, 1)"), "{text}");
    assert!(text.contains("global component of dimension 3"), "{text}");
    let text = stdout(&run(&["multinet", &ex("ex1.arr")]));
    assert!(text.starts_with("multinets: 0"));
    assert!(text.contains("no global component"));
}

#[test]
fn generate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.arr");
    let p = path.display().to_string();
    let o = run(&["generate", "--seed", "1", "--lines", "8", "--system-seed", "3", "--out", &p]);
    assert_eq!(o.status.code(), Some(0));
    let first = std::fs::read_to_string(&path).unwrap();
    run(&["generate", "--seed", "1", "--lines", "8", "--system-seed", "3", "--out", &p]);
    assert_eq!(first, std::fs::read_to_string(&path).unwrap());
    let text = stdout(&run(&["analyze", &p]));
    assert!(text.contains("condition (C): yes"), "{text}");
    assert!(text.contains("system random:"));
}
