use std::fs;
use std::path::PathBuf;

use assert_cmd::Command;
use predicates::prelude::*;

use qbelief_cli::render::FusionReport;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    fs::read_to_string(path).unwrap()
}

fn qbelief() -> Command {
    Command::cargo_bin("qbelief").unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let output = qbelief().args(args).output().unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).unwrap()
}

#[test]
fn numeric_pair_pcr5_deferred() {
    let file = fixture("numeric_pair.json");
    qbelief()
        .arg("fuse")
        .arg(&file)
        .args([
            "--rule",
            "pcr5",
            "--approx",
            "deferred",
            "--confidence",
            "min",
        ])
        .assert()
        .success()
        .stdout(predicate::str::contains(
            "A: L4(0.3)  B: L2(0.3)  A|B: L0(0.8)  A&B: L0(1)",
        ))
        .stdout(predicate::str::contains("quasi-normalized: yes"));
}

#[test]
fn numeric_pair_conjunctive_deferred_is_not_quasi_normalized() {
    let file = fixture("numeric_pair.json");
    qbelief()
        .arg("fuse")
        .arg(&file)
        .args(["--rule", "conjunctive", "--approx", "deferred"])
        .assert()
        .success()
        .stdout(predicate::str::contains("A&B: L2(0.3)"))
        .stdout(predicate::str::contains("quasi-normalized: no"));
}

#[test]
fn golden_tables() {
    let t1 = fixture("numeric_pair.json");
    let t2 = fixture("qualitative_pair.json");
    let three = fixture("three_sources.json");
    let (t1, t2, three) = (
        t1.to_str().unwrap(),
        t2.to_str().unwrap(),
        three.to_str().unwrap(),
    );
    let cases: [(&[&str], &str); 7] = [
        (
            &["fuse", t1, "--rule", "conjunctive", "--approx", "stepwise"],
            "numeric_conjunctive_stepwise.txt",
        ),
        (
            &["fuse", t1, "--rule", "conjunctive", "--approx", "deferred"],
            "numeric_conjunctive_deferred.txt",
        ),
        (&["fuse", t1, "--trace"], "numeric_pcr5_deferred_trace.txt"),
        (&["fuse", t1, "--format", "json"], "numeric_pcr5.json"),
        (
            &["fuse", t2, "--rule", "conjunctive", "--approx", "stepwise"],
            "qualitative_conjunctive.txt",
        ),
        (
            &[
                "fuse",
                t2,
                "--rule",
                "pcr5",
                "--approx",
                "stepwise",
                "--unicode",
            ],
            "qualitative_pcr5_unicode.txt",
        ),
        (
            &[
                "fuse",
                three,
                "--sources",
                "s1,s2",
                "--rule",
                "pcr5",
                "--approx",
                "stepwise",
                "--confidence",
                "interval",
            ],
            "three_sources_pcr5.txt",
        ),
    ];
    for (args, expected) in cases {
        assert_eq!(stdout_of(args), golden(expected), "{expected}");
    }
}

#[test]
fn qualitative_pcr5_rows_in_both_modes() {
    let file = fixture("qualitative_pair.json");
    let file = file.to_str().unwrap();
    for approx in ["stepwise", "deferred"] {
        let text = stdout_of(&["fuse", file, "--rule", "pcr5", "--approx", approx]);
        let row: Vec<&str> = text
            .lines()
            .find(|l| l.starts_with("qmPCR5"))
            .unwrap()
            .split_whitespace()
            .collect();
        assert_eq!(
            row,
            ["qmPCR5", "L4(NB)", "L2(NB)", "L0(NS)", "L0(O)"],
            "{approx}"
        );
    }
}

#[test]
fn output_is_deterministic_and_input_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("problem.json");
    fs::copy(fixture("numeric_pair.json"), &path).unwrap();
    let before = fs::read(&path).unwrap();
    let path = path.to_str().unwrap();
    let first = stdout_of(&["fuse", path, "--trace", "--format", "json"]);
    let second = stdout_of(&["fuse", path, "--trace", "--format", "json"]);
    assert_eq!(first, second);
    assert_eq!(fs::read(path).unwrap(), before);
}

#[test]
fn json_output_parses_back() {
    let text = stdout_of(&[
        "fuse",
        fixture("qualitative_pair.json").to_str().unwrap(),
        "--format",
        "json",
        "--trace",
    ]);
    let report: FusionReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.rule, "pcr5");
    assert_eq!(report.masses["A"].index, "4");
    assert_eq!(report.masses["A"].confidence, "NB");
    assert_eq!(report.conflict["A&B"].confidence, "O");
    assert!(!report.trace.is_empty());
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", text);
}

#[test]
fn syntax_error_reports_column() {
    qbelief()
        .arg("fuse")
        .arg(fixture("bad_syntax.json"))
        .assert()
        .code(2)
        .stderr(predicate::str::contains("A&&B"))
        .stderr(predicate::str::contains("syntax error at column 3"));
}

#[test]
fn unreadable_file_exits_one() {
    qbelief()
        .args(["fuse", "/nonexistent/problem.json"])
        .assert()
        .code(1)
        .stderr(predicate::str::contains("cannot read"));
}

#[test]
fn malformed_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{\"frame\": [\"A\"").unwrap();
    qbelief()
        .arg("validate")
        .arg(&path)
        .assert()
        .code(2)
        .stderr(predicate::str::contains("invalid document"));
}

#[test]
fn validate_reports_diagnostics() {
    qbelief()
        .arg("validate")
        .arg(fixture("invalid_masses.json"))
        .assert()
        .code(2)
        .stdout(predicate::str::contains("bad: EMPTY: mass on empty set"))
        .stdout(predicate::str::contains("bad: A: index out of range"))
        .stdout(predicate::str::contains("good: ok (quasi-normalized)"));
    qbelief()
        .arg("validate")
        .arg(fixture("numeric_pair.json"))
        .assert()
        .success()
        .stdout("qm1: ok (quasi-normalized)\nqm2: ok (quasi-normalized)\n");
}

#[test]
fn fuse_rejects_invalid_sources() {
    qbelief()
        .arg("fuse")
        .arg(fixture("invalid_masses.json"))
        .assert()
        .code(2)
        .stderr(predicate::str::contains("mass on empty set"));
}

#[test]
fn source_selection() {
    let file = fixture("three_sources.json");
    qbelief()
        .arg("fuse")
        .arg(&file)
        .assert()
        .code(2)
        .stderr(predicate::str::contains("--sources"));
    qbelief()
        .arg("fuse")
        .arg(&file)
        .args(["--sources", "s1,nobody"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("no source named `nobody`"));
    qbelief()
        .arg("fuse")
        .arg(&file)
        .args(["--sources", "s3,s1"])
        .assert()
        .success();
}

#[test]
fn enumerate_lists_hyper_power_set() {
    let text = stdout_of(&["enumerate", fixture("free3.json").to_str().unwrap()]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "19 elements");
    assert_eq!(lines.len(), 20);
    assert_eq!(&lines[1..5], ["EMPTY", "A", "B", "C"]);
    assert!(lines.contains(&"A&B&C"));
    assert!(lines.contains(&"A&B|A&C|B&C"));
    let text = stdout_of(&[
        "enumerate",
        fixture("numeric_pair.json").to_str().unwrap(),
        "--unicode",
    ]);
    assert_eq!(text, "4 elements\nEMPTY\nA\nB\nA∪B\n");
}

#[test]
fn enumerate_respects_limit() {
    qbelief()
        .arg("enumerate")
        .arg(fixture("free3.json"))
        .args(["--limit", "2"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("enumeration limit is 2"));
}

#[test]
fn belief_and_plausibility() {
    let file = fixture("numeric_pair.json");
    let file = file.to_str().unwrap();
    assert_eq!(
        stdout_of(&["belpl", file, "--source", "qm1", "--prop", "A"]),
        "Bel(A) = L1(0.3)\nPl(A) = L4(0.3)\n"
    );
    assert_eq!(
        stdout_of(&["belpl", file, "--source", "qm1", "--prop", "A|B"]),
        "Bel(A|B) = L6(0.3)\nPl(A|B) = L6(0.3)\n"
    );
    qbelief()
        .args(["belpl", file, "--source", "qm1", "--prop", "A|"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("column"));
}

#[test]
fn usage_errors_exit_two() {
    qbelief().args(["fuse"]).assert().code(2);
    qbelief()
        .arg("fuse")
        .arg(fixture("numeric_pair.json"))
        .args(["--rule", "dempster"])
        .assert()
        .code(2);
    qbelief()
        .arg("--help")
        .assert()
        .success()
        .stdout(predicate::str::contains("fuse"));
}
