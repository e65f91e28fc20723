use std::path::PathBuf;
use std::process::{Command, Output};

use sl3knot::analysis::InvariantReport;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl3knot"))
        .args(args)
        .env_remove("SL3KNOT_CONVENTIONS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_report(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn compute_trefoil_text() {
    let o = run(&["compute", "--braid", "2:[1,1,1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("gamma3: 2"));
}

#[test]
fn compute_unknot_is_three() {
    let o = run(&["compute", "--braid", "2:[1]"]);
    assert!(stdout(&o).contains("polynomial: q^2 + 1 + q^-2"));
}

#[test]
fn compute_pd_fixture_json_round_trips() {
    let doc = json_report(&["compute", "--pd", &fixture("11n183.pd")]);
    assert_eq!(doc["meta"]["engine_version"], sl3knot::report::ENGINE_VERSION);
    assert_eq!(doc["meta"]["conventions_hash"].as_str().unwrap().len(), 64);
    let r: InvariantReport = serde_json::from_value(doc["report"].clone()).unwrap();
    assert_eq!((r.gamma2, r.gamma3, r.v, r.e_prime, r.mu, r.theta), (1, 0, 7, 6, 6, 7));
}

#[test]
fn inline_pd_and_csv_output() {
    let o = run(&["--format", "csv", "compute", "--pd", "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("polynomial,n,gamma1,gamma2,gamma3"));
    assert!(lines.next().unwrap().contains(",1,1,2,"));
}

#[test]
fn parse_errors_exit_two() {
    assert_eq!(run(&["compute", "--braid", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--pd", "X[1,2,3]"]).status.code(), Some(2));
    assert_eq!(run(&["compute"]).status.code(), Some(2));
    assert_eq!(run(&["--workers", "0", "compute", "--braid", "2:[1]"]).status.code(), Some(2));
    assert_eq!(run(&["--cap", "2", "compute", "--braid", "2:[1,1,1]"]).status.code(), Some(2));
}

#[test]
fn bundled_corpus_passes() {
    let o = run(&["verify-theorems", &fixture("positive_corpus.toml"), "--connected-sum", "T(2,3)+T(2,3)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn corrupted_theta_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "[[diagram]]\nname = \"T(3,4)\"\nbraid = \"3:[1,2,1,2,1,2,1,2]\"\nexpect = { theta = 5 }\n",
    )
    .unwrap();
    let o = run(&["verify-theorems", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL T(3,4)"));
}

#[test]
fn empty_corpus_passes_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.toml");
    std::fs::write(&path, "# nothing\n").unwrap();
    let o = run(&["verify-theorems", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn missing_corpus_is_input_error() {
    assert_eq!(run(&["verify-theorems", "/nonexistent/corpus.toml"]).status.code(), Some(2));
}

#[test]
fn table_reproduces_all_rows() {
    let o = run(&[
        "table",
        "--csv",
        &fixture("knotinfo_table.csv"),
        "--expected",
        &fixture("table_expected.csv"),
        "--fixtures",
        &fixture(""),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("33/33 rows match"));
    let row = text.lines().find(|l| l.starts_with("10_161 ")).unwrap();
    assert_eq!(row.split_whitespace().collect::<Vec<_>>(), ["10_161", "1", "1", "1", "N", "Y", "ok"]);
}

#[test]
fn table_with_mismatched_reference_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("expected.csv");
    std::fs::write(&path, "name,positive_braid,gamma3\n3_1,Y,3\n").unwrap();
    let o = run(&["table", "--csv", &fixture("knotinfo_table.csv"), "--expected", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn conventions_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("conv.toml");
    std::fs::write(&path, "a_var = \"v\"\nz_var = \"z\"\ninvert_a = true\n").unwrap();
    let hash = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_sl3knot"));
        c.args(["--format", "json", "compute", "--braid", "2:[1]"]);
        match env {
            Some(p) => c.env("SL3KNOT_CONVENTIONS", p),
            None => c.env_remove("SL3KNOT_CONVENTIONS"),
        };
        let v: serde_json::Value = serde_json::from_slice(&c.output().unwrap().stdout).unwrap();
        v["meta"]["conventions_hash"].as_str().unwrap().to_string()
    };
    assert_ne!(hash(None), hash(Some(path.to_str().unwrap())));
    let o = Command::new(env!("CARGO_BIN_EXE_sl3knot"))
        .args(["compute", "--braid", "2:[1]"])
        .env("SL3KNOT_CONVENTIONS", "/nonexistent.toml")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_compare_examples() {
    let o = run(&["oracle-compare", "--braid", "2:[1,1,1]", "--braid", "2:[1,1,1,1,1,1,1]", "--pd", &fixture("11n183.pd")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("equal")).count(), 3);
}

#[test]
fn oracle_compare_skips_over_cap() {
    let o = run(&["--cap", "4", "oracle-compare", "--braid", "2:[1,1,1]", "--braid", "2:[1,1,1,1,1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipping"));
}

#[test]
fn ow_experiment_is_seeded() {
    let args = ["--format", "json", "ow-experiment", "--braid", "3:[1,2,1,2,1,2,1,2]", "--trials", "50", "--seed", "7"];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["report"]["runs"][0]["report"]["violations"], 0);
    // non-positive diagrams are rejected
    assert_eq!(run(&["ow-experiment", "--braid", "2:[1,-1,1]"]).status.code(), Some(2));
}

#[test]
fn mixing_combinatorics_range() {
    let o = run(&["mixing-combinatorics", "--m-min", "2", "--m-max", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 5);
    assert_eq!(run(&["mixing-combinatorics", "--m-min", "5", "--m-max", "3"]).status.code(), Some(2));
}
