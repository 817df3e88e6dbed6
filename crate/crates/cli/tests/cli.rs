use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use moyalex::weights::WeightTable;
use moyalex::{qint, Laurent};

fn resource(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/resources").join(name)
}

fn moyalex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moyalex")).args(args).env_remove("MOYALEX_WEIGHT_TABLE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn theta_51() -> String {
    resource("theta_51.json").display().to_string()
}

fn theta_trivial() -> String {
    resource("theta_trivial.json").display().to_string()
}

fn line<'a>(out: &'a str, prefix: &str) -> &'a str {
    out.lines().find(|l| l.starts_with(prefix)).unwrap_or_else(|| panic!("no `{prefix}` line in\n{out}"))
}

#[test]
fn compute_prints_the_five_one_value() {
    let o = moyalex(&["compute", &theta_51(), "--color", "i=1", "--color", "j=1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let q: Laurent = line(&out, "Δ = ")["Δ = ".len()..].parse().unwrap();
    let want = &"q^12 - 2*q^8 + q^4 + 2 - q^-4".parse::<Laurent>().unwrap() * &qint(2);
    assert_eq!(q, want);
    assert_eq!(line(&out, "Δ(t) = ("), "Δ(t) = (-t^{-1} + 2 + t - 2*t^{2} + t^{3})(t^{-1/2} + t^{1/2})");
    assert!(out.contains("invariance: ambient isotopy"));
}

#[test]
fn engines_print_the_same_value() {
    let mut seen = Vec::new();
    for e in ["statesum", "det", "rewrite"] {
        let o = moyalex(&["compute", &theta_51(), "--color", "i=1", "--color", "j=2", "--engine", e]);
        assert_eq!(o.status.code(), Some(0), "{e}");
        seen.push(line(&stdout(&o), "Δ = ").to_string());
    }
    seen.dedup();
    assert_eq!(seen.len(), 1, "{seen:?}");
}

#[test]
fn states_lists_seven_rows() {
    let o = moyalex(&["states", &theta_51()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("7 states, symbolic in i, j"));
    let mut weights: Vec<&str> = out.lines().filter_map(|l| l.split_once("weight = ").map(|x| x.1)).collect();
    weights.sort();
    let mut want = vec![
        "t^{(3i+3j)/2}[i+j]",
        "-t^{(i+3j)/2}[i+j]",
        "t^{(-i+j)/2}[i+j]",
        "-t^{(3i+j)/2}[i+j]",
        "t^{(i+j)/2}[i+j]",
        "-t^{(-i-j)/2}[i+j]",
        "t^{(i-j)/2}[i+j]",
    ];
    want.sort();
    assert_eq!(weights, want);

    let o = moyalex(&["states", &theta_51(), "--color", "i=2", "--color", "j=3"]);
    let out = stdout(&o);
    assert!(out.starts_with("7 states\n"));
    assert!(out.contains("total Δ = "));
}

#[test]
fn planarity_exit_codes() {
    let o = moyalex(&["planarity", &theta_51()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("NonPlanarCertificate"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unbound colors i, j set to 1"));
    let o = moyalex(&["planarity", &theta_trivial(), "--color", "i=2", "--color", "j=1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Inconclusive\n");
}

#[test]
fn errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("dup.json");
    let text = std::fs::read_to_string(resource("theta_trivial.json")).unwrap().replacen("\"id\": 2", "\"id\": 1", 1);
    std::fs::write(&bad, text).unwrap();
    let o = moyalex(&["compute", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate edge id"));
    let o = moyalex(&["compute", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = moyalex(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_at_one_and_bracket() {
    let o = moyalex(&["eval1", &theta_51()]);
    assert_eq!(stdout(&o), "Δ(1) = 2\n");
    let o = moyalex(&["bracket", &theta_trivial(), "--engine", "det"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("|δ| = "));
    let o = moyalex(&["bracket", &theta_trivial(), "--engine", "rewrite"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn convert_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let once = moyalex(&["convert", &theta_51()]);
    assert_eq!(once.status.code(), Some(0));
    let path = dir.path().join("again.json");
    std::fs::write(&path, &once.stdout).unwrap();
    let twice = moyalex(&["convert", path.to_str().unwrap()]);
    assert_eq!(once.stdout, twice.stdout);

    let bound = moyalex(&["convert", &theta_51(), "--color", "i=2", "--color", "j=1"]);
    let path = dir.path().join("bound.json");
    std::fs::write(&path, &bound.stdout).unwrap();
    let a = moyalex(&["compute", path.to_str().unwrap()]);
    let b = moyalex(&["compute", &theta_51(), "--color", "i=2", "--color", "j=1"]);
    assert_eq!(line(&stdout(&a), "Δ = "), line(&stdout(&b), "Δ = "));
}

#[test]
fn verify_reports_are_deterministic() {
    for format in ["json", "junit", "text"] {
        let a = moyalex(&["verify", "--suite", "relations", "--suite", "moves", "--format", format]);
        let b = moyalex(&["verify", "--suite", "moves", "--suite", "relations", "--format", format]);
        assert_eq!(a.status.code(), Some(0), "{format}");
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
    let o = moyalex(&["verify", "--suite", "moves", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let suite = &v["suites"][0];
    assert_eq!(suite["suite"], "moves");
    assert_eq!(suite["failed"], 0);
    assert_eq!(suite["total"].as_u64().unwrap() as usize, suite["reports"].as_array().unwrap().len());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.xml");
    let o = moyalex(&["verify", "--suite", "moves", "--format", "junit", "--output", path.to_str().unwrap()]);
    assert!(o.stdout.is_empty());
    let xml = std::fs::read_to_string(&path).unwrap();
    assert!(xml.starts_with("<?xml") && xml.contains("failures=\"0\""));
}

#[test]
fn jobs_do_not_change_the_output() {
    let files = [theta_51(), theta_trivial(), theta_51(), theta_trivial()];
    let mut args = vec!["compute"];
    args.extend(files.iter().map(String::as_str));
    let one = moyalex(&[&args[..], &["--jobs", "1"]].concat());
    let four = moyalex(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(stdout(&one).matches("== ").count(), 4);
}

#[test]
fn weight_table_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mut t = WeightTable::builtin();
    for term in t.positive.n.a.iter_mut().chain(t.negative.n.a.iter_mut()) {
        term.c *= 2;
    }
    let path = dir.path().join("weights.json");
    std::fs::write(&path, t.to_json()).unwrap();
    let run = |env: Option<&Path>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_moyalex"));
        c.args(["compute", &theta_51()]).env_remove("MOYALEX_WEIGHT_TABLE");
        if let Some(p) = env {
            c.env("MOYALEX_WEIGHT_TABLE", p);
        }
        c.output().unwrap()
    };
    let plain = run(None);
    let shipped = run(Some(&resource("weights_v1.json")));
    assert_eq!(plain.stdout, shipped.stdout);
    let altered = run(Some(&path));
    assert_ne!(plain.stdout, altered.stdout);
    let missing = run(Some(&dir.path().join("nope.json")));
    assert_eq!(missing.status.code(), Some(2));
}
