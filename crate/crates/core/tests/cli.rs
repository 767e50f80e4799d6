use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_discrepancy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn gen_emits_point_set_json() {
    let out = run(&["gen", "--generator", "korobov:n=5,a=2,d=2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["points"][1], serde_json::json!(["1/5", "2/5"]));
    let many = json(&run(&["gen", "--generator", "vdc:n=2..4,base=2"]));
    assert_eq!(many.as_array().unwrap().len(), 3);
}

#[test]
fn extremal_one_point() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "half.json", r#"{"dim": 1, "points": [["1/2"]]}"#);
    let out = run(&["extremal", "--input", &input]);
    assert!(out.status.success());
    let r = &json(&out)["items"][0]["results"];
    assert_eq!(r["linf"]["value"], "1/2");
    assert_eq!(r["lambda_star"]["{1}"]["value"], "1/2");
    assert_eq!(r["linf_star"]["value"], "1/1");
    assert_eq!(r["linf_star"]["float"], 1.0);
}

#[test]
fn empty_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "empty.json", r#"{"dim": 1, "points": []}"#);
    assert_eq!(run(&["extremal", "--input", &input]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--input", "/nonexistent/set.json"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--generator", "sobol:n=4"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--generator", "vdc:n=4", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn identity_counts_and_fault_injection() {
    let args = ["identity", "--generator", "random:n=6,d=2,den=12,seed=4", "--anchors", "100"];
    let out = run(&args);
    assert!(out.status.success());
    let r = &json(&out)["items"][0]["results"];
    assert_eq!(r["matches"], 100);
    assert_eq!(r["mismatches"], 0);

    let mut faulty = args.to_vec();
    faulty.push("--inject-fault");
    let out = run(&faulty);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["summary"]["mismatches"], 1);
}

#[test]
fn eval_reports_exact_and_float() {
    let out = run(&["eval", "--generator", "vdc:n=1,base=2", "--q", "2,1/2", "--samples", "20000"]);
    assert!(out.status.success());
    let r = &json(&out)["items"][0]["results"];
    assert_eq!(r["l2_squared"]["exact"], "1/3");
    assert_eq!(r["lq"][0]["value_pow_q"], "1/3");
    assert_eq!(r["lq"][0]["kind"], "exact");
    assert_eq!(r["lq"][1]["kind"], "monte_carlo");
    assert_eq!(r["lambda"]["{1}"]["exact"], "1/2");
}

#[test]
fn verify_small_set_holds_and_echoes_constants() {
    let out = run(&[
        "verify",
        "--generator",
        "korobov:n=5,a=2,d=2",
        "--q",
        "1,2,4",
        "--inequalities",
        "lemma1,lemma3,corollary,mean_bound",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["violated"], 0);
    assert_eq!(v["summary"]["inconclusive"], 0);
    let c21 = v["constants"].as_array().unwrap().iter().find(|c| c["d"] == 2 && c["q"] == "1/1").unwrap();
    assert_eq!(c21["constant"]["value"], "25/4");
    for verdict in v["items"][0]["verdicts"].as_array().unwrap() {
        assert_eq!(verdict["status"], "HOLDS");
        let margin = verdict["margin"].as_str().unwrap();
        assert!(!margin.starts_with('-'), "{margin}");
    }
}

#[test]
fn violated_verdict_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", r#"{"dim": 2, "points": [["1/3", "1/2"]]}"#);
    let out = run(&["verify", "--input", &input, "--q", "1", "--inequalities", "lemma2[1]"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["items"][0]["verdicts"][0]["status"], "VIOLATED");
}

#[test]
fn tiny_budget_leaves_verdicts_inconclusive() {
    let out = run(&[
        "verify",
        "--generator",
        "korobov:n=5,a=2,d=2",
        "--q",
        "1",
        "--inequalities",
        "lemma2",
        "--budget",
        "1",
        "--escalations",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["summary"]["inconclusive"].as_u64().unwrap() > 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("inconclusive"));
}

const SWEEP: [&str; 8] = [
    "sweep",
    "--generator",
    "korobov:n=5..13,a=2,d=2",
    "--q",
    "2",
    "--inequalities",
    "lemma1,lemma3,corollary",
    "--budget=256",
];

#[test]
fn sweep_csv_is_deterministic() {
    let first = run(&SWEEP);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let csv = String::from_utf8(first.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,source,n,d,q,linf,lq,lq_kind,lq_star_lower,linf_star,status,min_margin,verdicts,error"
    );
    assert_eq!(lines.count(), 9);
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    for row in reader.records() {
        let row = row.unwrap();
        assert_eq!(&row[10], "HOLDS");
        assert!(row[11].parse::<f64>().unwrap() >= 0.0);
    }

    let mut threaded = SWEEP.to_vec();
    threaded.push("--jobs=4");
    assert_eq!(run(&threaded).stdout, csv.as_bytes());
    assert_eq!(run(&SWEEP).stdout, csv.as_bytes());
}

#[test]
fn config_file_reproduces_flags() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let mut args = SWEEP.to_vec();
    let report_arg = format!("--report={}", report.display());
    args.push(&report_arg);
    let from_flags = run(&args);
    let saved: Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();

    let config = write(dir.path(), "config.json", &saved["config"].to_string());
    let from_config = run(&["sweep", "--config", &config]);
    assert!(from_config.status.success());
    assert_eq!(from_config.stdout, from_flags.stdout);
}
