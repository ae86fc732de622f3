use std::path::PathBuf;
use std::process::{Command, Output};

use qcalc_cli::cli::{parse_index, parse_window, resolve_threads};
use qcalc_cli::oracle::two_term_cohomology;
use qcomplex::complex::scalar;
use qcomplex::Flavor;

fn qcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcalc")).args(args).env_remove("QCALC_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcalc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn qanalog_prints_polynomials() {
    let o = qcalc(&["qanalog", "factorial", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1+2q+2q^2+q^3\n");
    assert_eq!(stdout(&qcalc(&["qanalog", "binomial", "4", "2"])), "1+q+2q^2+q^3+q^4\n");
    assert_eq!(stdout(&qcalc(&["qanalog", "integer", "-2"])), "-q^-2-q^-1\n");
    assert_eq!(stdout(&qcalc(&["qanalog", "cyclotomic", "6"])), "1-q+q^2\n");
    assert_eq!(qcalc(&["qanalog", "binomial", "4"]).status.code(), Some(2));
}

#[test]
fn cohomology_csv_matches_the_oracle() {
    let o = qcalc(&["cohomology", "--vars", "1", "--laurent", "--m", "2", "--window", "-4..4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let mut seen = 0;
    for row in rows.records() {
        let row = row.unwrap();
        let a: i64 = row[0].parse().unwrap();
        let j: usize = row[1].parse().unwrap();
        let (h0, h1) = two_term_cohomology(&scalar(Flavor::QHodge, a), 2, 1);
        let want = if j == 0 { h0 } else { h1 };
        let torsion: Vec<String> = want.1.iter().map(|t| t.to_string()).collect();
        assert_eq!(row[2].parse::<usize>().unwrap(), want.0, "a={a} j={j}");
        assert_eq!(&row[3], torsion.join("|").as_str(), "a={a} j={j}");
        seen += 1;
    }
    assert_eq!(seen, 18);
    // a = 1: H^0 and H^1 are both Z
    assert!(text.lines().any(|l| l.starts_with("1,0,1,,")));
    assert!(text.lines().any(|l| l.starts_with("1,1,1,,")));
}

#[test]
fn delta_suite_passes() {
    let o = qcalc(&["delta-suite", "--primes", "2,3", "--trunc", "6", "--no-timestamps"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "qcalc-report/1");
    assert_eq!(v["pass"], true);
    assert!(v.get("generated_at").is_none());
}

#[test]
fn reports_are_byte_identical_across_thread_counts() {
    let args = ["qpd-suite", "--primes", "2,3", "--alphas", "2", "--max-n", "2", "--unit-max-n", "3", "--no-timestamps"];
    let one = qcalc(&[&args[..], &["--threads", "1"]].concat());
    let four = qcalc(&[&args[..], &["--threads", "4"]].concat());
    let again = qcalc(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.stdout, again.stdout);
    let with_times = qcalc(&args[..args.len() - 1]);
    assert!(stdout(&with_times).contains("generated_at"));
}

#[test]
fn numbers_are_strings() {
    let o = qcalc(&["cyclotomic", "12", "--no-timestamps"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["phi"], "1-q^2+q^4");
    assert_eq!(v["result"]["degree"], "4");
    assert_eq!(v["summary"]["total"], "12");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn failed_checks_exit_one_and_still_write() {
    let out = tmp("corrupt.json");
    let o = qcalc(&[
        "habiro-element",
        "--coeffs",
        "1,-2,0,5",
        "--index",
        "1..6",
        "--corrupt",
        "2:1:7",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["pass"], false);
    let failed: Vec<_> = v["checks"].as_array().unwrap().iter().filter(|c| c["pass"] == false).collect();
    assert!(failed.iter().any(|c| c["id"] == "consistency/p=2/m=2" && c["counterexample"]["first_difference"] == "1"));

    let clean = qcalc(&["habiro-element", "--coeffs", "1,-2,0,5", "--index", "1..6"]);
    assert_eq!(clean.status.code(), Some(0));
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(qcalc(&["delta-suite", "--primes", "4"]).status.code(), Some(2));
    assert_eq!(qcalc(&["cohomology", "--window", "3..1"]).status.code(), Some(2));
    assert_eq!(qcalc(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(qcalc(&["habiro-element", "--coeffs", "1", "--index", "1,4"]).status.code(), Some(2));
    let cfg = tmp("unknown.json");
    std::fs::write(&cfg, r#"{"primes": [2], "colour": "blue"}"#).unwrap();
    assert_eq!(qcalc(&["delta-suite", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let cfg = tmp("broken.json");
    std::fs::write(&cfg, "{").unwrap();
    assert_eq!(qcalc(&["delta-suite", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn flags_override_the_config_file() {
    let cfg = tmp("precedence.json");
    std::fs::write(&cfg, r#"{"m": 3, "window": "-1..1", "laurent": true, "format": "json", "timestamps": false}"#).unwrap();
    let from_file = qcalc(&["cohomology", "--config", cfg.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&from_file)).unwrap();
    assert_eq!(v["config"]["m"], "3");
    assert_eq!(v["config"]["window"], serde_json::json!(["-1", "1"]));
    let flagged = qcalc(&["cohomology", "--config", cfg.to_str().unwrap(), "--m", "4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&flagged)).unwrap();
    assert_eq!(v["config"]["m"], "4");
    assert_eq!(v["config"]["window"], serde_json::json!(["-1", "1"]));
    let csv = qcalc(&["cohomology", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert!(stdout(&csv).starts_with("a,j,free_rank"));
}

#[test]
fn thread_precedence() {
    assert_eq!(resolve_threads(Some(3), Some("5"), Some(7)).unwrap(), Some(3));
    assert_eq!(resolve_threads(None, Some("5"), Some(7)).unwrap(), Some(5));
    assert_eq!(resolve_threads(None, None, Some(7)).unwrap(), Some(7));
    assert_eq!(resolve_threads(None, None, None).unwrap(), None);
    assert!(resolve_threads(None, Some("many"), None).is_err());
    assert!(resolve_threads(Some(0), None, None).is_err());
}

#[test]
fn argument_parsers() {
    assert_eq!(parse_window("-4..4").unwrap(), (-4, 4));
    assert!(parse_window("4").is_err());
    assert_eq!(parse_index("1..4").unwrap(), vec![1, 2, 3, 4]);
    assert_eq!(parse_index("1,2,4").unwrap(), vec![1, 2, 4]);
}

#[test]
fn relative_habiro_from_a_spec_file() {
    let spec = tmp("gaussian.json");
    std::fs::write(&spec, r#"{"g": ["1", "0", "1"], "delta": "2"}"#).unwrap();
    let o = qcalc(&["relative-habiro", "--spec", spec.to_str().unwrap(), "--m", "6", "--prime-precision", "3", "--no-timestamps"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["spec"]["delta"], "2");
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["id"] == "lift/p=3"));
    let named = qcalc(&["relative-habiro", "--spec", "gaussian", "--m", "6", "--prime-precision", "3", "--no-timestamps"]);
    assert_eq!(named.stdout, o.stdout);
}
