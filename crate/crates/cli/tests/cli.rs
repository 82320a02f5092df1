use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn gauge(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gauge"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("GAUGE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

const IDENTITY_CORPUS: &str = r#"{"functions": [
  {"id": "t", "function": {"type": "monotone", "inner": {"type": "polynomial", "components": [["0", "1"]]}}}
]}"#;

const STEP_CORPUS: &str = r#"{"functions": [
  {"id": "s", "function": {"type": "step", "breakpoints": ["1/3"], "values": [["1", "2"], ["-1/2", "0"]]}}
]}"#;

#[test]
fn monotone_identity_record() {
    let tmp = TempDir::new().unwrap();
    let corpus = write(tmp.path(), "c.json", IDENTITY_CORPUS);
    let out = tmp.path().join("out");
    let o = gauge(&["integrate", "--corpus", corpus.to_str().unwrap(), "--method", "monotone", "--n", "1000"], &out);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = read_json(&out.join("integrate/t__monotone__n1000__rational.json"));
    assert_eq!(r["function_id"], "t");
    assert_eq!(r["value"][0], "1/2");
    assert_eq!(r["uncertainty"][0], "1/2000");
    assert_eq!(r["certificate"]["kind"], "bracket");
}

#[test]
fn empty_corpus_writes_nothing() {
    let tmp = TempDir::new().unwrap();
    let corpus = write(tmp.path(), "c.json", r#"{"functions": []}"#);
    let out = tmp.path().join("out");
    let o = gauge(&["integrate", "--corpus", corpus.to_str().unwrap()], &out);
    assert_eq!(code(&o), 0);
    assert!(!out.join("integrate").exists());
}

#[test]
fn step_values_are_exact_strings() {
    let tmp = TempDir::new().unwrap();
    let corpus = write(tmp.path(), "c.json", STEP_CORPUS);
    let out = tmp.path().join("out");
    let o = gauge(&["integrate", "--corpus", corpus.to_str().unwrap()], &out);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = read_json(&out.join("integrate/s__step__rational.json"));
    assert_eq!(r["value"], serde_json::json!(["0/1", "2/3"]));
    assert_eq!(r["backend"], "rational");
}

#[test]
fn single_check_single_trial() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let args = ["verify", "--check", "cauchy", "--function", "step_half", "--n", "4", "--trials", "1"];
    let o = gauge(&args, &out);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let reports: Vec<_> = files(&out.join("verify")).into_iter().filter(|(n, _)| n.ends_with(".json")).collect();
    assert_eq!(reports.len(), 1);
    let r: Value = serde_json::from_slice(&reports[0].1).unwrap();
    assert_eq!(r["theorem_id"], "cauchy");
    assert_eq!(r["trials"], 1);
    assert_eq!(r["violated"], false);
}

#[test]
fn corrupted_corpus_reports_position() {
    let tmp = TempDir::new().unwrap();
    let corpus = write(tmp.path(), "c.json", "{\"functions\": [\n  {\"id\": \"x\", \"function\": {\"type\": \"step\",,}}\n]}");
    let o = gauge(&["verify", "--corpus", corpus.to_str().unwrap()], &tmp.path().join("out"));
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn unknown_function_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let o = gauge(&["integrate", "--function", "nope"], &tmp.path().join("out"));
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("nope"));
}

#[test]
fn out_of_range_parameters_are_rejected() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    assert_eq!(code(&gauge(&["verify", "--n", "2000000"], &out)), 2);
    assert_eq!(code(&gauge(&["verify", "--trials", "100001"], &out)), 2);
    assert_eq!(code(&gauge(&["modulus", "--depth", "25"], &out)), 2);
    assert_eq!(code(&gauge(&["verify", "--check", "bogus"], &out)), 2);
}

#[test]
fn unsupported_method_names_the_function() {
    let tmp = TempDir::new().unwrap();
    let corpus = write(tmp.path(), "c.json", IDENTITY_CORPUS);
    let o = gauge(&["integrate", "--corpus", corpus.to_str().unwrap(), "--method", "step"], &tmp.path().join("out"));
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("`t`"), "{}", stderr(&o));
}

#[test]
fn config_file_and_flag_precedence() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "gauge.toml",
        "seed = 5\nfunctions = [\"identity\"]\n[integrate]\nmethods = [\"monotone\"]\nn = [10, 20]\n",
    );
    let out = tmp.path().join("out");
    let o = gauge(&["integrate", "--config", cfg.to_str().unwrap(), "--n", "40", "--seed", "9"], &out);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let names: Vec<String> = files(&out).into_iter().map(|(n, _)| n).collect();
    assert_eq!(names, vec!["integrate/identity__monotone__n40__rational.json".to_string()]);
    let r = read_json(&out.join("integrate/identity__monotone__n40__rational.json"));
    assert_eq!(r["seed"], 9);

    let bad = write(tmp.path(), "bad.toml", "sed = 5\n");
    let o = gauge(&["integrate", "--config", bad.to_str().unwrap()], &out);
    assert_eq!(code(&o), 2);
}

#[test]
fn output_dir_from_environment() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("env-out");
    let o = Command::new(env!("CARGO_BIN_EXE_gauge"))
        .args(["integrate", "--function", "step_half"])
        .env("GAUGE_OUT_DIR", &out)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(out.join("integrate/step_half__step__rational.json").exists());
}

#[test]
fn small_default_suite_passes_with_controls() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let o = gauge(&["verify", "--n", "8", "--trials", "150"], &out);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let summary = fs::read_to_string(out.join("verify/summary__rational.csv")).unwrap();
    let rows: Vec<Vec<&str>> = summary.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert!(rows.len() > 50);
    let controls: Vec<_> = rows.iter().filter(|r| r[7] == "true").collect();
    assert!(!controls.is_empty());
    // Every negative control is violated and every regular check holds.
    assert!(rows.iter().all(|r| r[8] == "true"), "{summary}");
}

#[test]
fn runs_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        let fns = ["--function", "step_signed_2d", "--function", "identity", "--function", "ae_zero_spike"];
        let mut verify = vec!["verify", "--n", "4", "--trials", "30", "--seed", "17"];
        verify.extend(fns);
        assert_eq!(code(&gauge(&verify, out)), 0);
        let mut integrate = vec!["integrate", "--seed", "17"];
        integrate.extend(fns);
        assert_eq!(code(&gauge(&integrate, out)), 0);
        assert_eq!(code(&gauge(&["sweep", "--dims", "1,2,3", "--trials", "20", "--seed", "17"], out)), 0);
        assert_eq!(code(&gauge(&["report"], out)), 0);
    }
    let (fa, fb) = (files(&a), files(&b));
    assert!(fa.len() > 10);
    assert_eq!(fa, fb);
}

#[test]
fn replay_reproduces_report() {
    let tmp = TempDir::new().unwrap();
    let first = tmp.path().join("first");
    let o = gauge(&["verify", "--check", "pointwise_sums_free", "--function", "step_thirds", "--n", "6", "--trials", "40"], &first);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let path = first.join("verify/pointwise_sums_free__step_thirds__n6__rational.json");
    let report = read_json(&path);
    let replay: Vec<String> = report["replay"].as_str().unwrap().split_whitespace().skip(1).map(str::to_string).collect();
    let second = tmp.path().join("second");
    let args: Vec<&str> = replay.iter().map(String::as_str).collect();
    assert_eq!(code(&gauge(&args, &second)), 0);
    assert_eq!(fs::read(&path).unwrap(), fs::read(second.join("verify/pointwise_sums_free__step_thirds__n6__rational.json")).unwrap());
}

#[test]
fn report_tables() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    fs::create_dir_all(&out).unwrap();
    assert_eq!(code(&gauge(&["report"], &out)), 0);
    let brackets = fs::read_to_string(out.join("report/brackets.csv")).unwrap();
    assert_eq!(brackets.lines().count(), 1);
    assert!(out.join("report/report.md").exists());

    let args = ["integrate", "--function", "identity", "--method", "monotone", "--n", "10,100,1000"];
    assert_eq!(code(&gauge(&args, &out)), 0);
    let float = ["integrate", "--function", "identity", "--method", "monotone", "--n", "10", "--backend", "float"];
    let o = gauge(&float, &out);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&gauge(&["report"], &out)), 0);
    let brackets = fs::read_to_string(out.join("report/brackets.csv")).unwrap();
    let rows: Vec<Vec<String>> =
        brackets.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect();
    let widths: Vec<f64> = rows.iter().filter(|r| r[1] == "rational").map(|r| r[6].parse().unwrap()).collect();
    assert_eq!(widths.len(), 3);
    for (w, n) in widths.iter().zip([10.0, 100.0, 1000.0]) {
        assert!((w - 1.0 / n).abs() < 1e-12);
    }
    assert!(rows.iter().any(|r| r[1] == "float"));

    let missing = gauge(&["report", tmp.path().join("absent").to_str().unwrap()], &out);
    assert_eq!(code(&missing), 2);
}
