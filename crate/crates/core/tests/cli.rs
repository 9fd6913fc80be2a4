use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_seqest"));
    c.env_remove("SEQEST_THREADS");
    c
}

fn data_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn csv_rows(text: &str) -> (Value, Vec<csv::StringRecord>, csv::StringRecord) {
    let first = text.lines().next().unwrap();
    let manifest: Value = serde_json::from_str(first.strip_prefix("# ").unwrap()).unwrap();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = reader.headers().unwrap().clone();
    let rows = reader.records().map(Result::unwrap).collect();
    (manifest, rows, header)
}

fn estimate_of(doc: &Value, key: &str) -> f64 {
    doc["estimates"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["estimator"] == key)
        .unwrap()["estimate"]
        .as_f64()
        .unwrap()
}

#[test]
fn estimate_reproduces_musec_values() {
    for design in ["musec_design.json", "musec_obf_design.json"] {
        let out = run(&[
            "estimate",
            "--design",
            data_file(design).to_str().unwrap(),
            "--data",
            data_file("musec_data.json").to_str().unwrap(),
        ]);
        let doc = json_stdout(&out);
        let published = [
            ("mle_overall", 0.1370),
            ("mle_stage1", 0.1436),
            ("mle_stage2_increment", 0.1139),
            ("mue", 0.1341),
            ("umvue", 0.1278),
            ("ubc_mle", 0.1328),
            ("umvcue", 0.1724),
            ("cbc_mle", 0.1909),
        ];
        for (key, want) in published {
            let got = estimate_of(&doc, key);
            assert!((got - want).abs() <= 5e-4, "{design} {key}: {got}");
        }
        assert_eq!(doc["stopped_stage"], 2);
        assert_eq!(doc["manifest"]["tool"], "seqest");
        assert!(doc["manifest"]["timestamp"].is_string());
    }
}

#[test]
fn estimate_rejects_inconsistent_counts() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.json");
    std::fs::write(
        &data,
        r#"{"interim": {"control": {"successes": 12, "n": 97}, "treatment": {"successes": 27, "n": 101}},
            "final": {"control": {"successes": 21, "n": 90}, "treatment": {"successes": 42, "n": 143}}}"#,
    )
    .unwrap();
    let out = run(&[
        "estimate",
        "--design",
        data_file("musec_design.json").to_str().unwrap(),
        "--data",
        data.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("control arm"), "{err}");
}

#[test]
fn estimate_reports_schema_location() {
    let dir = tempfile::tempdir().unwrap();
    let design = dir.path().join("design.json");
    std::fs::write(&design, "{\n  \"e1\": 2.797,\n  \"e2\": \"high\"\n}\n").unwrap();
    let out = run(&[
        "estimate",
        "--design",
        design.to_str().unwrap(),
        "--data",
        data_file("musec_data.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("e2") && err.contains("line 3"), "{err}");
}

#[test]
fn estimate_with_bootstrap_writes_ses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("est.json");
    let out = run(&[
        "estimate",
        "--design",
        data_file("musec_design.json").to_str().unwrap(),
        "--data",
        data_file("musec_data.json").to_str().unwrap(),
        "--bootstrap-se",
        "2000",
        "--theta-assumed",
        "0.14",
        "--seed",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for e in doc["estimates"].as_array().unwrap() {
        let se = e["se"].as_f64().unwrap();
        assert!(se > 0.03 && se < 0.2, "{e}");
    }
    assert_eq!(doc["manifest"]["seed"], 1);
}

#[test]
fn boundaries_values_and_domain() {
    let doc = json_stdout(&run(&["boundaries", "--alpha", "0.05", "--sided", "one"]));
    assert!((doc["constant"].as_f64().unwrap() - 1.678).abs() < 1e-3);
    assert!((doc["interim_p_threshold"].as_f64().unwrap() - 0.0088).abs() < 2e-4);
    let doc = json_stdout(&run(&["boundaries", "--alpha", "0.025"]));
    assert!((doc["constant"].as_f64().unwrap() - 1.977).abs() < 1e-3);
    assert_eq!(run(&["boundaries", "--alpha", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["boundaries", "--alpha", "0.05", "--sided", "two"]).status.code(), Some(2));
}

#[test]
fn numbers_have_seventeen_significant_digits() {
    let out = run(&["boundaries", "--alpha", "0.05"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"constant\"")).unwrap();
    let number = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = number.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{number}");
}

const MUSEC_CANONICAL: [&str; 8] = [
    "--i1",
    "312.8214804063861",
    "--i2",
    "393.70078623349656",
    "--e1",
    "2.797",
    "--e2",
    "1.977",
];

#[test]
fn simulate_single_replicate_marks_sd_absent() {
    let mut args = vec!["simulate", "--theta", "0.14", "--reps", "1"];
    args.extend(MUSEC_CANONICAL);
    let doc = json_stdout(&run(&args));
    let mle = &doc["summary"]["overall"]["mle_overall"];
    assert_eq!(mle["n"], 1);
    assert!(mle["sd"].is_null());
}

#[test]
fn simulate_conditional_umvcue_at_high_theta() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.csv");
    let hist = dir.path().join("hist.csv");
    let mut args = vec![
        "simulate",
        "--theta",
        "0.18",
        "--reps",
        "100000",
        "--seed",
        "3",
        "--conditioning",
        "stage2_only",
        "--records-out",
        records.to_str().unwrap(),
        "--hist-out",
        hist.to_str().unwrap(),
    ];
    args.extend(MUSEC_CANONICAL);
    let doc = json_stdout(&run(&args));
    let umvcue = doc["summary"]["overall"]["umvcue"]["mean"].as_f64().unwrap();
    assert!((umvcue - 0.179).abs() <= 2e-3, "{umvcue}");

    let (manifest, rows, header) = csv_rows(&std::fs::read_to_string(&records).unwrap());
    assert_eq!(manifest["seed"], 3);
    assert_eq!(rows.len(), 100_000);
    assert_eq!(&header[0], "replicate");
    assert!(rows.iter().all(|r| &r[2] == "2"));

    let (_, bins, header) = csv_rows(&std::fs::read_to_string(&hist).unwrap());
    assert_eq!(bins.len(), 202);
    let col = header.iter().position(|h| h == "umvcue").unwrap();
    let total: u64 = bins.iter().map(|r| r[col].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 100_000);
}

#[test]
fn simulate_starvation_exits_4() {
    let mut args = vec!["simulate", "--theta", "-1", "--reps", "10", "--conditioning", "stage1_only"];
    args.extend(MUSEC_CANONICAL);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn simulate_rejects_bad_flags() {
    let mut args = vec!["simulate", "--theta", "0.1", "--conditioning", "sometimes"];
    args.extend(MUSEC_CANONICAL);
    assert_eq!(run(&args).status.code(), Some(2));
    let args = ["simulate", "--theta", "0.1", "--i1", "10", "--i2", "5", "--e1", "2", "--e2", "2"];
    assert_eq!(run(&args).status.code(), Some(2));
}

#[test]
fn simulate_is_thread_count_invariant() {
    let mut args = vec!["simulate", "--theta", "0.1", "--reps", "3000", "--seed", "5"];
    args.extend(MUSEC_CANONICAL);
    let summary = |threads: &str| {
        let out = bin().env("SEQEST_THREADS", threads).args(&args).output().unwrap();
        json_stdout(&out)["summary"].clone()
    };
    assert_eq!(summary("1"), summary("3"));
    let out = bin().env("SEQEST_THREADS", "zero").args(&args).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_prob_stop_and_mixing_identity() {
    let out = run(&["sweep", "--n-list", "40,100,620", "--alpha", "0.05"]);
    assert!(out.status.success());
    let (manifest, rows, header) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(
        header.iter().collect::<Vec<_>>(),
        ["n", "theta", "bias_stop_stage1", "bias_continue_stage2", "bias_unconditional", "prob_stop"]
    );
    assert_eq!(manifest["command"][1], "sweep");
    assert_eq!(rows.len(), 3 * 151);
    let f = |r: &csv::StringRecord, i: usize| r[i].parse::<f64>().unwrap();
    for r in &rows {
        if f(r, 1) == 0.0 {
            assert!((f(r, 5) - 0.0088).abs() < 5e-5, "{r:?}");
        }
        let mixed = f(r, 5) * f(r, 2) + (1.0 - f(r, 5)) * f(r, 3);
        assert!((mixed - f(r, 4)).abs() <= 1e-10);
    }
    assert_eq!(rows.iter().filter(|r| f(r, 1) == 0.0).count(), 3);
}

#[test]
fn sweep_mc_columns_agree() {
    let out = run(&[
        "sweep", "--n-list", "100", "--theta-min", "0", "--theta-max", "0.6", "--theta-steps", "4", "--mc-check",
        "100000", "--seed", "2",
    ]);
    assert!(out.status.success());
    let (_, rows, header) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header.len(), 14);
    let f = |r: &csv::StringRecord, i: usize| r[i].parse::<f64>().unwrap();
    for r in &rows {
        for (analytic, mc) in [(2, 6), (3, 8), (4, 10), (5, 12)] {
            if r[mc].is_empty() {
                continue;
            }
            let se = f(r, mc + 1);
            assert!((f(r, analytic) - f(r, mc)).abs() <= 4.0 * se, "{r:?} column {analytic}");
        }
    }
}

#[test]
fn sweep_rejects_invalid_grid() {
    let out = run(&["sweep", "--n-list", "40", "--theta-min", "1", "--theta-max", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["sweep", "--n-list", "40", "--theta-steps", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn case_study_table4_and_manifest_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t4.csv");
    let out = run(&["case-study", "--which", "table4", "--reps", "0", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let first = std::fs::read_to_string(&path).unwrap();
    let (manifest, rows, header) = csv_rows(&first);
    assert_eq!(rows.len(), 8);
    let dev = header.iter().position(|h| h == "abs_deviation").unwrap();
    for r in &rows {
        assert!(r[dev].parse::<f64>().unwrap() <= 5e-4, "{r:?}");
    }

    // Replaying the echoed command reproduces the artifact apart from the timestamp.
    let argv: Vec<String> = manifest["command"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    std::fs::remove_file(&path).unwrap();
    assert!(bin().args(&argv[1..]).status().unwrap().success());
    let second = std::fs::read_to_string(&path).unwrap();
    let strip = |s: &str| {
        let (m, body) = s.split_once('\n').unwrap();
        let mut m: Value = serde_json::from_str(m.strip_prefix("# ").unwrap()).unwrap();
        m["timestamp"] = Value::Null;
        (m, body.to_string())
    };
    assert_eq!(strip(&first), strip(&second));
}

#[test]
fn case_study_rejects_unknown_table() {
    assert_eq!(run(&["case-study", "--which", "table9"]).status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["sweep", "--help"]).status.code(), Some(0));
}
