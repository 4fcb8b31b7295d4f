use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ordeval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordeval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn evaluate_sentiment(metrics: &str) -> Output {
    let gold = fixture("sentiment_gold.tsv");
    let a = format!("A={}", fixture("sentiment_system_a.tsv").display());
    let b = format!("B={}", fixture("sentiment_system_b.tsv").display());
    ordeval(&[
        "evaluate",
        "--gold",
        gold.to_str().unwrap(),
        "--system",
        &a,
        "--system",
        &b,
        "--classes",
        "neg,neu,pos",
        "--metrics",
        metrics,
    ])
}

#[test]
fn evaluate_reports_each_system() {
    let out = evaluate_sentiment("cem_ord,accuracy");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports = json(&out);
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["system"], "A");
    let score = |i: usize, m: &str| reports[i]["scores"][m].as_f64().unwrap();
    assert!((score(0, "cem_ord") - 0.71).abs() < 0.005);
    assert!((score(1, "cem_ord") - 0.76).abs() < 0.005);
    assert_eq!(score(0, "accuracy"), 0.70);
    assert_eq!(score(1, "accuracy"), 0.70);
    assert_eq!(reports[0]["tie_convention"], "half");
    // the table goes to stderr
    assert!(String::from_utf8_lossy(&out.stderr).contains("cem_ord"));
}

#[test]
fn evaluate_writes_to_a_file_and_reads_scale_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = ordeval(&[
        "evaluate",
        "--gold",
        fixture("sentiment_gold.tsv").to_str().unwrap(),
        "--system",
        fixture("sentiment_system_b.tsv").to_str().unwrap(),
        "--scale-file",
        fixture("sentiment.scale").to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
        "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty() && out.stderr.is_empty());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v[0]["system"], "sentiment_system_b");
}

#[test]
fn unknown_metric_is_an_input_error() {
    let out = evaluate_sentiment("cem_ord,no_such_metric");
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no_such_metric"));
}

fn write(dir: &Path, name: &str, rows: &[(&str, &str)]) -> String {
    let path = dir.join(name);
    let text: String = rows.iter().map(|(i, l)| format!("{i}\t{l}\n")).collect();
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn exit_codes_partition_error_classes() {
    let dir = tempfile::tempdir().unwrap();
    let gold = write(dir.path(), "g.tsv", &[("1", "a"), ("2", "b"), ("3", "a")]);
    let flat = write(dir.path(), "s.tsv", &[("1", "a"), ("2", "a"), ("3", "a")]);
    let bad = write(dir.path(), "bad.tsv", &[("1", "a"), ("2", "z"), ("3", "a")]);
    let short = write(dir.path(), "short.tsv", &[("1", "a"), ("2", "a")]);
    let run = |system: &str, metrics: &str| {
        ordeval(&["evaluate", "--gold", &gold, "--system", system, "--classes", "a,b,c", "--metrics", metrics, "--quiet"])
    };
    // class c is empty in the gold standard
    let out = run(&flat, "accuracy,cem_ord");
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    // constant output: Pearson undefined
    assert_eq!(run(&flat, "pearson").status.code(), Some(4));
    assert_eq!(run(&bad, "accuracy").status.code(), Some(2));
    assert_eq!(run(&short, "accuracy").status.code(), Some(2));
    assert_eq!(run(&flat, "accuracy").status.code(), Some(0));
    let with_param = ordeval(&[
        "evaluate", "--gold", &gold, "--system", &flat, "--classes", "a,b,c", "--metrics", "cem_ord", "--param",
        "empty_classes=allow", "--quiet",
    ]);
    assert_eq!(with_param.status.code(), Some(0));
    assert_eq!(ordeval(&["evaluate", "--gold", &gold, "--system", &flat]).status.code(), Some(2));
}

#[test]
fn audit_exit_status_follows_the_reference_table() {
    let ok = ordeval(&["audit", "--metrics", "accuracy,cem_ord", "--trials", "300", "--expect-table1", "--quiet"]);
    assert_eq!(ok.status.code(), Some(0));
    let report = json(&ok);
    assert_eq!(report["verdicts"].as_array().unwrap().len(), 6);
    // mutual information ties exactly on the imbalance probe
    let mismatch = ordeval(&["audit", "--metrics", "mi", "--trials", "50", "--expect-table1", "--quiet"]);
    assert_eq!(mismatch.status.code(), Some(1));
    assert_eq!(json(&mismatch)["table1_mismatches"][0]["property"], "imbalance");
    let empty = ordeval(&["audit", "--metrics", "", "--trials", "10", "--quiet"]);
    assert_eq!(empty.status.code(), Some(0));
    assert!(json(&empty)["verdicts"].as_array().unwrap().is_empty());
}

#[test]
fn audit_is_reproducible_across_thread_counts() {
    let run = |threads: &str| {
        ordeval(&["--threads", threads, "audit", "--metrics", "all", "--trials", "400", "--seed", "3", "--quiet"]).stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
    assert_eq!(one, run("1"));
}

fn tree(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.push((p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn synth_minimal_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let args = |out: &Path, threads: &str| {
        ordeval(&[
            "--threads", threads, "synth", "--out", out.to_str().unwrap(), "--test-cases", "3", "--docs", "40",
            "--ratios", "0.5", "--seed", "11",
        ])
    };
    assert_eq!(args(&a, "1").status.code(), Some(0));
    assert_eq!(args(&b, "3").status.code(), Some(0));
    let files = tree(&a);
    // manifest + 3 x (gold + 5 systems)
    assert_eq!(files.len(), 1 + 3 * 6);
    assert!(a.join("case_0/gold.tsv").exists());
    assert!(a.join("case_2/sys_odisp_0.5.tsv").exists());
    assert_eq!(files, tree(&b));

    let bad = ordeval(&["synth", "--out", dir.path().join("c").to_str().unwrap(), "--ratios", "0:1:0.5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn metaeval_reports_coverage_columns() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite");
    let gen = ordeval(&["synth", "--out", suite.to_str().unwrap(), "--test-cases", "6", "--docs", "60", "--ratios", "0.2,0.6,1"]);
    assert_eq!(gen.status.code(), Some(0));
    let run = |metrics: &str| {
        ordeval(&["metaeval", "--in", suite.to_str().unwrap(), "--metrics", metrics, "--reference", "acc,kendall_a,mi", "--quiet"])
    };
    let out = run("all");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["columns"].as_array().unwrap().len(), 6);
    assert_eq!(report["rows"].as_array().unwrap().len(), 23);
    assert_eq!(report["params"]["empty_classes"], "allow");
    assert_eq!(out.stdout, run("all").stdout);
    let single = json(&run("cem_ord"));
    assert_eq!(single["rows"].as_array().unwrap().len(), 1);

    // without a manifest the classes must be given
    fs::remove_file(suite.join("manifest.json")).unwrap();
    let missing = run("cem_ord");
    assert_eq!(missing.status.code(), Some(2));
    let classes = (1..=11).map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    let explicit = ordeval(&["metaeval", "--in", suite.to_str().unwrap(), "--metrics", "cem_ord", "--classes", &classes, "--quiet"]);
    assert_eq!(explicit.status.code(), Some(0));
}
