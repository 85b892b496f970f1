use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mco"))
        .args(args)
        .env_remove("MCO_CONFIG")
        .env_remove("MCO_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.file_name().unwrap() != "timing.json" {
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn small_run(out: &Path, extra: &[&str]) -> Output {
    let out = out.to_str().unwrap();
    let mut args = vec![
        "run",
        "--algorithms",
        "ECO,IECO-MCO",
        "--problems",
        "f01,f03",
        "--runs",
        "3",
        "--dim",
        "5",
        "--fes-mult",
        "60",
        "--out",
        out,
    ];
    args.extend_from_slice(extra);
    mco(&args)
}

fn record_count(dir: &Path) -> usize {
    fs::read_to_string(dir.join("results.csv")).unwrap().lines().count() - 1
}

#[test]
fn list_problems_prints_registry() {
    let o = mco(&["list-problems"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["sphere", "composition4", "f01", "f12", "rw01", "rw10"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn config_runs_are_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("desk.cfg");
    fs::write(
        &cfg,
        "algorithms = [\"ECO\", \"GECO\"]\nproblems = [\"f02\", \"f09\"]\ndim = 5\nruns = 2\nfes_mult = 60\n",
    )
    .unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let o = mco(&["run", "--config", cfg.to_str().unwrap(), "--seed", "7", "--out", dir.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let (fa, fb) = (files(&a), files(&b));
    assert!(fa.iter().any(|(n, _)| n == "results.csv"));
    assert_eq!(fa, fb);
    let other = tmp.path().join("c");
    let o = mco(&["run", "--config", cfg.to_str().unwrap(), "--seed", "8", "--out", other.to_str().unwrap()]);
    assert!(o.status.success());
    assert_ne!(fs::read(a.join("results.csv")).unwrap(), fs::read(other.join("results.csv")).unwrap());
}

#[test]
fn run_two_algorithms_on_rw01_gives_twenty_records() {
    let tmp = tempfile::tempdir().unwrap();
    let o = mco(&[
        "run",
        "--algorithms",
        "IECO-MCO,ECO",
        "--problems",
        "rw01",
        "--runs",
        "10",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(record_count(tmp.path()), 20);
    assert!(stdout(&o).contains("rw01"));
}

#[test]
fn invalid_variant_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = mco(&["run", "--algorithms", "ECO,NOPE", "--problems", "f01", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for v in ["ECO", "GECO", "SECO", "DECO", "IECO-MCO"] {
        assert!(err.contains(v), "{err}");
    }
    assert!(!tmp.path().join("results.csv").exists());
}

#[test]
fn usage_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    let missing = tmp.path().join("missing.cfg");
    let cases: Vec<Vec<&str>> = vec![
        vec!["run", "--config", missing.to_str().unwrap(), "--out", out],
        vec!["run", "--problems", "nope", "--out", out],
        vec!["run", "--problems", "rw01", "--runs", "0", "--out", out],
        vec!["run", "--runs", "lots"],
        vec!["frobnicate"],
        vec!["stats", out, "--test", "anova"],
        vec!["stats", missing.to_str().unwrap(), "--test", "kw"],
    ];
    for args in cases {
        let o = mco(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn environment_overrides_flags_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_mco"))
        .args(["run", "--algorithms", "ECO", "--problems", "sphere", "--dim", "3", "--fes-mult", "40"])
        .env("MCO_RUNS", "4")
        .env("MCO_OUT", tmp.path())
        .env_remove("MCO_CONFIG")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(record_count(tmp.path()), 4);
}

#[test]
fn friedman_on_all_ties_gives_equal_ranks() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("results.csv");
    let mut text = String::from("algorithm,problem,run,best_fitness\n");
    for p in ["p1", "p2", "p3"] {
        for a in ["A", "B", "C"] {
            for r in 0..3 {
                text += &format!("{a},{p},{r},5.0\n");
            }
        }
    }
    fs::write(&csv, text).unwrap();
    let o = mco(&["stats", csv.to_str().unwrap(), "--test", "friedman"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = fs::read_to_string(tmp.path().join("stats/friedman.csv")).unwrap();
    let rows: Vec<Vec<&str>> = report.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert_eq!(r[1], "2");
        assert_eq!(r[2], "0");
        assert_eq!(r[4], "1");
    }
}

#[test]
fn wilcoxon_on_identical_columns_is_all_similar() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("results.csv");
    let mut text = String::from("algorithm,problem,run,best_fitness\n");
    for p in ["p1", "p2"] {
        for a in ["A", "B"] {
            for r in 0..5 {
                text += &format!("{a},{p},{r},{}\n", r as f64 * 1.5);
            }
        }
    }
    fs::write(&csv, text).unwrap();
    let o = mco(&["stats", csv.to_str().unwrap(), "--test", "wilcoxon", "--alpha", "0.05"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = fs::read_to_string(tmp.path().join("stats/wilcoxon.csv")).unwrap();
    assert_eq!(report, "algorithm,baseline,better,similar,worse\nA,B,0,2,0\nB,A,0,2,0\n");
}

#[test]
fn ragged_results_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("results.csv");
    fs::write(&csv, "algorithm,problem,run,best_fitness\nA,p1,0,1\nA,p1,1,2\nB,p1,0,3\n").unwrap();
    let o = mco(&["stats", csv.to_str().unwrap(), "--test", "kw"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn stats_reports_are_idempotent_and_leave_inputs_alone() {
    let tmp = tempfile::tempdir().unwrap();
    let res = tmp.path().join("res");
    assert!(small_run(&res, &[]).status.success());
    let before = files(&res);
    for test in ["friedman", "wilcoxon", "kw"] {
        let out_a = tmp.path().join(format!("{test}_a"));
        let out_b = tmp.path().join(format!("{test}_b"));
        for out in [&out_a, &out_b] {
            let o = mco(&["stats", res.to_str().unwrap(), "--test", test, "--out", out.to_str().unwrap()]);
            assert!(o.status.success(), "{test}: {}", stderr(&o));
        }
        let (a, b) = (files(&out_a), files(&out_b));
        assert_eq!(a.len(), 2);
        assert_eq!(a, b);
    }
    assert_eq!(files(&res), before);
}

#[test]
fn export_trace_has_one_column_per_algorithm() {
    let tmp = tempfile::tempdir().unwrap();
    let res = tmp.path().join("res");
    assert!(small_run(&res, &[]).status.success());
    let out = tmp.path().join("plots");
    let o = mco(&[
        "export-trace",
        res.to_str().unwrap(),
        "--problem",
        "f03",
        "--algorithms",
        "ECO,IECO-MCO",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(out.join("trace_f03.txt")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("fes ECO IECO-MCO"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 3));
    assert_eq!(rows.first().unwrap()[0], 30.0);
    assert_eq!(rows.last().unwrap()[0], 300.0);
    for col in 1..3 {
        assert!(rows.windows(2).all(|w| w[1][col] <= w[0][col]));
    }
    let o = mco(&["export-trace", res.to_str().unwrap(), "--problem", "f07"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mco(&["export-trace", res.to_str().unwrap(), "--problem", "f03", "--algorithms", "DECO"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_reports_ranks_and_verdicts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    let o = mco(&[
        "compare",
        "--algorithms",
        "ECO,IECO-MCO",
        "--problems",
        "f01,f05",
        "--runs",
        "3",
        "--dim",
        "5",
        "--fes-mult",
        "60",
        "--out",
        out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("Friedman") && text.contains("IECO-MCO vs. ECO"));
    let versus = fs::read_to_string(tmp.path().join("stats/versus.csv")).unwrap();
    assert_eq!(versus.lines().count(), 2);
    let o = mco(&["compare", "--algorithms", "GECO,SECO", "--problems", "f01", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}
