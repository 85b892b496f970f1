//! Text tables and CSV renderings of the test results.

use std::fmt::Write as _;

use crate::nonparametric::{FriedmanReport, KruskalSummary, PairCounts};

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

/// One row per algorithm: mean rank and overall order, with the test
/// statistic and p-value in the footer.
pub fn friedman_text(title: &str, r: &FriedmanReport) -> String {
    let width = r.algorithms.iter().map(|a| a.len()).max().unwrap_or(9).max(9);
    let mut out = format!("{title}\n");
    let _ = writeln!(out, "{:<width$}  {:>9}  {:>5}", "algorithm", "mean rank", "order");
    let order = r.order();
    for (i, a) in r.algorithms.iter().enumerate() {
        let pos = order.iter().position(|&j| j == i).unwrap_or(0) + 1;
        let _ = writeln!(out, "{a:<width$}  {:>9.2}  {pos:>5}", r.mean_ranks[i]);
    }
    let _ = writeln!(
        out,
        "chi-square = {:.4} (df = {}, n = {}), p-value = {:.4e}",
        r.statistic, r.df, r.n_problems, r.p_value
    );
    out
}

pub fn friedman_csv(r: &FriedmanReport) -> String {
    let rows = r
        .algorithms
        .iter()
        .zip(&r.mean_ranks)
        .map(|(a, m)| {
            vec![
                a.clone(),
                format!("{m}"),
                format!("{}", r.statistic),
                format!("{}", r.df),
                format!("{}", r.p_value),
            ]
        })
        .collect();
    csv_string(&["algorithm", "mean_rank", "chi_square", "df", "p_value"], rows)
}

/// `algorithm vs. baseline  +/=/-` rows.
pub fn wtl_text(title: &str, pairs: &[PairCounts]) -> String {
    let width = pairs.iter().map(|p| p.algorithm.len() + p.baseline.len() + 5).max().unwrap_or(10);
    let mut out = format!("{title}\n");
    let _ = writeln!(out, "{:<width$}  +/=/-", "pair");
    for p in pairs {
        let label = format!("{} vs. {}", p.algorithm, p.baseline);
        let _ = writeln!(out, "{label:<width$}  {}", p.triple());
    }
    out
}

pub fn wtl_csv(pairs: &[PairCounts]) -> String {
    let rows = pairs
        .iter()
        .map(|p| {
            vec![
                p.algorithm.clone(),
                p.baseline.clone(),
                p.better.to_string(),
                p.similar.to_string(),
                p.worse.to_string(),
            ]
        })
        .collect();
    csv_string(&["algorithm", "baseline", "better", "similar", "worse"], rows)
}

pub fn kruskal_text(title: &str, s: &KruskalSummary) -> String {
    let width = s.algorithms.iter().map(|a| a.len()).max().unwrap_or(9).max(9);
    let mut out = format!("{title}\n");
    let _ = writeln!(out, "{:<width$}  {:>9}", "algorithm", "mean rank");
    for (a, r) in s.algorithms.iter().zip(&s.average_mean_ranks) {
        let _ = writeln!(out, "{a:<width$}  {r:>9.2}");
    }
    let significant = s.per_problem.iter().filter(|r| r.p_value <= 0.05).count();
    let _ = writeln!(out, "problems with p <= 0.05: {significant}/{}", s.per_problem.len());
    out
}

pub fn kruskal_csv(problems: &[String], s: &KruskalSummary) -> String {
    let mut header = vec!["problem", "h", "df", "p_value"];
    header.extend(s.algorithms.iter().map(String::as_str));
    let rows = problems
        .iter()
        .zip(&s.per_problem)
        .map(|(p, r)| {
            let mut row = vec![p.clone(), format!("{}", r.statistic), r.df.to_string(), format!("{}", r.p_value)];
            row.extend(r.mean_ranks.iter().map(|m| format!("{m}")));
            row
        })
        .collect();
    csv_string(&header, rows)
}
