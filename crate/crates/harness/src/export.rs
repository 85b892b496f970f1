//! Plot-ready convergence data.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::result::ResultSet;

/// Mean best-so-far per algorithm on a shared evaluation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceExport {
    pub problem: String,
    pub fes: Vec<usize>,
    pub series: Vec<(String, Vec<f64>)>,
}

impl TraceExport {
    /// Whitespace-separated columns with a header line.
    pub fn to_text(&self) -> String {
        let mut out = String::from("fes");
        for (name, _) in &self.series {
            let _ = write!(out, " {name}");
        }
        out.push('\n');
        for (i, f) in self.fes.iter().enumerate() {
            let _ = write!(out, "{f}");
            for (_, s) in &self.series {
                let _ = write!(out, " {:e}", s[i]);
            }
            out.push('\n');
        }
        out
    }
}

/// Best-so-far of a step trace at `fes`; before the first record it is the first value.
fn value_at(trace: &[(usize, f64)], fes: usize) -> f64 {
    let idx = trace.partition_point(|(f, _)| *f <= fes);
    trace[idx.saturating_sub(1)].1
}

/// Averages traces over runs for each requested algorithm (all when empty).
///
/// The grid is the union of recorded evaluation counts plus the budget, so
/// it spans from the first record (the initial population) to `fes_max`.
pub fn mean_traces(set: &ResultSet, problem: &str, algorithms: &[String]) -> Result<TraceExport> {
    let p = set
        .problem_index(problem)
        .ok_or_else(|| Error::Config(format!("problem {problem:?} not in results; have {:?}", names(set))))?;
    let algs: Vec<usize> = if algorithms.is_empty() {
        (0..set.algorithms.len()).collect()
    } else {
        algorithms
            .iter()
            .map(|a| {
                set.algorithm_index(a)
                    .ok_or_else(|| Error::Config(format!("algorithm {a:?} not in results; have {:?}", set.algorithms)))
            })
            .collect::<Result<_>>()?
    };
    let mut grid: Vec<usize> = Vec::new();
    for &a in &algs {
        for r in set.cell(a, p) {
            grid.extend(r.trace.iter().map(|(f, _)| *f));
            grid.push(r.fes_max);
        }
    }
    grid.sort_unstable();
    grid.dedup();
    let series = algs
        .iter()
        .map(|&a| {
            let runs = set.cell(a, p);
            let values = grid
                .iter()
                .map(|&g| runs.iter().map(|r| value_at(&r.trace, g)).sum::<f64>() / runs.len() as f64)
                .collect();
            (set.algorithms[a].clone(), values)
        })
        .collect();
    Ok(TraceExport {
        problem: set.problems[p].name.clone(),
        fes: grid,
        series,
    })
}

fn names(set: &ResultSet) -> Vec<&str> {
    set.problems.iter().map(|p| p.name.as_str()).collect()
}
