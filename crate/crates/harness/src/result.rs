use mco_problems::ProblemSpec;
use mco_stats::ResultMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::run::RunRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemMeta {
    pub name: String,
    pub dim: usize,
    pub category: String,
    pub known_target: Option<f64>,
}

impl ProblemMeta {
    pub fn of(p: &ProblemSpec) -> Self {
        Self {
            name: p.name.clone(),
            dim: p.dim(),
            category: p.category.to_string(),
            known_target: p.known_target.as_ref().map(|t| t.value),
        }
    }
}

/// Records of an algorithms × problems × runs experiment, ordered by
/// algorithm, then problem, then run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    pub algorithms: Vec<String>,
    pub problems: Vec<ProblemMeta>,
    pub runs: usize,
    pub base_seed: u64,
    pub config_hash: String,
    records: Vec<RunRecord>,
}

impl ResultSet {
    /// Sorts `records` into canonical order and checks the grid is complete.
    pub fn new(
        algorithms: Vec<String>,
        problems: Vec<ProblemMeta>,
        runs: usize,
        base_seed: u64,
        config_hash: String,
        mut records: Vec<RunRecord>,
    ) -> Result<Self> {
        let a_idx = |name: &str| algorithms.iter().position(|a| a == name);
        let p_idx = |name: &str| problems.iter().position(|p| p.name == name);
        let mut keyed = Vec::with_capacity(records.len());
        for r in records.drain(..) {
            let a = a_idx(&r.algorithm).ok_or_else(|| Error::Format(format!("unknown algorithm {:?}", r.algorithm)))?;
            let p = p_idx(&r.problem).ok_or_else(|| Error::Format(format!("unknown problem {:?}", r.problem)))?;
            if r.run >= runs {
                return Err(Error::Format(format!("run index {} outside 0..{runs}", r.run)));
            }
            keyed.push(((a, p, r.run), r));
        }
        keyed.sort_by_key(|(k, _)| *k);
        if keyed.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Format("duplicate (algorithm, problem, run) record".into()));
        }
        let expected = algorithms.len() * problems.len() * runs;
        if keyed.len() != expected {
            return Err(Error::Format(format!(
                "expected {expected} records for a complete grid, found {}",
                keyed.len()
            )));
        }
        Ok(Self {
            algorithms,
            problems,
            runs,
            base_seed,
            config_hash,
            records: keyed.into_iter().map(|(_, r)| r).collect(),
        })
    }

    pub fn empty() -> Self {
        Self {
            algorithms: Vec::new(),
            problems: Vec::new(),
            runs: 0,
            base_seed: 0,
            config_hash: String::new(),
            records: Vec::new(),
        }
    }

    pub fn records(&self) -> &[RunRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn algorithm_index(&self, name: &str) -> Option<usize> {
        self.algorithms.iter().position(|a| a.eq_ignore_ascii_case(name))
    }

    pub fn problem_index(&self, name: &str) -> Option<usize> {
        self.problems.iter().position(|p| p.name.eq_ignore_ascii_case(name))
    }

    /// All runs of one cell.
    pub fn cell(&self, algorithm: usize, problem: usize) -> &[RunRecord] {
        let start = (algorithm * self.problems.len() + problem) * self.runs;
        &self.records[start..start + self.runs]
    }

    /// Equality ignoring wall times.
    pub fn same_outcome(&self, other: &ResultSet) -> bool {
        self.algorithms == other.algorithms
            && self.problems == other.problems
            && self.runs == other.runs
            && self.base_seed == other.base_seed
            && self.config_hash == other.config_hash
            && self.records.len() == other.records.len()
            && self.records.iter().zip(&other.records).all(|(a, b)| a.same_outcome(b))
    }

    /// Best fitness as `values[problem][algorithm][run]`.
    pub fn to_matrix(&self) -> Result<ResultMatrix> {
        let values = (0..self.problems.len())
            .map(|p| {
                (0..self.algorithms.len())
                    .map(|a| self.cell(a, p).iter().map(|r| r.best_fitness).collect())
                    .collect()
            })
            .collect();
        Ok(ResultMatrix::new(
            self.problems.iter().map(|p| p.name.clone()).collect(),
            self.algorithms.clone(),
            values,
        )?)
    }

    pub fn summaries(&self) -> Vec<CellSummary> {
        let mut out = Vec::with_capacity(self.algorithms.len() * self.problems.len());
        for (a, alg) in self.algorithms.iter().enumerate() {
            for (p, meta) in self.problems.iter().enumerate() {
                out.push(CellSummary::of(alg, meta, self.cell(a, p)));
            }
        }
        out
    }
}

/// Best/mean/std of one cell, with gaps to the known target when there is one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub algorithm: String,
    pub problem: String,
    pub dim: usize,
    pub runs: usize,
    pub best: f64,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single run.
    pub std: f64,
    pub worst: f64,
    pub feasible_runs: usize,
    pub target: Option<f64>,
    pub gap_best: Option<f64>,
    pub gap_mean: Option<f64>,
}

impl CellSummary {
    pub fn of(algorithm: &str, meta: &ProblemMeta, records: &[RunRecord]) -> Self {
        let v: Vec<f64> = records.iter().map(|r| r.best_fitness).collect();
        let (mean, std) = mean_std(&v);
        let best = v.iter().copied().fold(f64::INFINITY, f64::min);
        let worst = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            algorithm: algorithm.to_string(),
            problem: meta.name.clone(),
            dim: meta.dim,
            runs: v.len(),
            best,
            mean,
            std,
            worst,
            feasible_runs: records.iter().filter(|r| r.feasible).count(),
            target: meta.known_target,
            gap_best: meta.known_target.map(|t| best - t),
            gap_mean: meta.known_target.map(|t| mean - t),
        }
    }
}

pub fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
