use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How runs are collapsed to one value per (problem, algorithm).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Summarizer {
    #[default]
    Mean,
    Median,
}

impl Summarizer {
    pub fn apply(self, runs: &[f64]) -> f64 {
        match self {
            Summarizer::Mean => runs.iter().sum::<f64>() / runs.len() as f64,
            Summarizer::Median => median(runs),
        }
    }
}

pub(crate) fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2.0
    }
}

/// `values[problem][algorithm][run]`, minimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultMatrix {
    pub problems: Vec<String>,
    pub algorithms: Vec<String>,
    values: Vec<Vec<Vec<f64>>>,
}

impl ResultMatrix {
    pub fn new(problems: Vec<String>, algorithms: Vec<String>, values: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if values.len() != problems.len() {
            return Err(Error::NonRectangular(format!(
                "{} problem names, {} problem rows",
                problems.len(),
                values.len()
            )));
        }
        let runs = values.first().and_then(|r| r.first()).map(Vec::len).unwrap_or(0);
        for (p, row) in values.iter().enumerate() {
            if row.len() != algorithms.len() {
                return Err(Error::NonRectangular(format!(
                    "problem {p} has {} algorithm columns, expected {}",
                    row.len(),
                    algorithms.len()
                )));
            }
            for (a, cell) in row.iter().enumerate() {
                if cell.len() != runs {
                    return Err(Error::NonRectangular(format!(
                        "problem {p} algorithm {a} has {} runs, expected {runs}",
                        cell.len()
                    )));
                }
            }
        }
        if runs == 0 && !values.is_empty() && !algorithms.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(Self { problems, algorithms, values })
    }

    pub fn n_problems(&self) -> usize {
        self.problems.len()
    }

    pub fn n_algorithms(&self) -> usize {
        self.algorithms.len()
    }

    pub fn n_runs(&self) -> usize {
        self.values.first().and_then(|r| r.first()).map(Vec::len).unwrap_or(0)
    }

    pub fn runs(&self, problem: usize, algorithm: usize) -> &[f64] {
        &self.values[problem][algorithm]
    }

    pub fn algorithm_index(&self, name: &str) -> Option<usize> {
        self.algorithms.iter().position(|a| a == name)
    }

    /// `summary[problem][algorithm]`.
    pub fn summarize(&self, how: Summarizer) -> Vec<Vec<f64>> {
        self.values
            .iter()
            .map(|row| row.iter().map(|cell| how.apply(cell)).collect())
            .collect()
    }
}
