//! One independent run of one algorithm on one problem.

use std::time::Instant;

use mco_core::{AlgorithmParams, Optimizer, RngStream, Variant};
use mco_problems::ProblemSpec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default population size.
pub const DEFAULT_POPULATION: usize = 30;
/// Default budget multiplier: `fes_max = 3000 * D`.
pub const DEFAULT_FES_MULT: usize = 3000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub params: AlgorithmParams,
    pub population: usize,
    pub fes_max: usize,
    pub seed: u64,
    /// Record best-so-far whenever this many evaluations have passed.
    pub trace_stride: usize,
}

impl RunConfig {
    /// Defaults for `variant` on a `dim`-dimensional problem.
    pub fn new(variant: Variant, dim: usize, seed: u64) -> Self {
        Self {
            params: AlgorithmParams::defaults(variant, dim),
            population: DEFAULT_POPULATION,
            fes_max: DEFAULT_FES_MULT * dim,
            seed,
            trace_stride: DEFAULT_POPULATION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.population < 5 {
            return Err(Error::Config(format!("population must be at least 5, got {}", self.population)));
        }
        if self.fes_max < 2 * self.population {
            return Err(Error::Config(format!(
                "fes_max ({}) must be at least twice the population ({})",
                self.fes_max, self.population
            )));
        }
        if self.trace_stride == 0 {
            return Err(Error::Config("trace_stride must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub problem: String,
    pub dim: usize,
    pub run: usize,
    pub seed: u64,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    pub feasible: bool,
    pub evaluations_used: usize,
    pub fes_max: usize,
    /// `(fes, best_so_far)` pairs, non-increasing in the second entry.
    pub trace: Vec<(usize, f64)>,
    pub wall_time: f64,
}

impl RunRecord {
    /// Equality on everything but wall time.
    pub fn same_outcome(&self, other: &RunRecord) -> bool {
        RunRecord {
            wall_time: 0.0,
            ..self.clone()
        } == RunRecord {
            wall_time: 0.0,
            ..other.clone()
        }
    }
}

/// Runs until the next iteration would overrun the budget.
pub fn run_single(problem: &ProblemSpec, cfg: &RunConfig, run: usize) -> Result<RunRecord> {
    cfg.validate()?;
    let start = Instant::now();
    let mut opt = Optimizer::new(problem, cfg.params.clone(), cfg.population, cfg.fes_max, RngStream::new(cfg.seed))?;
    let mut trace = vec![(opt.fes(), opt.best().fitness)];
    let mut next_mark = (opt.fes() / cfg.trace_stride + 1) * cfg.trace_stride;
    opt.run(|o| {
        if o.fes() >= next_mark {
            trace.push((o.fes(), o.best().fitness));
            next_mark = (o.fes() / cfg.trace_stride + 1) * cfg.trace_stride;
        }
    })?;
    if trace.last().map(|t| t.0) != Some(opt.fes()) {
        trace.push((opt.fes(), opt.best().fitness));
    }
    let best = opt.best();
    Ok(RunRecord {
        algorithm: cfg.params.variant.name().to_string(),
        problem: problem.name.clone(),
        dim: problem.dim(),
        run,
        seed: cfg.seed,
        best_position: best.position.clone(),
        best_fitness: best.fitness,
        feasible: best.feasible,
        evaluations_used: opt.fes(),
        fes_max: cfg.fes_max,
        trace,
        wall_time: start.elapsed().as_secs_f64(),
    })
}
