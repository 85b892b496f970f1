//! Cross product of algorithms, problems and runs.

use mco_core::rng::{derive_seed, tag_of};
use mco_core::Variant;
use mco_problems::ProblemSpec;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{hex_sha256, ParamOverrides};
use crate::error::{Error, Result};
use crate::result::{ProblemMeta, ResultSet};
use crate::run::{run_single, RunConfig, RunRecord};

#[derive(Debug, Clone)]
pub struct BatchSpec {
    pub algorithms: Vec<Variant>,
    pub problems: Vec<ProblemSpec>,
    pub runs: usize,
    pub base_seed: u64,
    pub population: usize,
    pub fes_mult: usize,
    /// Overrides `fes_mult * D` for every problem.
    pub fes_max: Option<usize>,
    /// Defaults to the population size.
    pub trace_stride: Option<usize>,
    pub params: ParamOverrides,
    /// Worker threads; 0 uses every core and 1 runs serially.
    pub jobs: usize,
    /// Hash of the originating config; derived from the batch itself when absent.
    pub config_hash: Option<String>,
}

impl BatchSpec {
    pub fn new(algorithms: Vec<Variant>, problems: Vec<ProblemSpec>, runs: usize, base_seed: u64) -> Self {
        Self {
            algorithms,
            problems,
            runs,
            base_seed,
            population: crate::run::DEFAULT_POPULATION,
            fes_mult: crate::run::DEFAULT_FES_MULT,
            fes_max: None,
            trace_stride: None,
            params: ParamOverrides::default(),
            jobs: 0,
            config_hash: None,
        }
    }

    pub fn run_config(&self, variant: Variant, problem: &ProblemSpec, run: usize) -> RunConfig {
        RunConfig {
            params: self.params.apply(variant, problem.dim()),
            population: self.population,
            fes_max: self.fes_max.unwrap_or(self.fes_mult * problem.dim()),
            seed: cell_seed(self.base_seed, variant.name(), &problem.name, run),
            trace_stride: self.trace_stride.unwrap_or(self.population),
        }
    }

    fn hash(&self) -> String {
        #[derive(Serialize)]
        struct View<'a> {
            algorithms: Vec<&'a str>,
            problems: Vec<(&'a str, usize)>,
            runs: usize,
            base_seed: u64,
            population: usize,
            fes_mult: usize,
            fes_max: Option<usize>,
            trace_stride: Option<usize>,
            params: &'a ParamOverrides,
        }
        let view = View {
            algorithms: self.algorithms.iter().map(|v| v.name()).collect(),
            problems: self.problems.iter().map(|p| (p.name.as_str(), p.dim())).collect(),
            runs: self.runs,
            base_seed: self.base_seed,
            population: self.population,
            fes_mult: self.fes_mult,
            fes_max: self.fes_max,
            trace_stride: self.trace_stride,
            params: &self.params,
        };
        hex_sha256(serde_json::to_string(&view).expect("view serializes").as_bytes())
    }
}

/// Seed of one cell, independent of where the cell sits in the batch.
pub fn cell_seed(base_seed: u64, algorithm: &str, problem: &str, run: usize) -> u64 {
    derive_seed(base_seed, &[tag_of(algorithm), tag_of(problem), run as u64])
}

/// Runs every (algorithm, problem, run) cell, in parallel unless `jobs == 1`.
pub fn run_batch(spec: &BatchSpec) -> Result<ResultSet> {
    let mut names: Vec<&str> = spec.problems.iter().map(|p| p.name.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Config("problem names must be unique".into()));
    }
    let cells: Vec<(Variant, &ProblemSpec, usize)> = spec
        .algorithms
        .iter()
        .flat_map(|v| spec.problems.iter().flat_map(move |p| (0..spec.runs).map(move |r| (*v, p, r))))
        .collect();
    for (v, p, r) in &cells {
        spec.run_config(*v, p, *r).validate()?;
    }
    let job = |(v, p, r): &(Variant, &ProblemSpec, usize)| run_single(p, &spec.run_config(*v, p, *r), *r);
    let records: Vec<Result<RunRecord>> = if spec.jobs == 1 {
        cells.iter().map(job).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| cells.par_iter().map(job).collect())
    };
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    ResultSet::new(
        spec.algorithms.iter().map(|v| v.name().to_string()).collect(),
        spec.problems.iter().map(ProblemMeta::of).collect(),
        spec.runs,
        spec.base_seed,
        spec.config_hash.clone().unwrap_or_else(|| spec.hash()),
        records,
    )
}
