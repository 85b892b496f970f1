//! Declarative experiment configuration.
//!
//! A TOML file with top-level keys and an optional `[params]` table:
//!
//! ```toml
//! algorithms = ["IECO-MCO", "ECO"]   # required
//! problems = ["desk"]                # names, or "desk" / "engineering" groups
//! dim = 10                           # ignored by fixed-dimension problems
//! runs = 30
//! seed = 7                           # base seed of the run streams
//! instance_seed = 1                  # seed of generated shift/rotation data
//! population = 30
//! fes_mult = 3000                    # fes_max = fes_mult * D unless fes_max is set
//! # fes_max = 30000
//! # trace_stride = 30                # defaults to the population size
//! jobs = 0                           # worker threads, 0 = all cores
//!
//! [params]                           # optional algorithm overrides
//! # h = 0.5
//! # g1 = 0.4
//! # g2 = 0.5
//! # archive_capacity = 200
//! # elite_weight = 0.5
//! # levy_beta = 1.5
//! ```

use std::path::Path;

use mco_core::{AlgorithmParams, Variant};
use mco_problems::{fixed_dim, problem, ProblemSpec, DESK_SUITE};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::batch::BatchSpec;
use crate::error::{Error, Result};
use crate::run::{DEFAULT_FES_MULT, DEFAULT_POPULATION};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub h: Option<f64>,
    pub g1: Option<f64>,
    pub g2: Option<f64>,
    pub archive_capacity: Option<usize>,
    pub elite_weight: Option<f64>,
    pub levy_beta: Option<f64>,
}

impl ParamOverrides {
    pub fn apply(&self, variant: Variant, dim: usize) -> AlgorithmParams {
        let mut p = AlgorithmParams::defaults(variant, dim);
        if let Some(v) = self.h {
            p.h = v;
        }
        if let Some(v) = self.g1 {
            p.g1 = v;
        }
        if let Some(v) = self.g2 {
            p.g2 = v;
        }
        if let Some(v) = self.archive_capacity {
            p.archive_capacity = v;
        }
        if let Some(v) = self.elite_weight {
            p.elite_weight = v;
        }
        if let Some(v) = self.levy_beta {
            p.levy_beta = v;
        }
        p
    }
}

fn default_dim() -> usize {
    10
}
fn default_runs() -> usize {
    30
}
fn default_instance_seed() -> u64 {
    1
}
fn default_population() -> usize {
    DEFAULT_POPULATION
}
fn default_fes_mult() -> usize {
    DEFAULT_FES_MULT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithms: Vec<String>,
    pub problems: Vec<String>,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_instance_seed")]
    pub instance_seed: u64,
    #[serde(default = "default_population")]
    pub population: usize,
    #[serde(default = "default_fes_mult")]
    pub fes_mult: usize,
    #[serde(default)]
    pub fes_max: Option<usize>,
    #[serde(default)]
    pub trace_stride: Option<usize>,
    #[serde(default)]
    pub jobs: usize,
    #[serde(default)]
    pub params: ParamOverrides,
}

impl ExperimentConfig {
    /// Config with defaults for everything but the algorithm and problem lists.
    pub fn new(algorithms: Vec<String>, problems: Vec<String>) -> Self {
        Self {
            algorithms,
            problems,
            dim: default_dim(),
            runs: default_runs(),
            seed: 0,
            instance_seed: default_instance_seed(),
            population: default_population(),
            fes_mult: default_fes_mult(),
            fes_max: None,
            trace_stride: None,
            jobs: 0,
            params: ParamOverrides::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn variants(&self) -> Result<Vec<Variant>> {
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms given".into()));
        }
        self.algorithms
            .iter()
            .map(|a| a.parse::<Variant>().map_err(|e| Error::Config(e.to_string())))
            .collect()
    }

    /// Problem names with the `desk` and `engineering` groups expanded.
    pub fn problem_names(&self) -> Result<Vec<String>> {
        if self.problems.is_empty() {
            return Err(Error::Config("no problems given".into()));
        }
        let mut out = Vec::new();
        for p in &self.problems {
            match p.trim().to_ascii_lowercase().as_str() {
                "desk" => out.extend(DESK_SUITE.iter().map(|(n, _, _)| n.to_string())),
                "engineering" => out.extend((1..=10).map(|i| format!("rw{i:02}"))),
                other => out.push(other.to_string()),
            }
        }
        Ok(out)
    }

    pub fn problem_specs(&self) -> Result<Vec<ProblemSpec>> {
        self.problem_names()?
            .iter()
            .map(|name| {
                let dim = fixed_dim(name).unwrap_or(self.dim);
                Ok(problem(name, dim, self.instance_seed)?)
            })
            .collect()
    }

    /// Checks every field and resolves every name without running anything.
    pub fn validate(&self) -> Result<()> {
        let variants = self.variants()?;
        let specs = self.problem_specs()?;
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.dim == 0 {
            return Err(Error::Config("dim must be positive".into()));
        }
        if self.fes_mult == 0 && self.fes_max.is_none() {
            return Err(Error::Config("fes_mult must be positive".into()));
        }
        for v in &variants {
            for s in &specs {
                self.params.apply(*v, s.dim()).validate()?;
                let fes_max = self.fes_max.unwrap_or(self.fes_mult * s.dim());
                if fes_max < 2 * self.population {
                    return Err(Error::Config(format!(
                        "{}: fes_max {fes_max} is below twice the population {}",
                        s.name, self.population
                    )));
                }
            }
        }
        if self.population < 5 {
            return Err(Error::Config(format!("population must be at least 5, got {}", self.population)));
        }
        if self.trace_stride == Some(0) {
            return Err(Error::Config("trace_stride must be positive".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, with `jobs` zeroed since it cannot change results.
    pub fn hash(&self) -> String {
        let view = ExperimentConfig {
            jobs: 0,
            ..self.clone()
        };
        hex_sha256(serde_json::to_string(&view).expect("config serializes").as_bytes())
    }

    pub fn to_batch(&self) -> Result<BatchSpec> {
        self.validate()?;
        Ok(BatchSpec {
            algorithms: self.variants()?,
            problems: self.problem_specs()?,
            runs: self.runs,
            base_seed: self.seed,
            population: self.population,
            fes_mult: self.fes_mult,
            fes_max: self.fes_max,
            trace_stride: self.trace_stride,
            params: self.params.clone(),
            jobs: self.jobs,
            config_hash: Some(self.hash()),
        })
    }
}

pub fn hex_sha256(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
