//! Covariance learning: elite selection, the FIFO elite archive, weighted
//! Gaussian model estimation and the three sampling operators that replace
//! school updates.

use std::collections::VecDeque;

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::eco::Agent;
use crate::error::{Error, Result};
use crate::rng::Draws;

/// Jitter escalations tried after the initial attempt before falling back to the diagonal.
pub const MAX_JITTER_ESCALATIONS: u32 = 8;

/// Combined elite score of one agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EliteScore {
    pub fitness_norm: f64,
    pub distance_norm: f64,
    pub combined: f64,
}

/// Scores agents by normalized fitness merit and normalized distance from `best`.
///
/// `fitness_weight` multiplies the fitness term and `1 - fitness_weight` the
/// distance term. A flat population scores fitness 1 everywhere; a population
/// collapsed onto `best` scores distance 0 everywhere.
pub fn elite_scores(agents: &[Agent], best: &[f64], fitness_weight: f64) -> Vec<EliteScore> {
    let f_min = agents.iter().map(|a| a.fitness).fold(f64::INFINITY, f64::min);
    let f_max = agents.iter().map(|a| a.fitness).fold(f64::NEG_INFINITY, f64::max);
    let dists: Vec<f64> = agents
        .iter()
        .map(|a| {
            a.position
                .iter()
                .zip(best)
                .map(|(x, b)| (x - b) * (x - b))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let d_max = dists.iter().copied().fold(0.0, f64::max);
    let f_span = f_max - f_min;
    agents
        .iter()
        .zip(&dists)
        .map(|(a, &d)| {
            let fitness_norm = if f_span > 0.0 && f_span.is_finite() {
                (f_max - a.fitness) / f_span
            } else {
                1.0
            };
            let distance_norm = if d_max > 0.0 { d / d_max } else { 0.0 };
            EliteScore {
                fitness_norm,
                distance_norm,
                combined: fitness_weight * fitness_norm + (1.0 - fitness_weight) * distance_norm,
            }
        })
        .collect()
}

/// Indices of the `k` agents with the highest combined score (ties keep index order).
pub fn elite_select(agents: &[Agent], best: &[f64], k: usize, fitness_weight: f64) -> Result<Vec<usize>> {
    if k == 0 || k > agents.len() {
        return Err(Error::InvalidParameter(format!(
            "elite count must lie in 1..={}, got {k}",
            agents.len()
        )));
    }
    let scores = elite_scores(agents, best, fitness_weight);
    let mut order: Vec<usize> = (0..agents.len()).collect();
    order.sort_by(|&a, &b| scores[b].combined.total_cmp(&scores[a].combined));
    order.truncate(k);
    Ok(order)
}

/// An archived elite and the fitness it had when stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry {
    pub position: Vec<f64>,
    pub fitness: f64,
}

/// First-in-first-out store of elite positions.
#[derive(Debug, Clone, PartialEq)]
pub struct EliteArchive {
    capacity: usize,
    entries: VecDeque<ArchiveEntry>,
}

impl EliteArchive {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity: capacity.max(1),
            entries: VecDeque::with_capacity(capacity),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &ArchiveEntry> {
        self.entries.iter()
    }

    pub fn dim(&self) -> Option<usize> {
        self.entries.front().map(|e| e.position.len())
    }

    /// Appends in order and evicts the oldest entries beyond capacity.
    pub fn push<I>(&mut self, elites: I) -> Result<()>
    where
        I: IntoIterator<Item = ArchiveEntry>,
    {
        let elites: Vec<ArchiveEntry> = elites.into_iter().collect();
        let dim = self.dim().or_else(|| elites.first().map(|e| e.position.len()));
        if let Some(dim) = dim {
            if let Some(bad) = elites.iter().find(|e| e.position.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: bad.position.len(),
                });
            }
        }
        for e in elites {
            self.entries.push_back(e);
            while self.entries.len() > self.capacity {
                self.entries.pop_front();
            }
        }
        Ok(())
    }
}

/// Normalized log-rank weights `ln((m+1)/i) / sum_j ln((m+1)/j)` for ranks `1..=m`.
pub fn rank_weights(m: usize) -> Vec<f64> {
    let top = (m as f64 + 1.0).ln();
    let raw: Vec<f64> = (1..=m).map(|i| top - (i as f64).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

#[derive(Debug, Clone, PartialEq)]
enum Factor {
    Cholesky(DMatrix<f64>),
    Diagonal(DVector<f64>),
}

/// Weighted Gaussian model of the archive.
#[derive(Debug, Clone, PartialEq)]
pub struct CovModel {
    pub mean_better: Vec<f64>,
    /// Weights in rank order (best stored fitness first).
    pub weights: Vec<f64>,
    pub cov: DMatrix<f64>,
    /// Diagonal jitter that made the factorization succeed; `None` when the
    /// diagonal fallback was used or the matrix is not finite.
    pub jitter: Option<f64>,
    factor: Option<Factor>,
}

impl CovModel {
    /// Builds the model and its sampling factor from a mean and covariance.
    pub fn from_parts(mean_better: Vec<f64>, weights: Vec<f64>, cov: DMatrix<f64>) -> Self {
        let (factor, jitter) = factorize(&cov);
        Self {
            mean_better,
            weights,
            cov,
            jitter,
            factor,
        }
    }

    pub fn dim(&self) -> usize {
        self.mean_better.len()
    }

    /// Lower-triangular factor used for sampling, if the matrix was finite.
    pub fn factor(&self) -> Option<DMatrix<f64>> {
        match &self.factor {
            Some(Factor::Cholesky(l)) => Some(l.clone()),
            Some(Factor::Diagonal(d)) => Some(DMatrix::from_diagonal(d)),
            None => None,
        }
    }

    /// `center + L z` with `z` standard normal.
    pub fn sample_around(&self, center: &[f64], rng: &mut impl Draws) -> Result<Vec<f64>> {
        let factor = self.factor.as_ref().ok_or(Error::NonFiniteCovariance)?;
        let dim = self.dim();
        if center.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: center.len(),
            });
        }
        let z = DVector::from_iterator(dim, (0..dim).map(|_| rng.normal()));
        let step = match factor {
            Factor::Cholesky(l) => l * z,
            Factor::Diagonal(d) => d.component_mul(&z),
        };
        Ok(center.iter().zip(step.iter()).map(|(c, s)| c + s).collect())
    }
}

fn factorize(cov: &DMatrix<f64>) -> (Option<Factor>, Option<f64>) {
    if cov.iter().any(|v| !v.is_finite()) {
        return (None, None);
    }
    let dim = cov.nrows();
    let mut eps = 1e-12 * (cov.trace() / dim as f64 + 1.0).abs();
    for _ in 0..=MAX_JITTER_ESCALATIONS {
        let mut jittered = cov.clone();
        for i in 0..dim {
            jittered[(i, i)] += eps;
        }
        if let Some(ch) = Cholesky::new(jittered) {
            return (Some(Factor::Cholesky(ch.l())), Some(eps));
        }
        eps *= 10.0;
    }
    let diag = DVector::from_iterator(dim, (0..dim).map(|i| cov[(i, i)].max(0.0).sqrt()));
    (Some(Factor::Diagonal(diag)), None)
}

/// Weighted mean and covariance of the archive, ranking entries by stored fitness.
pub fn estimate(archive: &EliteArchive) -> Result<CovModel> {
    let m = archive.len();
    if m < 2 {
        return Err(Error::ArchiveTooSmall(m));
    }
    let mut ranked: Vec<&ArchiveEntry> = archive.entries().collect();
    ranked.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
    let dim = ranked[0].position.len();
    let weights = rank_weights(m);

    let mut mean = vec![0.0; dim];
    for (w, e) in weights.iter().zip(&ranked) {
        for (acc, x) in mean.iter_mut().zip(&e.position) {
            *acc += w * x;
        }
    }

    let mut cov = DMatrix::<f64>::zeros(dim, dim);
    let mut diff = vec![0.0; dim];
    for e in &ranked {
        for (d, (x, mu)) in diff.iter_mut().zip(e.position.iter().zip(&mean)) {
            *d = x - mu;
        }
        for i in 0..dim {
            for j in i..dim {
                cov[(i, j)] += diff[i] * diff[j];
            }
        }
    }
    for i in 0..dim {
        for j in i..dim {
            let v = cov[(i, j)] / m as f64;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    Ok(CovModel::from_parts(mean, weights, cov))
}

/// One draw from `N(mean_better, C)`.
pub fn sample_gaussian(model: &CovModel, rng: &mut impl Draws) -> Result<Vec<f64>> {
    model.sample_around(&model.mean_better, rng)
}

/// `sample + r * (mean_better - x)`.
pub fn gaussian_move(sample: &[f64], mean_better: &[f64], x: &[f64], r: f64) -> Vec<f64> {
    sample
        .iter()
        .zip(mean_better.iter().zip(x))
        .map(|(s, (m, xi))| s + r * (m - xi))
        .collect()
}

/// Centroid of the elite mean, the best position and the agent itself.
pub fn shift_center(mean_better: &[f64], best: &[f64], x: &[f64]) -> Vec<f64> {
    mean_better
        .iter()
        .zip(best.iter().zip(x))
        .map(|(m, (b, xi))| (m + b + xi) / 3.0)
        .collect()
}

/// `sample + r1 * (x_ran1 - best) + r2 * (x_ran2 - worst)`.
pub fn differential_move(
    sample: &[f64],
    ran1: &[f64],
    best: &[f64],
    ran2: &[f64],
    worst: &[f64],
    r1: f64,
    r2: f64,
) -> Vec<f64> {
    (0..sample.len())
        .map(|d| sample[d] + r1 * (ran1[d] - best[d]) + r2 * (ran2[d] - worst[d]))
        .collect()
}

/// Gaussian covariance operator (before bound repair).
pub fn gaussian_operator(x: &[f64], model: &CovModel, rng: &mut impl Draws) -> Result<Vec<f64>> {
    let sample = sample_gaussian(model, rng)?;
    let r = rng.uniform();
    Ok(gaussian_move(&sample, &model.mean_better, x, r))
}

/// Shift covariance operator (before bound repair).
pub fn shift_operator(x: &[f64], model: &CovModel, best: &[f64], rng: &mut impl Draws) -> Result<Vec<f64>> {
    let center = shift_center(&model.mean_better, best, x);
    let sample = model.sample_around(&center, rng)?;
    let r = rng.uniform();
    Ok(gaussian_move(&sample, &model.mean_better, x, r))
}

/// Two distinct indices in `0..n`, both different from `own`.
pub fn draw_partners(n: usize, own: usize, rng: &mut impl Draws) -> Result<(usize, usize)> {
    if n < 3 {
        return Err(Error::PopulationTooSmall(format!(
            "differential operator needs at least 3 agents, got {n}"
        )));
    }
    let skip = |mut i: usize, taken: &[usize]| {
        let mut sorted = taken.to_vec();
        sorted.sort_unstable();
        for t in sorted {
            if i >= t {
                i += 1;
            }
        }
        i
    };
    let a = skip(rng.index(n - 1), &[own]);
    let b = skip(rng.index(n - 2), &[own, a]);
    Ok((a, b))
}

/// Differential covariance operator (before bound repair) for agent `own` of `population`.
pub fn differential_operator(
    own: usize,
    model: &CovModel,
    population: &[Agent],
    best: &[f64],
    worst: &[f64],
    rng: &mut impl Draws,
) -> Result<Vec<f64>> {
    let (a, b) = draw_partners(population.len(), own, rng)?;
    let sample = sample_gaussian(model, rng)?;
    let r1 = rng.uniform();
    let r2 = rng.uniform();
    Ok(differential_move(
        &sample,
        &population[a].position,
        best,
        &population[b].position,
        worst,
        r1,
        r2,
    ))
}
