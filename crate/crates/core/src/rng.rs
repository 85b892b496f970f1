//! Random streams and the samplers shared by every update rule.
//!
//! All randomness flows through [`RngStream`], a ChaCha8 generator keyed by an
//! explicit 64-bit seed. ChaCha output is specified bit-for-bit, so equal seeds
//! give equal draws on every platform. Child streams are derived with
//! [`derive_seed`], a SplitMix64 fold over the parent seed and a list of
//! integer tags, so a stream depends only on its tags and never on the order in
//! which siblings were created.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Default Lévy stability index for the Mantegna construction.
pub const DEFAULT_LEVY_BETA: f64 = 1.5;

/// Starting points that put the logistic map on a fixed point or collapse it to zero.
pub const DEGENERATE_X0: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Source of the scalar draws consumed by the update rules.
///
/// Production code uses [`RngStream`]; tests substitute scripted tapes to pin
/// individual draws.
pub trait Draws {
    /// Uniform draw on `[0, 1)`.
    fn uniform(&mut self) -> f64;
    /// Standard normal draw.
    fn normal(&mut self) -> f64;
    /// Uniform index on `0..n`. `n` must be positive.
    fn index(&mut self, n: usize) -> usize;
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `base` and a sequence of tags.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(mix64(base), |acc, &t| mix64(acc ^ mix64(t)))
}

/// Hashes a string tag into a `u64` for use with [`derive_seed`] (FNV-1a).
pub fn tag_of(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Seeded, single-owner random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream; depends only on this stream's seed and `tag`.
    pub fn split(&self, tag: u64) -> RngStream {
        RngStream::new(derive_seed(self.seed, &[tag]))
    }

    /// Uniform draw on the open interval `(0, 1)`.
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u: f64 = self.inner.random();
            if u > 0.0 {
                return u;
            }
        }
    }
}

impl Draws for RngStream {
    fn uniform(&mut self) -> f64 {
        self.inner.random()
    }

    fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }
}

/// Axis-aligned search box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::InvalidBounds(format!(
                "lower has {} entries, upper has {}",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(Error::InvalidBounds("zero dimensions".into()));
        }
        for (d, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidBounds(format!(
                    "dimension {d}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same interval in every dimension.
    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, d: usize) -> f64 {
        self.upper[d] - self.lower[d]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    /// Uniform point in the box.
    pub fn sample(&self, rng: &mut impl Draws) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| lo + (hi - lo) * rng.uniform())
            .collect()
    }

    /// Translated copy of the box.
    pub fn translated(&self, t: &[f64]) -> Bounds {
        Bounds {
            lower: self.lower.iter().zip(t).map(|(a, b)| a + b).collect(),
            upper: self.upper.iter().zip(t).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Projects `x` onto the box.
pub fn clamp(x: &[f64], bounds: &Bounds) -> Vec<f64> {
    let mut out = x.to_vec();
    clamp_in_place(&mut out, bounds);
    out
}

pub fn clamp_in_place(x: &mut [f64], bounds: &Bounds) {
    for ((v, lo), hi) in x.iter_mut().zip(&bounds.lower).zip(&bounds.upper) {
        // NaN components land on the lower edge.
        *v = if v.is_nan() { *lo } else { v.clamp(*lo, *hi) };
    }
}

/// Logistic-map initialization parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaosInitConfig {
    pub alpha: f64,
    /// Starting value; `None` draws one from the run's stream.
    pub x0: Option<f64>,
    /// Population size.
    pub n: usize,
}

impl ChaosInitConfig {
    pub fn new(n: usize) -> Self {
        Self {
            alpha: 4.0,
            x0: None,
            n,
        }
    }

    pub fn with_x0(mut self, x0: f64) -> Self {
        self.x0 = Some(x0);
        self
    }
}

fn check_x0(alpha: f64, x0: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 4.0) {
        return Err(Error::InvalidParameter(format!(
            "logistic alpha must lie in (0, 4], got {alpha}"
        )));
    }
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::InvalidParameter(format!(
            "logistic x0 must lie in (0, 1), got {x0}"
        )));
    }
    if DEGENERATE_X0.contains(&x0) {
        return Err(Error::CollapsedOrbit(format!(
            "x0 = {x0} is a degenerate starting point of the logistic map"
        )));
    }
    Ok(())
}

/// Iterates `x_i = alpha * x_{i-1} * (1 - x_{i-1})` and returns `x_1..x_count`.
pub fn logistic_chain(alpha: f64, x0: f64, count: usize) -> Result<Vec<f64>> {
    check_x0(alpha, x0)?;
    if count == 0 {
        return Err(Error::InvalidParameter("chain length must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(count);
    let mut prev = x0;
    for i in 1..=count {
        let next = alpha * prev * (1.0 - prev);
        if next == 0.0 || next == prev {
            return Err(Error::CollapsedOrbit(format!(
                "orbit from x0 = {x0} reached {next} at step {i}"
            )));
        }
        out.push(next);
        prev = next;
    }
    Ok(out)
}

/// Draws a logistic starting point uniformly on `(0, 1)` away from the degenerate set.
pub fn draw_x0(rng: &mut RngStream) -> f64 {
    loop {
        let x0 = rng.uniform_open();
        if !DEGENERATE_X0.contains(&x0) {
            return x0;
        }
    }
}

/// Chaotic initial positions: one logistic chain of length `n * D`, consumed row-major.
pub fn init_population(
    cfg: &ChaosInitConfig,
    bounds: &Bounds,
    rng: &mut RngStream,
) -> Result<Vec<Vec<f64>>> {
    if cfg.n < 5 {
        return Err(Error::PopulationTooSmall(format!(
            "need at least 5 agents, got {}",
            cfg.n
        )));
    }
    let dim = bounds.dim();
    let len = cfg.n * dim;
    let chain = match cfg.x0 {
        Some(x0) => logistic_chain(cfg.alpha, x0, len)?,
        None => {
            // A drawn x0 can still hit a preimage of 0 or of the fixed point;
            // redraw a bounded number of times before giving up.
            let mut attempt = logistic_chain(cfg.alpha, draw_x0(rng), len);
            for _ in 0..16 {
                if attempt.is_ok() {
                    break;
                }
                attempt = logistic_chain(cfg.alpha, draw_x0(rng), len);
            }
            attempt?
        }
    };
    Ok(chain
        .chunks(dim)
        .map(|row| {
            let x: Vec<f64> = row
                .iter()
                .enumerate()
                .map(|(d, c)| map_chaotic(c.clamp(0.0, 1.0), bounds.lower[d], bounds.upper[d]))
                .collect();
            clamp(&x, bounds)
        })
        .collect())
}

/// Maps a chaotic value in `[0, 1]` into `[lower, upper]`.
pub fn map_chaotic(value: f64, lower: f64, upper: f64) -> f64 {
    lower + (upper - lower) * value
}

/// Mantegna scale `sigma_u` for stability index `beta`.
pub fn levy_sigma(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "Levy beta must lie in (0, 2], got {beta}"
        )));
    }
    let num = gamma(1.0 + beta) * (std::f64::consts::PI * beta / 2.0).sin();
    let den = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    Ok((num / den).max(0.0).powf(1.0 / beta))
}

/// One Mantegna step per component: `u / |v|^(1/beta)`.
pub fn levy_sample(dim: usize, beta: f64, rng: &mut impl Draws) -> Result<Vec<f64>> {
    let sigma = levy_sigma(beta)?;
    Ok(levy_with_sigma(dim, beta, sigma, rng))
}

/// [`levy_sample`] with a precomputed `sigma_u`.
pub fn levy_with_sigma(dim: usize, beta: f64, sigma: f64, rng: &mut impl Draws) -> Vec<f64> {
    (0..dim)
        .map(|_| {
            let u = rng.normal() * sigma;
            let v = rng.normal();
            u / v.abs().powf(1.0 / beta)
        })
        .collect()
}
