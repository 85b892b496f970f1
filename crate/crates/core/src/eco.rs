//! Stage schedule and the school/student position updates of the educational
//! competition optimizer.
//!
//! Every update is split into a pure formula taking its random draws as
//! arguments (`*_move`) and the stage-level driver in [`crate::optimizer`] that
//! pulls those draws from a stream. Bound repair happens in the driver.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Draws;

/// Floor applied to `|P|` before dividing by it.
pub const P_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stage {
    Primary,
    Middle,
    High,
}

/// Stage for a 1-based iteration counter: Primary, Middle, High, Primary, ...
pub fn stage_of(iteration: usize) -> Stage {
    match iteration.saturating_sub(1) % 3 {
        0 => Stage::Primary,
        1 => Stage::Middle,
        _ => Stage::High,
    }
}

/// Step weight `0.1 * ln(2 - fes / fes_max)`.
pub fn omega(fes: usize, fes_max: usize) -> Result<f64> {
    if fes_max == 0 {
        return Err(Error::InvalidParameter("fes_max must be positive".into()));
    }
    if fes > fes_max {
        return Err(Error::BudgetExceeded { fes, fes_max });
    }
    Ok(0.1 * (2.0 - fes as f64 / fes_max as f64).ln())
}

/// Algorithm family. The four covariance variants differ only in which
/// school update each stage uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    Eco,
    Geco,
    Seco,
    Deco,
    IecoMco,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Eco,
        Variant::Geco,
        Variant::Seco,
        Variant::Deco,
        Variant::IecoMco,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Eco => "ECO",
            Variant::Geco => "GECO",
            Variant::Seco => "SECO",
            Variant::Deco => "DECO",
            Variant::IecoMco => "IECO-MCO",
        }
    }

    pub fn school_rule(self, stage: Stage) -> SchoolRule {
        match (self, stage) {
            (Variant::Eco, _) => SchoolRule::Eco,
            (Variant::Geco, _) => SchoolRule::Gaussian,
            (Variant::Seco, _) => SchoolRule::Shift,
            (Variant::Deco, _) => SchoolRule::Differential,
            (Variant::IecoMco, Stage::Primary) => SchoolRule::Gaussian,
            (Variant::IecoMco, Stage::Middle) => SchoolRule::Shift,
            (Variant::IecoMco, Stage::High) => SchoolRule::Differential,
        }
    }

    pub fn uses_covariance(self) -> bool {
        self != Variant::Eco
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('_', "-");
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == key || (key == "IECO" && *v == Variant::IecoMco))
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown variant '{s}'; valid variants: ECO, GECO, SECO, DECO, IECO-MCO"
                ))
            })
    }
}

/// How school agents move in a given stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchoolRule {
    Eco,
    Gaussian,
    Shift,
    Differential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmParams {
    pub variant: Variant,
    /// Talent threshold `Th`.
    pub h: f64,
    /// School fraction in the primary stage.
    pub g1: f64,
    /// School fraction in the middle and high stages.
    pub g2: f64,
    /// Elite archive capacity.
    pub archive_capacity: usize,
    /// Weight of the fitness term in the elite score; distance gets the rest.
    pub elite_weight: f64,
    pub levy_beta: f64,
}

impl AlgorithmParams {
    /// Published defaults: ECO uses (0.5, 0.2, 0.1); the covariance variants use
    /// (0.5, 0.4, 0.5) with an archive of `20 * dim` entries.
    pub fn defaults(variant: Variant, dim: usize) -> Self {
        let (g1, g2) = if variant == Variant::Eco {
            (0.2, 0.1)
        } else {
            (0.4, 0.5)
        };
        Self {
            variant,
            h: 0.5,
            g1,
            g2,
            archive_capacity: 20 * dim.max(1),
            elite_weight: 0.5,
            levy_beta: crate::rng::DEFAULT_LEVY_BETA,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let frac = |name: &str, g: f64| {
            if g > 0.0 && g < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {g}")))
            }
        };
        frac("G1", self.g1)?;
        frac("G2", self.g2)?;
        if !(0.0..=1.0).contains(&self.h) {
            return Err(Error::InvalidParameter(format!("H must lie in [0, 1], got {}", self.h)));
        }
        if self.archive_capacity == 0 {
            return Err(Error::InvalidParameter("archive capacity S must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.elite_weight) {
            return Err(Error::InvalidParameter(format!(
                "elite weight must lie in [0, 1], got {}",
                self.elite_weight
            )));
        }
        crate::rng::levy_sigma(self.levy_beta)?;
        Ok(())
    }

    pub fn school_fraction(&self, stage: Stage) -> f64 {
        match stage {
            Stage::Primary => self.g1,
            Stage::Middle | Stage::High => self.g2,
        }
    }
}

/// `max(1, round(g * n))`, capped at `n`.
pub fn school_count(g: f64, n: usize) -> usize {
    ((g * n as f64).round() as usize).clamp(1, n.max(1))
}

/// Per-iteration scalars shared by all agents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageContext {
    pub fes: usize,
    pub fes_max: usize,
    pub omega: f64,
    /// `fes / fes_max`.
    pub progress: f64,
    pub threshold: f64,
}

impl StageContext {
    pub fn new(fes: usize, fes_max: usize, threshold: f64) -> Result<Self> {
        Ok(Self {
            fes,
            fes_max,
            omega: omega(fes, fes_max)?,
            progress: fes as f64 / fes_max as f64,
            threshold,
        })
    }

    /// `P = 4 * randn * (1 - fes / fes_max)`.
    pub fn p_factor(&self, randn: f64) -> f64 {
        4.0 * randn * (1.0 - self.progress)
    }

    /// Draws one student's `(P, E)` pair: a normal for `P`, then a uniform talent `R`.
    pub fn draw_talent(&self, rng: &mut impl Draws) -> (f64, f64) {
        let p = self.p_factor(rng.normal());
        let r = rng.uniform();
        (p, talent_exponent(p, r, self.threshold, self.progress))
    }
}

/// `E = (pi / P) * progress` for talented students (`r > th`), else 1.
pub fn talent_exponent(p: f64, r: f64, th: f64, progress: f64) -> f64 {
    if r > th {
        let p = if p.abs() < P_FLOOR {
            if p.is_sign_negative() {
                -P_FLOOR
            } else {
                P_FLOOR
            }
        } else {
            p
        };
        PI / p * progress
    } else {
        1.0
    }
}

/// Position and scalar fitness of one agent (minimization).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub position: Vec<f64>,
    pub fitness: f64,
    pub feasible: bool,
}

impl Agent {
    pub fn new(position: Vec<f64>, fitness: f64) -> Self {
        Self {
            position,
            fitness,
            feasible: true,
        }
    }
}

/// Best, worst and mean of a population.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationStats {
    pub best: Agent,
    pub worst: Agent,
    pub mean: Vec<f64>,
}

impl PopulationStats {
    pub fn of(agents: &[Agent]) -> Self {
        let best = agents
            .iter()
            .min_by(|a, b| a.fitness.total_cmp(&b.fitness))
            .expect("non-empty population");
        let worst = agents
            .iter()
            .rev()
            .max_by(|a, b| a.fitness.total_cmp(&b.fitness))
            .expect("non-empty population");
        Self {
            best: best.clone(),
            worst: worst.clone(),
            mean: mean_of(agents.iter().map(|a| a.position.as_slice())),
        }
    }
}

/// Arithmetic mean of a non-empty set of equal-length vectors.
pub fn mean_of<'a>(rows: impl IntoIterator<Item = &'a [f64]>) -> Vec<f64> {
    let mut iter = rows.into_iter();
    let first = iter.next().expect("mean of empty set");
    let mut acc = first.to_vec();
    let mut n = 1usize;
    for row in iter {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
        n += 1;
    }
    acc.iter_mut().for_each(|a| *a /= n as f64);
    acc
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Index of the school nearest to `x` (Euclidean; ties go to the lowest index).
pub fn closest(x: &[f64], schools: &[&[f64]]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, s) in schools.iter().enumerate() {
        let d = sq_dist(x, s);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Primary-stage school move: `x + omega * (school_mean - x) * levy`.
pub fn primary_school_move(x: &[f64], school_mean: &[f64], omega: f64, levy: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(school_mean)
        .zip(levy)
        .map(|((xi, mi), li)| xi + omega * (mi - xi) * li)
        .collect()
}

/// Primary-stage student move: `x + omega * (close - x) * randn`.
pub fn primary_student_move(x: &[f64], close: &[f64], omega: f64, randn: f64) -> Vec<f64> {
    x.iter()
        .zip(close)
        .map(|(xi, ci)| xi + omega * (ci - xi) * randn)
        .collect()
}

/// Middle-stage school move: `x + (best - mean) * exp(progress - 1) * levy`.
pub fn middle_school_move(
    x: &[f64],
    best: &[f64],
    mean: &[f64],
    progress: f64,
    levy: &[f64],
) -> Vec<f64> {
    let decay = (progress - 1.0).exp();
    x.iter()
        .zip(best.iter().zip(mean))
        .zip(levy)
        .map(|((xi, (bi, mi)), li)| xi + (bi - mi) * decay * li)
        .collect()
}

/// Middle-stage student move: `x - omega * close - P * (E * omega * close - x)`.
pub fn middle_student_move(x: &[f64], close: &[f64], omega: f64, p: f64, e: f64) -> Vec<f64> {
    x.iter()
        .zip(close)
        .map(|(xi, ci)| xi - omega * ci - p * (e * omega * ci - xi))
        .collect()
}

/// High-stage school move: `x + (best - mean) * n1 - (worst - mean) * n2`.
pub fn high_school_move(
    x: &[f64],
    best: &[f64],
    mean: &[f64],
    worst: &[f64],
    n1: f64,
    n2: f64,
) -> Vec<f64> {
    x.iter()
        .enumerate()
        .map(|(d, xi)| xi + (best[d] - mean[d]) * n1 - (worst[d] - mean[d]) * n2)
        .collect()
}

/// High-stage student move: `x - P * (E * best - x)`.
pub fn high_student_move(x: &[f64], best: &[f64], p: f64, e: f64) -> Vec<f64> {
    x.iter()
        .zip(best)
        .map(|(xi, bi)| xi - p * (e * bi - xi))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::tape::Tape;

    fn close_to(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn omega_endpoints_and_midpoint() {
        assert_eq!(omega(100, 100).unwrap(), 0.0);
        assert!(close_to(omega(0, 100).unwrap(), 0.069_314_718_055_994_53, 1e-15));
        assert!(close_to(omega(50, 100).unwrap(), 0.040_546_510_810_816_44, 1e-15));
        assert!(matches!(omega(101, 100), Err(Error::BudgetExceeded { .. })));
        assert!(omega(0, 0).is_err());
    }

    #[test]
    fn omega_decreases() {
        let w: Vec<f64> = (0..=10).map(|f| omega(f, 10).unwrap()).collect();
        assert!(w.windows(2).all(|p| p[1] < p[0]));
    }

    #[test]
    fn stage_cycle() {
        assert_eq!(stage_of(1), Stage::Primary);
        assert_eq!(stage_of(2), Stage::Middle);
        assert_eq!(stage_of(3), Stage::High);
        assert_eq!(stage_of(4), Stage::Primary);
        for k in 1..6 {
            let stages: Vec<Stage> = (7..7 + 3 * k).map(stage_of).collect();
            for s in [Stage::Primary, Stage::Middle, Stage::High] {
                assert_eq!(stages.iter().filter(|x| **x == s).count(), k);
            }
        }
    }

    #[test]
    fn primary_school_examples() {
        let x = [1.0, -2.0];
        assert_eq!(primary_school_move(&x, &x, 0.07, &[3.0, -9.0]), x.to_vec());
        assert_eq!(primary_school_move(&x, &[5.0, 5.0], 0.0, &[3.0, -9.0]), x.to_vec());
        let out = primary_school_move(&[2.0], &[4.0], 0.05, &[1.2]);
        assert!(close_to(out[0], 2.12, 1e-15));
    }

    #[test]
    fn primary_student_examples() {
        assert_eq!(primary_student_move(&[3.0], &[3.0], 0.06, 0.7), vec![3.0]);
        let schools: [&[f64]; 2] = [&[0.0], &[10.0]];
        assert_eq!(closest(&[3.0], &schools), 0);
        // Equidistant schools resolve to the lower index.
        assert_eq!(closest(&[5.0], &schools), 0);
        let out = primary_student_move(&[3.0], &[0.0], 0.06, -1.0);
        assert!(close_to(out[0], 3.18, 1e-15));
    }

    #[test]
    fn middle_school_examples() {
        assert_eq!(middle_school_move(&[1.0], &[3.0], &[3.0], 0.5, &[7.0]), vec![1.0]);
        // At the budget end the decay factor is exp(0) = 1.
        assert_eq!(middle_school_move(&[1.0], &[5.0], &[3.0], 1.0, &[0.5]), vec![2.0]);
        let out = middle_school_move(&[1.0], &[5.0], &[3.0], 0.5, &[0.5]);
        assert!(close_to(out[0], 1.0 + 2.0 * (-0.5f64).exp() * 0.5, 1e-15));
        assert!(close_to(out[0], 1.6065, 1e-4));
    }

    #[test]
    fn middle_student_examples() {
        let ctx = StageContext::new(100, 100, 0.5).unwrap();
        assert_eq!(ctx.p_factor(1.3), 0.0);
        assert_eq!(middle_student_move(&[2.0], &[1.0], 0.0, 0.0, 1.0), vec![2.0]);
        let out = middle_student_move(&[2.0], &[1.0], 0.05, 0.0, 1.0);
        assert!(close_to(out[0], 1.95, 1e-15));
        assert_eq!(talent_exponent(0.3, 0.5, 0.5, 0.4), 1.0);
        assert_eq!(talent_exponent(0.3, 0.1, 0.5, 0.4), 1.0);
        let out = middle_student_move(&[2.0], &[1.0], 0.05, 1.0, 1.0);
        assert!(close_to(out[0], 3.90, 1e-15));
    }

    #[test]
    fn talent_exponent_floors_tiny_p() {
        let e = talent_exponent(0.0, 0.9, 0.5, 0.25);
        assert!(close_to(e, PI / P_FLOOR * 0.25, 1.0));
        let e = talent_exponent(-1e-20, 0.9, 0.5, 0.25);
        assert!(e < 0.0 && e.is_finite());
        assert!(close_to(talent_exponent(2.0, 0.9, 0.5, 0.5), PI / 4.0, 1e-15));
    }

    #[test]
    fn draw_talent_order() {
        let ctx = StageContext::new(25, 100, 0.5).unwrap();
        let mut tape = Tape::new().normals(&[0.5]).uniforms(&[0.9]);
        let (p, e) = ctx.draw_talent(&mut tape);
        assert!(close_to(p, 4.0 * 0.5 * 0.75, 1e-15));
        assert!(close_to(e, PI / p * 0.25, 1e-15));
    }

    #[test]
    fn high_school_examples() {
        assert_eq!(high_school_move(&[4.0], &[1.0], &[1.0], &[1.0], 0.3, 2.0), vec![4.0]);
        assert_eq!(high_school_move(&[4.0], &[2.0], &[1.0], &[9.0], 0.0, 0.0), vec![4.0]);
        let out = high_school_move(&[0.0], &[2.0], &[1.0], &[5.0], 1.0, 0.5);
        assert!(close_to(out[0], -1.0, 1e-15));
    }

    #[test]
    fn high_student_examples() {
        assert_eq!(high_student_move(&[1.0], &[3.0], 0.0, 5.0), vec![1.0]);
        assert_eq!(high_student_move(&[3.0], &[3.0], 0.7, 1.0), vec![3.0]);
        let out = high_student_move(&[1.0], &[3.0], 0.5, 1.0);
        assert!(close_to(out[0], 0.0, 1e-15));
    }

    #[test]
    fn variant_parsing_and_rules() {
        assert_eq!("ieco-mco".parse::<Variant>().unwrap(), Variant::IecoMco);
        assert_eq!("IECO_MCO".parse::<Variant>().unwrap(), Variant::IecoMco);
        assert_eq!("geco".parse::<Variant>().unwrap(), Variant::Geco);
        let err = "PSO".parse::<Variant>().unwrap_err().to_string();
        assert!(err.contains("IECO-MCO") && err.contains("GECO"));
        assert_eq!(Variant::IecoMco.school_rule(Stage::Middle), SchoolRule::Shift);
        assert_eq!(Variant::Deco.school_rule(Stage::Primary), SchoolRule::Differential);
        assert_eq!(Variant::Eco.school_rule(Stage::High), SchoolRule::Eco);
    }

    #[test]
    fn defaults_follow_parameter_table() {
        let eco = AlgorithmParams::defaults(Variant::Eco, 10);
        assert_eq!((eco.h, eco.g1, eco.g2), (0.5, 0.2, 0.1));
        let ieco = AlgorithmParams::defaults(Variant::IecoMco, 10);
        assert_eq!((ieco.h, ieco.g1, ieco.g2, ieco.archive_capacity), (0.5, 0.4, 0.5, 200));
        assert!(ieco.validate().is_ok());
        let mut bad = ieco.clone();
        bad.g1 = 1.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn school_count_rounding() {
        assert_eq!(school_count(0.2, 30), 6);
        assert_eq!(school_count(0.1, 30), 3);
        assert_eq!(school_count(0.1, 5), 1);
        assert_eq!(school_count(0.01, 5), 1);
    }

    #[test]
    fn stats_of_population() {
        let agents = vec![
            Agent::new(vec![0.0, 0.0], 3.0),
            Agent::new(vec![2.0, 4.0], 1.0),
            Agent::new(vec![4.0, 2.0], 5.0),
        ];
        let s = PopulationStats::of(&agents);
        assert_eq!(s.best.fitness, 1.0);
        assert_eq!(s.worst.fitness, 5.0);
        assert_eq!(s.mean, vec![2.0, 2.0]);
    }
}
