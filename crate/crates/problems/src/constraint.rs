//! Reinitialization-based constraint handling.

use mco_core::{Draws, Evaluation};
use serde::{Deserialize, Serialize};

use crate::spec::ProblemSpec;

/// Fitness floor for points that violate a constraint after all resamples.
///
/// Infeasible fitness is `INFEASIBLE_BASE * (1 + total violation)`, which
/// ranks every infeasible point behind every feasible one and orders
/// infeasible points by how badly they violate.
pub const INFEASIBLE_BASE: f64 = 1e100;

/// Slack used when an equality `h(x) = 0` is rewritten as `|h(x)| - eps <= 0`.
pub const EQUALITY_EPS: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PenaltyMode {
    #[default]
    Reinitialize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyPolicy {
    pub mode: PenaltyMode,
    pub violation_tolerance: f64,
    /// Fresh box samples tried for an infeasible point. One matches a single
    /// reinitialization; larger caps spend budget on blind sampling.
    pub max_resamples: usize,
}

impl Default for PenaltyPolicy {
    fn default() -> Self {
        Self {
            mode: PenaltyMode::Reinitialize,
            violation_tolerance: 1e-8,
            max_resamples: 1,
        }
    }
}

impl PenaltyPolicy {
    pub fn is_feasible(&self, constraint_values: &[f64]) -> bool {
        constraint_values.iter().all(|g| *g <= self.violation_tolerance)
    }
}

/// Sum of positive constraint values; NaN counts as infinite violation.
pub fn total_violation(constraint_values: &[f64]) -> f64 {
    constraint_values
        .iter()
        .map(|g| if g.is_nan() { f64::INFINITY } else { g.max(0.0) })
        .sum()
}

pub fn penalized(violation: f64) -> f64 {
    INFEASIBLE_BASE * (1.0 + violation)
}

/// Evaluates `x`, replacing it with uniform box samples while it is infeasible.
///
/// Each candidate (the original and every resample) costs one evaluation and
/// resampling stops at `policy.max_resamples` or when `budget` is spent. When
/// no feasible candidate turns up, `x` becomes the least-violating candidate
/// seen, the original included.
pub fn constrained_evaluate(
    spec: &ProblemSpec,
    x: &mut Vec<f64>,
    policy: &PenaltyPolicy,
    rng: &mut impl Draws,
    budget: usize,
) -> Evaluation {
    mco_core::rng::clamp_in_place(x, spec.bounds());
    let budget = budget.max(1);
    let g = spec.constraints(x);
    if policy.is_feasible(&g) {
        return Evaluation {
            fitness: spec.objective(x),
            feasible: true,
            evaluations: 1,
        };
    }
    let mut used = 1;
    let mut least = total_violation(&g);
    let mut resamples = 0;
    while resamples < policy.max_resamples && used < budget {
        let candidate = spec.bounds().sample(rng);
        used += 1;
        resamples += 1;
        let g = spec.constraints(&candidate);
        if policy.is_feasible(&g) {
            let fitness = spec.objective(&candidate);
            *x = candidate;
            return Evaluation {
                fitness,
                feasible: true,
                evaluations: used,
            };
        }
        let v = total_violation(&g);
        if v < least {
            least = v;
            *x = candidate;
        }
    }
    Evaluation {
        fitness: penalized(least),
        feasible: false,
        evaluations: used,
    }
}
