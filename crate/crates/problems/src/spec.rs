use std::fmt;
use std::sync::Arc;

use mco_core::{Bounds, Evaluation, Objective, RngStream};
use serde::{Deserialize, Serialize};

use crate::constraint::{constrained_evaluate, total_violation, PenaltyPolicy};

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
/// All constraint values of a problem at once, each in `g(x) <= 0` form.
pub type ConstraintFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Unimodal,
    Multimodal,
    Hybrid,
    Composition,
    Engineering,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Unimodal => "unimodal",
            Category::Multimodal => "multimodal",
            Category::Hybrid => "hybrid",
            Category::Composition => "composition",
            Category::Engineering => "engineering",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Reference objective value together with where it comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownTarget {
    pub value: f64,
    pub note: String,
}

/// An immutable, thread-shareable minimization problem.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub category: Category,
    pub known_target: Option<KnownTarget>,
    /// Documented best point, when one is published or derived.
    pub reference_point: Option<Vec<f64>>,
    pub policy: PenaltyPolicy,
    bounds: Bounds,
    objective: ScalarFn,
    constraints: Option<ConstraintFn>,
    constraint_count: usize,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("category", &self.category)
            .field("constraints", &self.constraint_count)
            .field("known_target", &self.known_target)
            .finish()
    }
}

impl ProblemSpec {
    pub fn unconstrained(name: impl Into<String>, category: Category, bounds: Bounds, objective: ScalarFn) -> Self {
        Self {
            name: name.into(),
            category,
            known_target: None,
            reference_point: None,
            policy: PenaltyPolicy::default(),
            bounds,
            objective,
            constraints: None,
            constraint_count: 0,
        }
    }

    pub fn constrained(
        name: impl Into<String>,
        bounds: Bounds,
        objective: ScalarFn,
        constraints: ConstraintFn,
        constraint_count: usize,
    ) -> Self {
        Self {
            constraints: Some(constraints),
            constraint_count,
            ..Self::unconstrained(name, Category::Engineering, bounds, objective)
        }
    }

    pub fn with_target(mut self, value: f64, note: impl Into<String>) -> Self {
        self.known_target = Some(KnownTarget { value, note: note.into() });
        self
    }

    pub fn with_reference_point(mut self, x: Vec<f64>) -> Self {
        self.reference_point = Some(x);
        self
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        (self.objective)(x)
    }

    pub fn constraint_count(&self) -> usize {
        self.constraint_count
    }

    pub fn is_constrained(&self) -> bool {
        self.constraints.is_some()
    }

    /// Constraint values at `x`; empty for unconstrained problems.
    pub fn constraints(&self, x: &[f64]) -> Vec<f64> {
        self.constraints.as_ref().map(|g| g(x)).unwrap_or_default()
    }

    /// Largest constraint value, or `-inf` without constraints.
    pub fn max_constraint(&self, x: &[f64]) -> f64 {
        self.constraints(x)
            .into_iter()
            .map(|g| if g.is_nan() { f64::INFINITY } else { g })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn total_violation(&self, x: &[f64]) -> f64 {
        total_violation(&self.constraints(x))
    }

    pub fn is_feasible(&self, x: &[f64]) -> bool {
        self.policy.is_feasible(&self.constraints(x))
    }
}

impl Objective for ProblemSpec {
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&self, x: &mut Vec<f64>, rng: &mut RngStream, budget: usize) -> Evaluation {
        if self.constraints.is_none() {
            return Evaluation {
                fitness: self.objective(x),
                feasible: true,
                evaluations: 1,
            };
        }
        constrained_evaluate(self, x, &self.policy, rng, budget)
    }
}
