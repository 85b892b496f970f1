//! Shifted/rotated benchmark families, hybrids, compositions and the
//! 12-problem desk suite.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use mco_core::rng::{derive_seed, mix64, tag_of};
use mco_core::Bounds;

use crate::error::{Error, Result};
use crate::functions as fx;
use crate::spec::{Category, ProblemSpec};
use crate::transform::{generate_transform, TransformSpec, BENCH_LOWER, BENCH_UPPER};

/// A base function as used inside families, with its input scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    Sphere,
    Zakharov,
    Rosenbrock,
    /// Rosenbrock moved so its minimum is at the origin.
    RosenbrockCentered,
    Rastrigin,
    Schwefel,
    Levy,
    Ackley,
    Griewank,
    Elliptic,
    BentCigar,
}

impl Base {
    /// Input scale applied to `M (x - o)` before the raw function.
    pub fn scale(self) -> f64 {
        match self {
            Base::Rastrigin => 5.12 / 100.0,
            Base::Schwefel => 1000.0 / 100.0,
            Base::RosenbrockCentered => 2.048 / 100.0,
            Base::Griewank => 600.0 / 100.0,
            _ => 1.0,
        }
    }

    pub fn raw(self, z: &[f64]) -> f64 {
        match self {
            Base::Sphere => fx::sphere(z),
            Base::Zakharov => fx::zakharov(z),
            Base::Rosenbrock => fx::rosenbrock(z),
            Base::RosenbrockCentered => fx::rosenbrock_centered(z),
            Base::Rastrigin => fx::rastrigin(z),
            Base::Schwefel => fx::schwefel(z),
            Base::Levy => fx::levy(z),
            Base::Ackley => fx::ackley(z),
            Base::Griewank => fx::griewank(z),
            Base::Elliptic => fx::elliptic(z),
            Base::BentCigar => fx::bent_cigar(z),
        }
    }

    pub fn eval(self, z: &[f64]) -> f64 {
        let s = self.scale();
        if s == 1.0 {
            self.raw(z)
        } else {
            let scaled: Vec<f64> = z.iter().map(|v| v * s).collect();
            self.raw(&scaled)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Sphere,
    Zakharov,
    Rosenbrock,
    Rastrigin,
    Schwefel,
    Levy,
    Ackley,
    Griewank,
    Elliptic,
    BentCigar,
    Hybrid1,
    Hybrid2,
    Hybrid3,
    Composition1,
    Composition2,
    Composition3,
    Composition4,
}

/// Coordinate share of each hybrid block.
const HYBRID1: &[(Base, f64)] = &[
    (Base::Zakharov, 0.2),
    (Base::RosenbrockCentered, 0.4),
    (Base::Rastrigin, 0.4),
];
const HYBRID2: &[(Base, f64)] = &[(Base::Elliptic, 0.3), (Base::Schwefel, 0.3), (Base::BentCigar, 0.4)];
const HYBRID3: &[(Base, f64)] = &[
    (Base::BentCigar, 0.2),
    (Base::RosenbrockCentered, 0.2),
    (Base::Ackley, 0.3),
    (Base::Levy, 0.3),
];

/// One composition component: base, lambda, sigma, bias.
type Component = (Base, f64, f64, f64);

const COMPOSITION1: &[Component] = &[
    (Base::RosenbrockCentered, 1.0, 10.0, 0.0),
    (Base::Elliptic, 1e-6, 20.0, 200.0),
    (Base::BentCigar, 1e-26, 30.0, 300.0),
    (Base::Sphere, 1e-6, 40.0, 100.0),
    (Base::Elliptic, 1e-6, 50.0, 400.0),
];
const COMPOSITION2: &[Component] = &[
    (Base::Schwefel, 1.0, 20.0, 0.0),
    (Base::Rastrigin, 1.0, 10.0, 200.0),
    (Base::Griewank, 1.0, 10.0, 100.0),
];
const COMPOSITION3: &[Component] = &[
    (Base::Ackley, 1.0, 20.0, 0.0),
    (Base::Schwefel, 1.0, 20.0, 200.0),
    (Base::Griewank, 10.0, 30.0, 300.0),
    (Base::RosenbrockCentered, 1.0, 30.0, 400.0),
    (Base::Rastrigin, 10.0, 20.0, 200.0),
];
const COMPOSITION4: &[Component] = &[
    (Base::Griewank, 10.0, 10.0, 0.0),
    (Base::Rastrigin, 10.0, 20.0, 300.0),
    (Base::Schwefel, 2.5, 30.0, 500.0),
    (Base::BentCigar, 1e-26, 40.0, 100.0),
    (Base::Elliptic, 1e-6, 50.0, 400.0),
    (Base::Ackley, 5e-4, 60.0, 200.0),
];

impl Family {
    pub const ALL: [Family; 17] = [
        Family::Sphere,
        Family::Zakharov,
        Family::Rosenbrock,
        Family::Rastrigin,
        Family::Schwefel,
        Family::Levy,
        Family::Ackley,
        Family::Griewank,
        Family::Elliptic,
        Family::BentCigar,
        Family::Hybrid1,
        Family::Hybrid2,
        Family::Hybrid3,
        Family::Composition1,
        Family::Composition2,
        Family::Composition3,
        Family::Composition4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Sphere => "sphere",
            Family::Zakharov => "zakharov",
            Family::Rosenbrock => "rosenbrock",
            Family::Rastrigin => "rastrigin",
            Family::Schwefel => "schwefel",
            Family::Levy => "levy",
            Family::Ackley => "ackley",
            Family::Griewank => "griewank",
            Family::Elliptic => "elliptic",
            Family::BentCigar => "bent_cigar",
            Family::Hybrid1 => "hybrid1",
            Family::Hybrid2 => "hybrid2",
            Family::Hybrid3 => "hybrid3",
            Family::Composition1 => "composition1",
            Family::Composition2 => "composition2",
            Family::Composition3 => "composition3",
            Family::Composition4 => "composition4",
        }
    }

    pub fn category(self) -> Category {
        match self {
            Family::Sphere | Family::Zakharov | Family::Elliptic | Family::BentCigar => Category::Unimodal,
            Family::Hybrid1 | Family::Hybrid2 | Family::Hybrid3 => Category::Hybrid,
            Family::Composition1 | Family::Composition2 | Family::Composition3 | Family::Composition4 => {
                Category::Composition
            }
            _ => Category::Multimodal,
        }
    }

    /// The base function of a plain family.
    pub fn base(self) -> Option<Base> {
        Some(match self {
            Family::Sphere => Base::Sphere,
            Family::Zakharov => Base::Zakharov,
            Family::Rosenbrock => Base::Rosenbrock,
            Family::Rastrigin => Base::Rastrigin,
            Family::Schwefel => Base::Schwefel,
            Family::Levy => Base::Levy,
            Family::Ackley => Base::Ackley,
            Family::Griewank => Base::Griewank,
            Family::Elliptic => Base::Elliptic,
            Family::BentCigar => Base::BentCigar,
            _ => return None,
        })
    }

    fn hybrid_parts(self) -> Option<&'static [(Base, f64)]> {
        match self {
            Family::Hybrid1 => Some(HYBRID1),
            Family::Hybrid2 => Some(HYBRID2),
            Family::Hybrid3 => Some(HYBRID3),
            _ => None,
        }
    }

    fn composition_parts(self) -> Option<&'static [Component]> {
        match self {
            Family::Composition1 => Some(COMPOSITION1),
            Family::Composition2 => Some(COMPOSITION2),
            Family::Composition3 => Some(COMPOSITION3),
            Family::Composition4 => Some(COMPOSITION4),
            _ => None,
        }
    }

    /// Whether the minimum value `f_bias` is attained exactly at the shift.
    pub fn optimum_at_shift(self) -> bool {
        self != Family::Rosenbrock
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// Block lengths for a hybrid split: `ceil(p * D)` for all but the last block,
/// which takes the remainder.
pub fn hybrid_blocks(family: Family, dim: usize) -> Result<Vec<usize>> {
    let parts = family.hybrid_parts().ok_or_else(|| Error::UnknownFamily(family.name().into()))?;
    let mut sizes = Vec::with_capacity(parts.len());
    let mut used = 0usize;
    for (i, (_, p)) in parts.iter().enumerate() {
        let n = if i + 1 == parts.len() {
            dim.saturating_sub(used)
        } else {
            // Tolerance keeps 0.3 * 10 from rounding up to 4.
            (p * dim as f64 - 1e-9).ceil().max(0.0) as usize
        };
        if n == 0 || used + n > dim {
            return Err(Error::UnsupportedDimension {
                family: family.name().into(),
                dim,
                reason: format!("block split {:?} leaves an empty block", parts.iter().map(|p| p.1).collect::<Vec<_>>()),
            });
        }
        used += n;
        sizes.push(n);
    }
    Ok(sizes)
}

/// Builds `f_base(M (x - o)) + f_bias` on `[-100, 100]^D`.
pub fn make_benchmark(family: Family, dim: usize, transform: TransformSpec) -> Result<ProblemSpec> {
    transform.validate()?;
    if transform.dim() != dim {
        return Err(Error::InvalidTransform(format!(
            "transform has D={}, benchmark requested D={dim}",
            transform.dim()
        )));
    }
    let bounds = Bounds::uniform(dim, BENCH_LOWER, BENCH_UPPER).map_err(|e| Error::InvalidTransform(e.to_string()))?;
    let bias = transform.bias;
    let objective: crate::spec::ScalarFn = if let Some(base) = family.base() {
        Arc::new(move |x: &[f64]| base.eval(&transform.apply(x)) + transform.bias)
    } else if let Some(parts) = family.hybrid_parts() {
        let sizes = hybrid_blocks(family, dim)?;
        Arc::new(move |x: &[f64]| {
            let z = transform.apply(x);
            let mut start = 0;
            let mut total = 0.0;
            for ((base, _), n) in parts.iter().zip(&sizes) {
                total += base.eval(&z[start..start + n]);
                start += n;
            }
            total + transform.bias
        })
    } else {
        let parts = family.composition_parts().expect("every family is plain, hybrid or composition");
        let comp = Composition::new(parts, transform);
        Arc::new(move |x: &[f64]| comp.eval(x))
    };
    Ok(
        ProblemSpec::unconstrained(family.name(), family.category(), bounds, objective)
            .with_target(bias, "global minimum f_bias of the seeded instance"),
    )
}

/// Weighted mixture of shifted, rotated components.
struct Composition {
    parts: &'static [Component],
    transforms: Vec<TransformSpec>,
    bias: f64,
}

impl Composition {
    /// Component 0 uses `transform`; the rest get transforms seeded from its shift.
    fn new(parts: &'static [Component], transform: TransformSpec) -> Self {
        let dim = transform.dim();
        let seed = transform.shift.iter().fold(0x5eed_u64, |acc, v| mix64(acc ^ v.to_bits()));
        let bias = transform.bias;
        let mut transforms = vec![transform];
        for i in 1..parts.len() {
            transforms.push(generate_transform(dim, derive_seed(seed, &[i as u64])));
        }
        Self { parts, transforms, bias }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let d = x.len() as f64;
        let mut values = Vec::with_capacity(self.parts.len());
        let mut weights = Vec::with_capacity(self.parts.len());
        for ((base, lambda, sigma, bias), t) in self.parts.iter().zip(&self.transforms) {
            let d2: f64 = x.iter().zip(&t.shift).map(|(a, b)| (a - b) * (a - b)).sum();
            let w = if d2 == 0.0 {
                f64::INFINITY
            } else {
                (-d2 / (2.0 * d * sigma * sigma)).exp() / d2.sqrt()
            };
            values.push(lambda * base.eval(&t.apply(x)) + bias);
            weights.push(w);
        }
        composition_mix(&values, &weights) + self.bias
    }
}

/// Normalized weighted sum with the degenerate cases resolved: infinite
/// weights share all mass equally, and all-zero weights fall back to equal.
pub fn composition_mix(values: &[f64], weights: &[f64]) -> f64 {
    let n_inf = weights.iter().filter(|w| w.is_infinite()).count();
    if n_inf > 0 {
        let s: f64 = values.iter().zip(weights).filter(|(_, w)| w.is_infinite()).map(|(v, _)| v).sum();
        return s / n_inf as f64;
    }
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return values.iter().sum::<f64>() / values.len() as f64;
    }
    values.iter().zip(weights).map(|(v, w)| v * w / total).sum()
}

/// Desk-suite layout: family and bias of f01..f12.
pub const DESK_SUITE: [(&str, Family, f64); 12] = [
    ("f01", Family::Zakharov, 300.0),
    ("f02", Family::Rosenbrock, 400.0),
    ("f03", Family::Rastrigin, 600.0),
    ("f04", Family::Levy, 800.0),
    ("f05", Family::Griewank, 900.0),
    ("f06", Family::Hybrid1, 1800.0),
    ("f07", Family::Hybrid2, 2000.0),
    ("f08", Family::Hybrid3, 2200.0),
    ("f09", Family::Composition1, 2300.0),
    ("f10", Family::Composition2, 2400.0),
    ("f11", Family::Composition3, 2600.0),
    ("f12", Family::Composition4, 2700.0),
];

/// One desk-suite problem by id (`f01`..`f12`).
pub fn desk_problem(id: &str, dim: usize, seed: u64) -> Result<ProblemSpec> {
    let (name, family, bias) = DESK_SUITE
        .iter()
        .find(|(n, _, _)| n.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownProblem(id.to_string()))?;
    let t = generate_transform(dim, derive_seed(seed, &[tag_of(name)])).with_bias(*bias);
    let mut spec = make_benchmark(*family, dim, t)?;
    spec.name = name.to_string();
    Ok(spec)
}

/// The 12-problem suite: one unimodal, four basic, three hybrid, four composition.
pub fn desk_suite(dim: usize, seed: u64) -> Result<Vec<ProblemSpec>> {
    DESK_SUITE.iter().map(|(n, _, _)| desk_problem(n, dim, seed)).collect()
}
