//! Name-based lookup across the benchmark families, the desk suite and the
//! engineering problems.

use std::path::Path;

use mco_core::rng::{derive_seed, tag_of};

use crate::benchmark::{desk_problem, make_benchmark, Family, DESK_SUITE};
use crate::engineering::{make_engineering, EngineeringId};
use crate::error::{Error, Result};
use crate::spec::{Category, ProblemSpec};
use crate::transform::{generate_transform, TransformSpec};

/// Catalogue row for listing.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInfo {
    pub name: String,
    pub category: Category,
    /// Fixed dimension, or `None` when any supported D works.
    pub dim: Option<usize>,
    pub description: String,
}

/// Resolves `name` to a problem.
///
/// Families (`sphere`, `hybrid2`, ...) and desk ids (`f01`..`f12`) take `dim`
/// and a transform seeded from `seed`; engineering ids (`rw01`..`rw10`) have a
/// fixed dimension and reject any other.
pub fn problem(name: &str, dim: usize, seed: u64) -> Result<ProblemSpec> {
    if let Ok(id) = name.parse::<EngineeringId>() {
        if dim != 0 && dim != id.dim() {
            return Err(Error::UnsupportedDimension {
                family: id.name().into(),
                dim,
                reason: format!("fixed at D={}", id.dim()),
            });
        }
        return Ok(make_engineering(id));
    }
    if DESK_SUITE.iter().any(|(n, _, _)| n.eq_ignore_ascii_case(name)) {
        return desk_problem(name, dim, seed);
    }
    let family: Family = name.parse().map_err(|_| Error::UnknownProblem(name.to_string()))?;
    let t = generate_transform(dim, derive_seed(seed, &[tag_of(family.name())]));
    make_benchmark(family, dim, t)
}

/// Like [`problem`] for a benchmark family, with a transform read from file.
pub fn problem_with_transform_file(name: &str, path: &Path) -> Result<ProblemSpec> {
    let t = TransformSpec::load(path)?;
    let family: Family = name.parse()?;
    make_benchmark(family, t.dim(), t)
}

/// Whether `name` has a fixed dimension.
pub fn fixed_dim(name: &str) -> Option<usize> {
    name.parse::<EngineeringId>().ok().map(|id| id.dim())
}

pub fn list_problems() -> Vec<ProblemInfo> {
    let mut out: Vec<ProblemInfo> = Family::ALL
        .iter()
        .map(|f| ProblemInfo {
            name: f.name().into(),
            category: f.category(),
            dim: None,
            description: format!("{} benchmark family", f.category()),
        })
        .collect();
    out.extend(DESK_SUITE.iter().map(|(n, f, bias)| ProblemInfo {
        name: (*n).into(),
        category: f.category(),
        dim: None,
        description: format!("desk suite: {f}, bias {bias}"),
    }));
    out.extend(EngineeringId::ALL.iter().map(|id| ProblemInfo {
        name: id.name().into(),
        category: Category::Engineering,
        dim: Some(id.dim()),
        description: id.title().into(),
    }));
    out
}
