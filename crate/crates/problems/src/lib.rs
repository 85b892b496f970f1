//! Objective functions for the optimizer: seeded shifted/rotated benchmark
//! families (unimodal, multimodal, hybrid, composition), a 12-problem desk
//! suite and ten constrained engineering design problems handled by
//! reinitialization.

pub mod benchmark;
pub mod constraint;
pub mod engineering;
pub mod error;
pub mod functions;
pub mod registry;
pub mod spec;
pub mod transform;

pub use benchmark::{desk_problem, desk_suite, make_benchmark, Family, DESK_SUITE};
pub use constraint::{constrained_evaluate, PenaltyMode, PenaltyPolicy};
pub use engineering::{make_engineering, EngineeringId};
pub use error::{Error, Result};
pub use registry::{fixed_dim, list_problems, problem, ProblemInfo};
pub use spec::{Category, KnownTarget, ProblemSpec};
pub use transform::{generate_transform, TransformSpec};
