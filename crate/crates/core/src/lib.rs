//! Educational competition optimizer (ECO) and its covariance-learning
//! variants.
//!
//! The crate is organized bottom-up:
//!
//! * [`rng`]: seeded streams, logistic chaotic initialization, Lévy steps, bound repair.
//! * [`eco`]: stage schedule, parameters and the school/student update formulas.
//! * [`cov`]: elite selection, FIFO archive, weighted Gaussian model and the
//!   Gaussian / shift / differential operators.
//! * [`optimizer`]: the run state and the per-iteration driver.

pub mod cov;
pub mod eco;
pub mod error;
pub mod optimizer;
pub mod rng;

pub use cov::{estimate, CovModel, EliteArchive};
pub use eco::{Agent, AlgorithmParams, Stage, StageContext, Variant};
pub use error::{Error, Result};
pub use optimizer::{Evaluation, FnObjective, Objective, Optimizer};
pub use rng::{Bounds, Draws, RngStream};
