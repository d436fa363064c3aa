//! Fixed-budget best-arm identification for two-attribute bandits with a
//! threshold constraint.
//!
//! Each arm has an objective attribute (to be minimised) and a constraint
//! attribute (to be kept at or below a threshold `tau`). Given a budget of
//! `T` pulls, a learner must recommend the feasible arm with the smallest
//! objective, or, if no arm is feasible, the arm with the smallest
//! constraint value, and flag whether the instance is feasible.
//!
//! - [`model`]: Gaussian arms, instances, running estimates, ground truth.
//! - [`gaps`]: pairwise gaps, hardness indices, lower-bound rates.
//! - [`algorithms`]: Constrained-SR, Infeasible-First and classical SR.
//! - [`montecarlo`]: reproducible parallel error-probability estimation.

pub mod algorithms;
pub mod error;
pub mod gaps;
pub mod model;
pub mod montecarlo;

pub use algorithms::{AlgoOutput, Algorithm, PhaseSchedule, RunOptions, Sampling};
pub use error::{Error, Result};
pub use model::{
    classify_instance, ArmClass, Attributes, BanditInstance, BivariateGaussianArm, EstimatorState, InstanceAnalysis,
};
pub use montecarlo::{ErrorEstimate, McSettings, SweepResult, Threads};
