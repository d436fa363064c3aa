//! Arms, instances, running estimates and ground-truth classification.

mod analysis;
mod arm;
mod estimator;
mod instance;

pub use analysis::{classify_instance, ArmClass, InstanceAnalysis};
pub use arm::{Attributes, BivariateGaussianArm};
pub use estimator::{ArmEstimate, EstimatorState};
pub use instance::BanditInstance;

/// Feasibility test shared by true and empirical attribute values.
///
/// The boundary `constraint == tau` counts as feasible.
#[inline]
pub fn is_feasible(constraint: f64, tau: f64) -> bool {
    constraint <= tau
}
