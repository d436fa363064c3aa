use super::{is_feasible, Attributes, BivariateGaussianArm};
use crate::error::{Error, Result};

/// A constrained bandit instance: arms, threshold and concentration parameters.
///
/// Immutable once built. `a1`/`a2` are the constants of the tail bound
/// `P(|mean_n - mu| >= d) <= 2 exp(-a n d^2)` for the empirical mean of each
/// attribute. When not given they are derived as `1 / (2 sigma^2)` from the
/// marginal variance shared by all arms.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    arms: Vec<BivariateGaussianArm>,
    tau: f64,
    a1: f64,
    a2: f64,
}

impl BanditInstance {
    /// Builds an instance, deriving both concentration parameters.
    pub fn new(arms: Vec<BivariateGaussianArm>, tau: f64) -> Result<Self> {
        Self::with_concentration(arms, tau, None, None)
    }

    pub fn with_concentration(
        arms: Vec<BivariateGaussianArm>,
        tau: f64,
        a1: Option<f64>,
        a2: Option<f64>,
    ) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::EmptyInstance);
        }
        for (i, arm) in arms.iter().enumerate() {
            arm.validate().map_err(|reason| Error::InvalidArm { arm: i, reason })?;
        }
        if !tau.is_finite() {
            return Err(Error::InvalidThreshold(tau));
        }
        let a1 = match a1 {
            Some(v) => v,
            None => derive_concentration(&arms, 0, "a1")?,
        };
        let a2 = match a2 {
            Some(v) => v,
            None => derive_concentration(&arms, 1, "a2")?,
        };
        for (name, value) in [("a1", a1), ("a2", a2)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidConcentration { name, value });
            }
        }
        Ok(Self { arms, tau, a1, a2 })
    }

    /// Same arms and concentration parameters under a different threshold.
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::with_concentration(self.arms.clone(), tau, Some(self.a1), Some(self.a2))
    }

    pub fn arms(&self) -> &[BivariateGaussianArm] {
        &self.arms
    }

    pub fn arm(&self, i: usize) -> &BivariateGaussianArm {
        &self.arms[i]
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn mean(&self, i: usize) -> Attributes {
        self.arms[i].mean()
    }

    pub fn is_feasible(&self, i: usize) -> bool {
        is_feasible(self.arms[i].mean().constraint, self.tau)
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index < self.arms.len() {
            Ok(())
        } else {
            Err(Error::ArmOutOfRange {
                index,
                arms: self.arms.len(),
            })
        }
    }
}

fn derive_concentration(arms: &[BivariateGaussianArm], dim: usize, name: &'static str) -> Result<f64> {
    let var = arms[0].covariance()[dim][dim];
    if let Some(i) = arms.iter().position(|a| a.covariance()[dim][dim] != var) {
        return Err(Error::ConcentrationUndetermined {
            name,
            reason: format!(
                "arm {i} has marginal variance {} but arm 0 has {var}",
                arms[i].covariance()[dim][dim]
            ),
        });
    }
    if var <= 0.0 {
        return Err(Error::ConcentrationUndetermined {
            name,
            reason: "marginal variance is zero".into(),
        });
    }
    Ok(1.0 / (2.0 * var))
}
