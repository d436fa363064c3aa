use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Mean values of the two attributes of an arm.
///
/// `objective` is minimised, `constraint` is compared against the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Attributes {
    pub objective: f64,
    pub constraint: f64,
}

impl Attributes {
    pub const fn new(objective: f64, constraint: f64) -> Self {
        Self { objective, constraint }
    }
}

impl From<[f64; 2]> for Attributes {
    fn from(v: [f64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

/// A two-dimensional Gaussian arm.
///
/// The lower-triangular Cholesky factor is computed once at construction so
/// that sampling costs two standard normals and a handful of multiply-adds.
/// Zero-variance coordinates are allowed; a fully degenerate arm always
/// returns its mean.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateGaussianArm {
    mean: Attributes,
    covariance: [[f64; 2]; 2],
    // (l11, l21, l22)
    factor: [f64; 3],
}

impl BivariateGaussianArm {
    /// Builds an arm without validating the covariance. Validation happens when
    /// the arm is placed in a [`BanditInstance`](super::BanditInstance).
    pub fn new(mean: impl Into<Attributes>, covariance: [[f64; 2]; 2]) -> Self {
        let factor = cholesky(&covariance);
        Self {
            mean: mean.into(),
            covariance,
            factor,
        }
    }

    /// A noiseless arm that always returns `mean`.
    pub fn deterministic(mean: impl Into<Attributes>) -> Self {
        Self::new(mean, [[0.0; 2]; 2])
    }

    pub fn mean(&self) -> Attributes {
        self.mean
    }

    pub fn covariance(&self) -> [[f64; 2]; 2] {
        self.covariance
    }

    pub fn is_degenerate(&self) -> bool {
        self.covariance.iter().flatten().all(|&v| v == 0.0)
    }

    /// Checks that the covariance is finite, symmetric and positive semidefinite.
    pub fn validate(&self) -> Result<(), String> {
        let [[s11, s12], [s21, s22]] = self.covariance;
        let m = self.mean;
        if !m.objective.is_finite() || !m.constraint.is_finite() {
            return Err(format!("mean ({}, {}) is not finite", m.objective, m.constraint));
        }
        if self.covariance.iter().flatten().any(|v| !v.is_finite()) {
            return Err("covariance has non-finite entries".into());
        }
        if s11 < 0.0 || s22 < 0.0 {
            return Err(format!("negative variance on the diagonal ({s11}, {s22})"));
        }
        let scale = s11.abs().max(s22.abs()).max(f64::MIN_POSITIVE);
        if (s12 - s21).abs() > 1e-12 * scale {
            return Err(format!("covariance is not symmetric ({s12} vs {s21})"));
        }
        let det = s11 * s22 - s12 * s21;
        if det < -1e-12 * scale * scale {
            return Err(format!("covariance is not positive semidefinite (determinant {det})"));
        }
        Ok(())
    }

    /// Draws one sample `(objective, constraint)`.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Attributes {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        self.shift(z1, z2, 1.0, 1.0)
    }

    /// Draws the coordinate-wise sum of `count` independent samples.
    ///
    /// The sum of `count` i.i.d. Gaussian vectors is itself Gaussian with mean
    /// `count * mean` and covariance `count * covariance`, so this needs only
    /// two standard normals regardless of `count`.
    #[inline]
    pub fn sample_sum<R: Rng + ?Sized>(&self, count: u64, rng: &mut R) -> Attributes {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let n = count as f64;
        self.shift(z1, z2, n, n.sqrt())
    }

    #[inline]
    fn shift(&self, z1: f64, z2: f64, mean_scale: f64, noise_scale: f64) -> Attributes {
        let [l11, l21, l22] = self.factor;
        Attributes {
            objective: mean_scale * self.mean.objective + noise_scale * (l11 * z1),
            constraint: mean_scale * self.mean.constraint + noise_scale * (l21 * z1 + l22 * z2),
        }
    }
}

fn cholesky(cov: &[[f64; 2]; 2]) -> [f64; 3] {
    let s11 = cov[0][0].max(0.0);
    let s12 = cov[0][1];
    let s22 = cov[1][1].max(0.0);
    let l11 = s11.sqrt();
    let l21 = if l11 > 0.0 { s12 / l11 } else { 0.0 };
    let l22 = (s22 - l21 * l21).max(0.0).sqrt();
    [l11, l21, l22]
}
