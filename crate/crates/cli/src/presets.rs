//! The four reference instances.
//!
//! All use unit-variance Gaussian arms with correlation 0.5, hence
//! `a1 = a2 = 1/2`.

use conbandit::{BanditInstance, BivariateGaussianArm};

pub const COVARIANCE: [[f64; 2]; 2] = [[1.0, 0.5], [0.5, 1.0]];

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub means: &'static [[f64; 2]],
    pub tau: f64,
    pub default_runs: u64,
}

pub const PRESETS: [Preset; 4] = [
    Preset {
        name: "instance-a",
        summary: "arm 1 optimal near the threshold; arms 2 and 3 feasible suboptimal",
        means: &[[1.0, 0.95], [5.0, 0.001], [10.0, 0.001]],
        tau: 1.0,
        default_runs: 100_000,
    },
    Preset {
        name: "instance-b",
        summary: "arm 1 optimal; arm 2 a deceiver; arm 3 feasible suboptimal",
        means: &[[1.0, 0.995], [2.0, 1.005], [12.0, 0.001]],
        tau: 1.0,
        default_runs: 100_000,
    },
    Preset {
        name: "instance-c",
        summary: "arm 1 optimal; arm 2 feasible suboptimal; arm 3 a deceiver; arm 4 infeasible suboptimal",
        means: &[[0.3, 0.45], [0.35, 0.45], [0.2, 0.8], [0.5, 0.8]],
        tau: 0.5,
        default_runs: 100_000,
    },
    Preset {
        name: "instance-d",
        summary: "no feasible arm; arm 3 optimal",
        means: &[[0.3, 1.6], [0.4, 1.7], [0.2, 1.1], [0.5, 1.2]],
        tau: 1.0,
        default_runs: 10_000,
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

impl Preset {
    pub fn instance(&self) -> BanditInstance {
        let arms = self
            .means
            .iter()
            .map(|&m| BivariateGaussianArm::new(m, COVARIANCE))
            .collect();
        BanditInstance::new(arms, self.tau).expect("preset instances are valid")
    }
}
