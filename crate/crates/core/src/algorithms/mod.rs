//! Fixed-budget elimination algorithms built on the Successive-Rejects schedule.
//!
//! All three algorithms share the phase structure: in phase `k` every
//! surviving arm is pulled up to `n_k` cumulative times, then one arm is
//! rejected. They differ only in the rejection rule. Estimates accumulate
//! across phases. The survivor is recommended and the instance is flagged
//! feasible iff the survivor's constraint estimate is at most `tau`.

mod rules;
mod schedule;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use rules::{empirical_gap, empirical_optimal, reject_arm, reject_classical, reject_infeasible_first, Rejection};
pub use schedule::{logbar, min_budget, PhaseSchedule};

use crate::error::{Error, Result};
use crate::model::{is_feasible, BanditInstance, EstimatorState};

/// Algorithm identifiers as used on the command line and in result files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    /// Gap-based elimination with feasibility-aware tie-breaking (`csr`).
    #[serde(rename = "csr")]
    ConstrainedSr,
    /// Reject the most infeasible-looking arm first (`if`).
    #[serde(rename = "if")]
    InfeasibleFirst,
    /// Single-attribute Successive Rejects on the objective (`sr`).
    #[serde(rename = "sr")]
    ClassicalSr,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Self::ConstrainedSr, Self::InfeasibleFirst, Self::ClassicalSr];

    pub fn id(self) -> &'static str {
        match self {
            Self::ConstrainedSr => "csr",
            Self::InfeasibleFirst => "if",
            Self::ClassicalSr => "sr",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Self::ConstrainedSr => "Constrained-SR",
            Self::InfeasibleFirst => "Infeasible First",
            Self::ClassicalSr => "Classical SR",
        }
    }

    /// Stable numeric code used when deriving per-cell seeds.
    pub fn code(self) -> u64 {
        match self {
            Self::ConstrainedSr => 0,
            Self::InfeasibleFirst => 1,
            Self::ClassicalSr => 2,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csr" => Ok(Self::ConstrainedSr),
            "if" => Ok(Self::InfeasibleFirst),
            "sr" => Ok(Self::ClassicalSr),
            other => Err(Error::UnknownAlgorithm(other.to_string())),
        }
    }
}

/// How the pulls of one phase are simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// Draw every pull individually.
    #[default]
    PerPull,
    /// Draw the sum of a phase's pulls of an arm in one step. Exact in
    /// distribution for Gaussian arms, since the estimator only sees sums.
    Aggregated,
}

impl FromStr for Sampling {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "per-pull" => Ok(Self::PerPull),
            "aggregated" => Ok(Self::Aggregated),
            other => Err(format!(
                "unknown sampling mode `{other}` (expected per-pull or aggregated)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub sampling: Sampling,
    pub trace: bool,
}

/// One elimination event of a traced run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseRecord {
    /// 1-based phase number.
    pub phase: usize,
    pub rejected: usize,
    pub apparent_optimal: usize,
    pub gaps: Vec<(usize, f64)>,
}

/// Recommendation and feasibility flag returned by an algorithm run.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgoOutput {
    pub recommended_arm: usize,
    pub feasibility_flag: bool,
    pub total_pulls: u64,
    /// Pulls issued to each arm, by index.
    pub pulls: Vec<u64>,
    pub trace: Option<Vec<PhaseRecord>>,
}

pub fn run_constrained_sr<R: Rng + ?Sized>(instance: &BanditInstance, budget: u64, rng: &mut R) -> Result<AlgoOutput> {
    run(Algorithm::ConstrainedSr, instance, budget, rng, RunOptions::default())
}

pub fn run_infeasible_first<R: Rng + ?Sized>(
    instance: &BanditInstance,
    budget: u64,
    rng: &mut R,
) -> Result<AlgoOutput> {
    run(Algorithm::InfeasibleFirst, instance, budget, rng, RunOptions::default())
}

pub fn run_classical_sr<R: Rng + ?Sized>(instance: &BanditInstance, budget: u64, rng: &mut R) -> Result<AlgoOutput> {
    run(Algorithm::ClassicalSr, instance, budget, rng, RunOptions::default())
}

/// Runs `algorithm` on `instance` with budget `budget`.
///
/// A single-armed instance is pulled `budget` times and recommended.
pub fn run<R: Rng + ?Sized>(
    algorithm: Algorithm,
    instance: &BanditInstance,
    budget: u64,
    rng: &mut R,
    options: RunOptions,
) -> Result<AlgoOutput> {
    let schedule = PhaseSchedule::new(instance.len(), budget)?;
    run_with_schedule(algorithm, instance, &schedule, rng, options)
}

/// As [`run`], reusing a precomputed schedule.
///
/// Panics if the schedule was built for a different number of arms.
pub fn run_with_schedule<R: Rng + ?Sized>(
    algorithm: Algorithm,
    instance: &BanditInstance,
    schedule: &PhaseSchedule,
    rng: &mut R,
    options: RunOptions,
) -> Result<AlgoOutput> {
    let k = instance.len();
    assert_eq!(schedule.arms, k, "schedule built for a different arm count");
    let (tau, a1, a2) = (instance.tau(), instance.a1(), instance.a2());
    let mut state = EstimatorState::new(k);

    if k == 1 {
        pull(instance, &mut state, 0, schedule.budget, rng, options.sampling);
        let flag = is_feasible(state.pulled_mean(0).constraint, tau);
        return Ok(AlgoOutput {
            recommended_arm: 0,
            feasibility_flag: flag,
            total_pulls: state.total_pulls(),
            pulls: pull_counts(&state),
            trace: options.trace.then(Vec::new),
        });
    }

    let mut active: Vec<usize> = (0..k).collect();
    let mut trace = options.trace.then(|| Vec::with_capacity(k - 1));
    for phase in 1..k {
        let m = schedule.phase_pulls(phase);
        for &i in &active {
            pull(instance, &mut state, i, m, rng, options.sampling);
        }
        let rejection = match algorithm {
            Algorithm::ConstrainedSr => reject_arm(&state, &active, tau, a1, a2)?,
            Algorithm::InfeasibleFirst => reject_infeasible_first(&state, &active, tau, rng)?,
            Algorithm::ClassicalSr => reject_classical(&state, &active, a1)?,
        };
        active.retain(|&i| i != rejection.rejected);
        if let Some(t) = trace.as_mut() {
            t.push(PhaseRecord {
                phase,
                rejected: rejection.rejected,
                apparent_optimal: rejection.apparent_optimal,
                gaps: rejection.gaps,
            });
        }
    }
    let survivor = active[0];
    Ok(AlgoOutput {
        recommended_arm: survivor,
        feasibility_flag: is_feasible(state.pulled_mean(survivor).constraint, tau),
        total_pulls: state.total_pulls(),
        pulls: pull_counts(&state),
        trace,
    })
}

fn pull_counts(state: &EstimatorState) -> Vec<u64> {
    state.estimates().iter().map(|e| e.pulls).collect()
}

#[inline]
fn pull<R: Rng + ?Sized>(
    instance: &BanditInstance,
    state: &mut EstimatorState,
    arm: usize,
    count: u64,
    rng: &mut R,
    sampling: Sampling,
) {
    if count == 0 {
        return;
    }
    let dist = instance.arm(arm);
    match sampling {
        Sampling::PerPull => {
            for _ in 0..count {
                state.update(arm, dist.sample(rng));
            }
        }
        Sampling::Aggregated => state.absorb(arm, count, dist.sample_sum(count, rng)),
    }
}
