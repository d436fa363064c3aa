//! Monte Carlo estimation of the error probability.
//!
//! Each replication runs one algorithm on its own random stream and records
//! whether the output is wrong (wrong arm or wrong feasibility flag). Error
//! counts are summed, so results are identical for any thread count.

mod rng;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use rng::{cell_seed, replication_rng};

use crate::algorithms::{run_with_schedule, AlgoOutput, Algorithm, PhaseSchedule, RunOptions, Sampling};
use crate::error::{Error, Result};
use crate::model::{classify_instance, BanditInstance, InstanceAnalysis};

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Whether an algorithm output counts as an error against the ground truth.
pub fn error_event(output: &AlgoOutput, truth: &InstanceAnalysis) -> bool {
    output.recommended_arm != truth.optimal_arm || output.feasibility_flag != truth.feasible
}

/// Wilson score interval for `errors` successes out of `runs` trials.
pub fn wilson_interval(errors: u64, runs: u64, z: f64) -> (f64, f64) {
    if runs == 0 {
        return (0.0, 1.0);
    }
    let n = runs as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 {
        0.0
    } else {
        (centre - half).clamp(0.0, p)
    };
    let hi = if errors == runs {
        1.0
    } else {
        (centre + half).clamp(p, 1.0)
    };
    (lo, hi)
}

/// Thread count for replication-level parallelism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Threads {
    /// One thread per available core.
    #[default]
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for Threads {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Self::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Self::Fixed(n)),
            _ => Err(format!(
                "invalid thread count `{s}` (expected a positive integer or `auto`)"
            )),
        }
    }
}

/// Settings shared by all cells of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub runs: u64,
    pub threads: Threads,
    pub sampling: Sampling,
}

impl McSettings {
    pub fn new(runs: u64) -> Self {
        Self {
            runs,
            threads: Threads::Auto,
            sampling: Sampling::PerPull,
        }
    }
}

/// Monte Carlo estimate of the error probability of one `(algorithm, T)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorEstimate {
    pub instance_id: String,
    pub algorithm: Algorithm,
    #[serde(rename = "T")]
    pub horizon: u64,
    pub runs: u64,
    pub errors: u64,
    pub e_hat: f64,
    /// Natural log of `e_hat`; `-inf` when no error was observed.
    pub log_e_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
}

impl ErrorEstimate {
    pub fn from_counts(
        instance_id: impl Into<String>,
        algorithm: Algorithm,
        horizon: u64,
        runs: u64,
        errors: u64,
        seed: u64,
    ) -> Self {
        let e_hat = errors as f64 / runs as f64;
        let (ci_lo, ci_hi) = wilson_interval(errors, runs, Z95);
        Self {
            instance_id: instance_id.into(),
            algorithm,
            horizon,
            runs,
            errors,
            e_hat,
            log_e_hat: e_hat.ln(),
            ci_lo,
            ci_hi,
            seed,
        }
    }

    /// Whether the 95% intervals of two estimates intersect.
    pub fn overlaps(&self, other: &ErrorEstimate) -> bool {
        self.ci_lo <= other.ci_hi && other.ci_lo <= self.ci_hi
    }
}

fn build_pool(threads: Threads) -> Result<rayon::ThreadPool> {
    let n = match threads {
        Threads::Auto => 0,
        Threads::Fixed(n) => n,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))
}

fn count_errors(
    instance: &BanditInstance,
    truth: &InstanceAnalysis,
    algorithm: Algorithm,
    schedule: &PhaseSchedule,
    seed: u64,
    settings: &McSettings,
) -> Result<u64> {
    let options = RunOptions {
        sampling: settings.sampling,
        trace: false,
    };
    (0..settings.runs)
        .into_par_iter()
        .map(|r| {
            let mut rng = replication_rng(seed, r);
            let out = run_with_schedule(algorithm, instance, schedule, &mut rng, options)?;
            Ok(u64::from(error_event(&out, truth)))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Estimates the error probability of `algorithm` at budget `horizon`.
///
/// Replication `r` uses stream `replication_rng(seed, r)`.
pub fn estimate_error(
    instance: &BanditInstance,
    instance_id: &str,
    algorithm: Algorithm,
    horizon: u64,
    seed: u64,
    settings: &McSettings,
) -> Result<ErrorEstimate> {
    if settings.runs == 0 {
        return Err(Error::NoReplications);
    }
    let truth = classify_instance(instance)?;
    let schedule = PhaseSchedule::new(instance.len(), horizon)?;
    let pool = build_pool(settings.threads)?;
    let errors = pool.install(|| count_errors(instance, &truth, algorithm, &schedule, seed, settings))?;
    Ok(ErrorEstimate::from_counts(
        instance_id,
        algorithm,
        horizon,
        settings.runs,
        errors,
        seed,
    ))
}

/// Results of a sweep over algorithms and horizons.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    /// Ordered by algorithm (as requested), then horizon.
    pub estimates: Vec<ErrorEstimate>,
    pub base_seed: u64,
    pub threads: usize,
    pub sampling: Sampling,
    pub wall_clock_secs: f64,
}

impl SweepResult {
    pub fn get(&self, algorithm: Algorithm, horizon: u64) -> Option<&ErrorEstimate> {
        self.estimates
            .iter()
            .find(|e| e.algorithm == algorithm && e.horizon == horizon)
    }

    pub fn series(&self, algorithm: Algorithm) -> Vec<&ErrorEstimate> {
        self.estimates.iter().filter(|e| e.algorithm == algorithm).collect()
    }
}

/// Runs [`estimate_error`] for every `(algorithm, horizon)` pair.
///
/// Each cell is seeded with `cell_seed(base_seed, algorithm, horizon)`, so a
/// cell can be reproduced on its own.
pub fn sweep(
    instance: &BanditInstance,
    instance_id: &str,
    algorithms: &[Algorithm],
    horizons: &[u64],
    base_seed: u64,
    settings: &McSettings,
) -> Result<SweepResult> {
    if settings.runs == 0 {
        return Err(Error::NoReplications);
    }
    let started = Instant::now();
    let truth = classify_instance(instance)?;
    let schedules = horizons
        .iter()
        .map(|&t| PhaseSchedule::new(instance.len(), t))
        .collect::<Result<Vec<_>>>()?;
    let pool = build_pool(settings.threads)?;
    let mut estimates = Vec::with_capacity(algorithms.len() * horizons.len());
    for &algorithm in algorithms {
        for (schedule, &horizon) in schedules.iter().zip(horizons) {
            let seed = cell_seed(base_seed, algorithm, horizon);
            let errors = pool.install(|| count_errors(instance, &truth, algorithm, schedule, seed, settings))?;
            estimates.push(ErrorEstimate::from_counts(
                instance_id,
                algorithm,
                horizon,
                settings.runs,
                errors,
                seed,
            ));
        }
    }
    Ok(SweepResult {
        estimates,
        base_seed,
        threads: pool.current_num_threads(),
        sampling: settings.sampling,
        wall_clock_secs: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BivariateGaussianArm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn output(arm: usize, flag: bool) -> AlgoOutput {
        AlgoOutput {
            recommended_arm: arm,
            feasibility_flag: flag,
            total_pulls: 0,
            pulls: Vec::new(),
            trace: None,
        }
    }

    fn det_a() -> BanditInstance {
        let arms = [[1.0, 0.95], [5.0, 0.001], [10.0, 0.001]]
            .iter()
            .map(|&m| BivariateGaussianArm::deterministic(m))
            .collect();
        BanditInstance::with_concentration(arms, 1.0, Some(0.5), Some(0.5)).unwrap()
    }

    #[test]
    fn error_event_definition() {
        let truth = classify_instance(&det_a()).unwrap();
        assert!(!error_event(&output(0, true), &truth));
        assert!(error_event(&output(0, false), &truth));
        assert!(error_event(&output(1, true), &truth));
    }

    #[test]
    fn wilson_basics() {
        let (lo, hi) = wilson_interval(0, 100, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(100, 100, Z95);
        assert!(lo > 0.95 && lo < 1.0);
        assert_eq!(hi, 1.0);
        // Textbook value: 10/100 gives roughly (0.0552, 0.1744).
        let (lo, hi) = wilson_interval(10, 100, Z95);
        assert!((lo - 0.05523).abs() < 1e-4, "{lo}");
        assert!((hi - 0.17437).abs() < 1e-4, "{hi}");
    }

    #[test]
    fn wilson_coverage() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for &(p, n) in &[(0.05, 200u64), (0.3, 100), (0.01, 1000)] {
            let mut covered = 0;
            for _ in 0..1000 {
                let errors = (0..n).filter(|_| rng.gen::<f64>() < p).count() as u64;
                let (lo, hi) = wilson_interval(errors, n, Z95);
                if lo <= p && p <= hi {
                    covered += 1;
                }
            }
            assert!(covered >= 930, "p={p} n={n}: {covered}/1000");
        }
    }

    #[test]
    fn noiseless_estimate_is_zero() {
        let est = estimate_error(&det_a(), "a", Algorithm::ConstrainedSr, 1000, 1, &McSettings::new(100)).unwrap();
        assert_eq!(est.errors, 0);
        assert_eq!(est.e_hat, 0.0);
        assert_eq!(est.log_e_hat, f64::NEG_INFINITY);
        assert!(est.ci_lo <= est.e_hat && est.e_hat <= est.ci_hi);
    }

    #[test]
    fn zero_runs_rejected() {
        assert_eq!(
            estimate_error(&det_a(), "a", Algorithm::ConstrainedSr, 1000, 1, &McSettings::new(0)),
            Err(Error::NoReplications)
        );
    }

    #[test]
    fn sweep_structure() {
        let res = sweep(
            &det_a(),
            "a",
            &[Algorithm::ConstrainedSr],
            &[1000, 2000],
            3,
            &McSettings::new(10),
        )
        .unwrap();
        assert_eq!(res.estimates.len(), 2);
        assert_eq!(res.estimates[0].horizon, 1000);
        assert_eq!(res.estimates[1].horizon, 2000);
        assert!(res
            .estimates
            .iter()
            .all(|e| e.runs == 10 && e.algorithm == Algorithm::ConstrainedSr));
        assert_eq!(res.estimates[0].seed, cell_seed(3, Algorithm::ConstrainedSr, 1000));
    }

    #[test]
    fn thread_parse() {
        assert_eq!("auto".parse::<Threads>(), Ok(Threads::Auto));
        assert_eq!("4".parse::<Threads>(), Ok(Threads::Fixed(4)));
        assert!("0".parse::<Threads>().is_err());
    }
}
