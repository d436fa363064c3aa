//! Estimates the error probability of each algorithm on the first reference
//! instance at a single budget.
//!
//! ```text
//! cargo run --release -p conbandit --example point_estimate -- [T] [runs] [per-pull|aggregated]
//! ```

use conbandit::montecarlo::estimate_error;
use conbandit::{Algorithm, BanditInstance, BivariateGaussianArm, McSettings, Sampling};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let horizon: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1000);
    let runs: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(100_000);
    let sampling: Sampling = args.next().map(|s| s.parse()).transpose()?.unwrap_or_default();

    let cov = [[1.0, 0.5], [0.5, 1.0]];
    let arms = [[1.0, 0.95], [5.0, 0.001], [10.0, 0.001]]
        .into_iter()
        .map(|m| BivariateGaussianArm::new(m, cov))
        .collect();
    let instance = BanditInstance::new(arms, 1.0)?;
    let settings = McSettings {
        sampling,
        ..McSettings::new(runs)
    };
    for alg in [Algorithm::ConstrainedSr, Algorithm::InfeasibleFirst] {
        let started = std::time::Instant::now();
        let est = estimate_error(&instance, "instance-a", alg, horizon, 1, &settings)?;
        println!(
            "{:<4} T={} runs={} errors={} log_e={:.4} ci=[{:.5}, {:.5}] ({:.1}s)",
            alg.id(),
            horizon,
            runs,
            est.errors,
            est.log_e_hat,
            est.ci_lo,
            est.ci_hi,
            started.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
