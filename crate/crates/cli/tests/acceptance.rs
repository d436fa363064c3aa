//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Monte Carlo criteria use the full replication counts (100000 runs, 10000
//! on instance-d). Sweeps draw each phase's per-arm sum in one shot
//! (`Sampling::Aggregated`), which has the same law as per-pull sampling for
//! Gaussian arms; the point check at T=1000 is also run per pull.

use std::process::Command;
use std::time::Instant;

use conbandit::algorithms::{self, reject_arm, PhaseSchedule};
use conbandit::gaps::pair_gap;
use conbandit::model::EstimatorState;
use conbandit::montecarlo::{replication_rng, sweep};
use conbandit::{
    classify_instance, Algorithm, Attributes, BanditInstance, BivariateGaussianArm, ErrorEstimate, McSettings,
    RunOptions, Sampling, SweepResult, Threads,
};
use conbandit_cli::presets;
use rand::Rng;

type Outcome = (bool, String);

const HORIZONS: [u64; 10] = [1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 9000, 10000];
const BOTH: [Algorithm; 2] = [Algorithm::ConstrainedSr, Algorithm::InfeasibleFirst];

fn preset(name: &str) -> BanditInstance {
    presets::find(name).unwrap().instance()
}

fn run_sweep(name: &str, runs: u64, horizons: &[u64], sampling: Sampling) -> SweepResult {
    let settings = McSettings {
        runs,
        threads: Threads::Auto,
        sampling,
    };
    sweep(&preset(name), name, &BOTH, horizons, 1, &settings).unwrap()
}

fn log_e(r: &SweepResult, alg: Algorithm, t: u64) -> f64 {
    r.get(alg, t).unwrap().log_e_hat
}

fn point_reproduction() -> Outcome {
    let mut ok = true;
    let mut msg = Vec::new();
    for sampling in [Sampling::PerPull, Sampling::Aggregated] {
        let r = run_sweep("instance-a", 100_000, &[1000], sampling);
        let (c, i) = (
            log_e(&r, Algorithm::ConstrainedSr, 1000),
            log_e(&r, Algorithm::InfeasibleFirst, 1000),
        );
        ok &= (c - -1.790).abs() <= 0.10 && (i - -1.351).abs() <= 0.10;
        msg.push(format!(
            "{sampling:?}: csr {c:.4} (target -1.790), if {i:.4} (target -1.351)"
        ));
    }
    (ok, msg.join("; "))
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn decay_rate_separation(a: &SweepResult) -> Outcome {
    let xs: Vec<f64> = HORIZONS.iter().map(|&t| t as f64).collect();
    let fit = |alg| slope(&xs, &HORIZONS.iter().map(|&t| log_e(a, alg, t)).collect::<Vec<_>>());
    let (c, i) = (fit(Algorithm::ConstrainedSr), fit(Algorithm::InfeasibleFirst));
    (
        c.is_finite() && i < 0.0 && c <= 1.2 * i,
        format!("slope csr {c:.3e}, if {i:.3e}, ratio {:.3} (need >= 1.2)", c / i),
    )
}

fn series_overlap(r: &SweepResult) -> (bool, usize) {
    let bad = HORIZONS
        .iter()
        .filter(|&&t| {
            let (c, i) = (
                r.get(Algorithm::ConstrainedSr, t).unwrap(),
                r.get(Algorithm::InfeasibleFirst, t).unwrap(),
            );
            !c.overlaps(i)
        })
        .count();
    (bad == 0, bad)
}

fn coincidence(c: &SweepResult, d: &SweepResult) -> Outcome {
    let (ok_c, bad_c) = series_overlap(c);
    let (ok_d, bad_d) = series_overlap(d);
    let e = |r: &SweepResult, t| r.get(Algorithm::ConstrainedSr, t).unwrap().e_hat;
    (
        ok_c && ok_d,
        format!(
            "non-overlapping horizons: instance-c {bad_c}/10, instance-d {bad_d}/10 (csr e at T=1000: c {:.4}, d {:.4})",
            e(c, 1000),
            e(d, 1000)
        ),
    )
}

fn strictly_decreasing(s: &[&ErrorEstimate]) -> bool {
    s.windows(2).all(|w| w[1].e_hat < w[0].e_hat)
}

fn ordering(b: &SweepResult) -> Outcome {
    let csr = b.series(Algorithm::ConstrainedSr);
    let inf = b.series(Algorithm::InfeasibleFirst);
    let ordered = csr.iter().zip(&inf).all(|(c, i)| c.e_hat <= i.e_hat || c.overlaps(i));
    let (dc, di) = (strictly_decreasing(&csr), strictly_decreasing(&inf));
    let fmt = |s: &[&ErrorEstimate]| {
        s.iter()
            .map(|e| format!("{:.4}", e.e_hat))
            .collect::<Vec<_>>()
            .join(" ")
    };
    (
        ordered && dc && di,
        format!(
            "csr<=if up to overlap: {ordered}; decreasing csr {dc}, if {di}; csr [{}] if [{}]",
            fmt(&csr),
            fmt(&inf)
        ),
    )
}

fn schedule_oracle() -> Outcome {
    let expected: [(usize, u64, &[u64]); 3] = [
        (3, 1000, &[0, 250, 374]),
        (2, 100, &[0, 49]),
        (4, 10_000, &[0, 1579, 2105, 3157]),
    ];
    let mut ok = expected
        .iter()
        .all(|&(k, t, n)| PhaseSchedule::new(k, t).unwrap().cumulative == n);
    let mut rng = replication_rng(2024, 0);
    let mut violations = 0;
    for _ in 0..10_000 {
        let k = rng.gen_range(2..=64usize);
        let t = rng.gen_range(k as u64 + 1..=100_000);
        let s = PhaseSchedule::new(k, t).unwrap();
        let n = &s.cumulative;
        let spent: u64 = n[1..k - 1].iter().sum::<u64>() + 2 * n[k - 1];
        violations += u64::from(spent > t || spent != s.total_pulls());
    }
    ok &= violations == 0;
    (
        ok,
        format!("hand-derived cases match; budget violations {violations}/10000"),
    )
}

fn gap_oracle() -> Outcome {
    let inst = preset("instance-a");
    let an = classify_instance(&inst).unwrap();
    let r = 0.5f64.sqrt();
    // Direct evaluation: both others feasible, capped by arm 1's margin 0.05.
    let direct = [0.0, (r * 0.05f64).min(r * 4.0), (r * 0.05f64).min(r * 9.0)];
    let rel = |x: f64, y: f64| if y == 0.0 { x.abs() } else { ((x - y) / y).abs() };
    let mut worst = 0.0f64;
    for (j, &want) in direct.iter().enumerate().skip(1) {
        worst = worst.max(rel(pair_gap(&inst, 0, j).unwrap().gap, want));
        worst = worst.max(rel(an.gap_to_opt[j], want));
    }
    let h1 = 1.0 / (direct[1] * direct[1]) + 1.0 / (direct[2] * direct[2]);
    let h2 = f64::max(2.0 / (direct[1] * direct[1]), 3.0 / (direct[2] * direct[2]));
    worst = worst.max(rel(an.h1, h1)).max(rel(an.h1, 1600.0));
    worst = worst.max(rel(an.h2, h2)).max(rel(an.h2, 2400.0));
    let mut ok = worst <= 1e-12;

    let mut rng = replication_rng(77, 0);
    let (mut tested, mut broken) = (0, 0);
    while tested < 1000 {
        let k = rng.gen_range(2..=10usize);
        let arms = (0..k)
            .map(|_| {
                BivariateGaussianArm::new(
                    [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)],
                    [[1.0, 0.5], [0.5, 1.0]],
                )
            })
            .collect();
        let inst = BanditInstance::new(arms, rng.gen_range(0.0..1.0)).unwrap();
        let Ok(an) = classify_instance(&inst) else { continue };
        if !an.feasible || an.ordering.iter().skip(1).any(|&i| an.gap_to_opt[i] <= 0.0) {
            continue;
        }
        tested += 1;
        let lb = algorithms::logbar(k);
        if !(an.h2 / 2.0 <= an.h1 && an.h1 <= lb * an.h2) {
            broken += 1;
        }
    }
    ok &= broken == 0;
    (
        ok,
        format!(
            "max relative error {worst:.1e} (H1 {}, H2 {}); sandwich violations {broken}/1000",
            an.h1, an.h2
        ),
    )
}

fn sentinel_equivalence() -> Outcome {
    let opts = RunOptions {
        sampling: Sampling::PerPull,
        trace: true,
    };
    let mut gen = replication_rng(31, 0);
    let mut mismatches = 0;
    for r in 0..10_000u64 {
        let arms = (0..5)
            .map(|_| {
                BivariateGaussianArm::new(
                    [gen.gen_range(0.0..2.0), gen.gen_range(-1.0..1.0)],
                    [[1.0, 0.5], [0.5, 1.0]],
                )
            })
            .collect();
        let inst = BanditInstance::new(arms, 1e9).unwrap();
        let budget = gen.gen_range(6..400);
        let a = algorithms::run(
            Algorithm::ConstrainedSr,
            &inst,
            budget,
            &mut replication_rng(r, 0),
            opts,
        )
        .unwrap();
        let b = algorithms::run(Algorithm::ClassicalSr, &inst, budget, &mut replication_rng(r, 0), opts).unwrap();
        mismatches += u64::from(a != b);
    }
    (
        mismatches == 0,
        format!("{mismatches}/10000 runs differ in output or trace"),
    )
}

fn state_of(means: &[[f64; 2]]) -> EstimatorState {
    let mut s = EstimatorState::new(means.len());
    for (i, m) in means.iter().enumerate() {
        s.update(i, Attributes::from(*m));
    }
    s
}

fn tie_breaks() -> Outcome {
    let a = reject_arm(
        &state_of(&[[2.0, 1.4], [1.0, 3.8], [4.0, 1.0]]),
        &[0, 1, 2],
        1.8,
        1.0,
        1.0,
    )
    .unwrap();
    let b = reject_arm(
        &state_of(&[[0.5, 2.1], [3.0, 0.5], [4.0, 0.5]]),
        &[0, 1, 2],
        1.8,
        1.0,
        1.0,
    )
    .unwrap();
    (
        a.rejected == 1 && b.rejected == 2,
        format!(
            "first configuration rejects arm {}, second rejects arm {}",
            a.rejected + 1,
            b.rejected + 1
        ),
    )
}

fn concentration() -> Outcome {
    const TRIALS: u64 = 100_000;
    let arm = BivariateGaussianArm::new([0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]]);
    let a = BanditInstance::new(vec![arm.clone()], 0.0).unwrap().a1();
    let mut ok = a == 0.5;
    let mut worst = f64::NEG_INFINITY;
    for n in [10u64, 100] {
        for d in [0.25, 0.5, 1.0] {
            let mut hits = 0u64;
            for t in 0..TRIALS {
                let mut rng = replication_rng(n * 1000 + (d * 100.0) as u64, t);
                let mut s = EstimatorState::new(1);
                for _ in 0..n {
                    s.update(0, arm.sample(&mut rng));
                }
                hits += u64::from(s.mean(0).unwrap().objective.abs() >= d);
            }
            let freq = hits as f64 / TRIALS as f64;
            let bound = (2.0 * (-a * n as f64 * d * d).exp()).min(1.0);
            let slack = 3.0 * (bound * (1.0 - bound) / TRIALS as f64).sqrt();
            ok &= freq <= bound + slack;
            worst = worst.max(freq - bound);
        }
    }
    (ok, format!("max (frequency - bound) over 6 grid points: {worst:.4}"))
}

fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let max = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut outputs = Vec::new();
    for threads in [1, 4, max] {
        let path = dir.path().join(format!("t{threads}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_conbandit"))
            .args([
                "run",
                "--instance",
                "instance-a",
                "--horizons",
                "1000,2000",
                "--runs",
                "5000",
            ])
            .args(["--threads", &threads.to_string(), "--seed", "11", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        if !status.success() {
            return (false, format!("run failed with {threads} threads"));
        }
        outputs.push(std::fs::read(&path).unwrap());
    }
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    (same, format!("threads {{1, 4, {max}}}: CSV byte-identical = {same}"))
}

fn main() {
    let started = Instant::now();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut record = |name, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let (ok, detail) = f();
        println!(
            "{} {name} [{:.1}s]: {detail}",
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
        results.push((name, (ok, detail)));
    };

    record("point reproduction (instance-a, T=1000)", &point_reproduction);
    let a = run_sweep("instance-a", 100_000, &HORIZONS, Sampling::Aggregated);
    record("decay-rate separation (instance-a)", &|| decay_rate_separation(&a));
    let c = run_sweep("instance-c", 100_000, &HORIZONS, Sampling::Aggregated);
    let d = run_sweep("instance-d", 10_000, &HORIZONS, Sampling::Aggregated);
    record("csr/if coincidence (instance-c, instance-d)", &|| coincidence(&c, &d));
    let b = run_sweep("instance-b", 100_000, &HORIZONS, Sampling::Aggregated);
    record("ordering (instance-b)", &|| ordering(&b));
    record("schedule oracle", &schedule_oracle);
    record("gap/hardness oracle", &gap_oracle);
    record("threshold-sentinel equivalence", &sentinel_equivalence);
    record("tie-break configurations", &tie_breaks);
    record("concentration property", &concentration);
    record("reproducibility across thread counts", &reproducibility);

    let failed = results.iter().filter(|r| !r.1 .0).count();
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        results.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
