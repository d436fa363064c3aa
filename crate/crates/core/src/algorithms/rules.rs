//! Per-phase decision rules evaluated on empirical means.

use std::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gaps::effective_gap;
use crate::model::{is_feasible, EstimatorState};

/// Outcome of one elimination step.
#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    pub rejected: usize,
    /// Arm that currently appears optimal among the active set.
    pub apparent_optimal: usize,
    /// Estimated gaps `(arm, Delta_hat)` for every active arm other than the
    /// apparent optimum, in active-set order. Empty for rules that do not use gaps.
    pub gaps: Vec<(usize, f64)>,
}

/// The active arm that currently appears optimal.
///
/// Among arms with `mu2_hat <= tau`, the smallest `mu1_hat`; if there are
/// none, the smallest `mu2_hat`. Exact ties go to the smaller index.
///
/// Panics if an active arm has not been pulled.
pub fn empirical_optimal(state: &EstimatorState, active: &[usize], tau: f64) -> Result<usize> {
    let any_feasible = active
        .iter()
        .any(|&i| is_feasible(state.pulled_mean(i).constraint, tau));
    let key = |i: usize| {
        let m = state.pulled_mean(i);
        if any_feasible {
            m.objective
        } else {
            m.constraint
        }
    };
    active
        .iter()
        .copied()
        .filter(|&i| !any_feasible || is_feasible(state.pulled_mean(i).constraint, tau))
        .min_by(|&x, &y| key(x).total_cmp(&key(y)).then(x.cmp(&y)))
        .ok_or(Error::EmptyActiveSet)
}

/// Plug-in effective gap `Delta_hat(j_hat, i)`; zero when `i == j_hat`.
pub fn empirical_gap(state: &EstimatorState, j_hat: usize, i: usize, tau: f64, a1: f64, a2: f64) -> f64 {
    if i == j_hat {
        return 0.0;
    }
    effective_gap(state.pulled_mean(j_hat), state.pulled_mean(i), tau, a1, a2).0
}

/// Index of the largest element under `cmp`, ties to the earliest element.
fn argmax_by<F>(items: &[usize], mut cmp: F) -> usize
where
    F: FnMut(usize, usize) -> Ordering,
{
    let mut best = items[0];
    for &i in &items[1..] {
        if cmp(i, best) == Ordering::Greater {
            best = i;
        }
    }
    best
}

/// Constrained-SR elimination: reject the arm with the largest estimated gap
/// to the apparent optimum.
///
/// When several arms share the largest gap, the most infeasible-looking one
/// (largest `mu2_hat` among those with `mu2_hat > tau`) goes first; if all of
/// them look feasible, the one with the largest `mu1_hat` goes. Residual ties
/// go to the smaller index.
pub fn reject_arm(state: &EstimatorState, active: &[usize], tau: f64, a1: f64, a2: f64) -> Result<Rejection> {
    let j_hat = empirical_optimal(state, active, tau)?;
    let gaps: Vec<(usize, f64)> = active
        .iter()
        .filter(|&&i| i != j_hat)
        .map(|&i| (i, empirical_gap(state, j_hat, i, tau, a1, a2)))
        .collect();
    if gaps.is_empty() {
        return Err(Error::EmptyActiveSet);
    }
    let top = gaps.iter().map(|g| g.1).fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = gaps.iter().filter(|g| g.1 == top).map(|g| g.0).collect();

    let rejected = if tied.len() == 1 {
        tied[0]
    } else {
        let infeasible: Vec<usize> = tied
            .iter()
            .copied()
            .filter(|&i| !is_feasible(state.pulled_mean(i).constraint, tau))
            .collect();
        if infeasible.is_empty() {
            argmax_by(&tied, |x, y| {
                state
                    .pulled_mean(x)
                    .objective
                    .total_cmp(&state.pulled_mean(y).objective)
            })
        } else {
            argmax_by(&infeasible, |x, y| {
                state
                    .pulled_mean(x)
                    .constraint
                    .total_cmp(&state.pulled_mean(y).constraint)
            })
        }
    };
    Ok(Rejection {
        rejected,
        apparent_optimal: j_hat,
        gaps,
    })
}

/// Infeasible-First elimination: reject the arm with the largest `mu2_hat` if
/// any arm looks infeasible, otherwise the arm with the largest `mu1_hat`.
/// Ties are broken uniformly at random; `rng` is only consumed on a tie.
pub fn reject_infeasible_first<R: Rng + ?Sized>(
    state: &EstimatorState,
    active: &[usize],
    tau: f64,
    rng: &mut R,
) -> Result<Rejection> {
    let j_hat = empirical_optimal(state, active, tau)?;
    let infeasible: Vec<usize> = active
        .iter()
        .copied()
        .filter(|&i| !is_feasible(state.pulled_mean(i).constraint, tau))
        .collect();
    let (pool, value): (&[usize], fn(crate::model::Attributes) -> f64) = if infeasible.is_empty() {
        (active, |m| m.objective)
    } else {
        (&infeasible, |m| m.constraint)
    };
    let top = pool
        .iter()
        .map(|&i| value(state.pulled_mean(i)))
        .fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = pool
        .iter()
        .copied()
        .filter(|&i| value(state.pulled_mean(i)) == top)
        .collect();
    let rejected = match tied.len() {
        0 => return Err(Error::EmptyActiveSet),
        1 => tied[0],
        n => tied[rng.gen_range(0..n)],
    };
    Ok(Rejection {
        rejected,
        apparent_optimal: j_hat,
        gaps: Vec::new(),
    })
}

/// Classical single-attribute elimination: reject the largest `mu1_hat`,
/// ties to the smaller index. Reports the objective gaps to the smallest
/// `mu1_hat` so traces line up with Constrained-SR under a vacuous threshold.
pub fn reject_classical(state: &EstimatorState, active: &[usize], a1: f64) -> Result<Rejection> {
    if active.is_empty() {
        return Err(Error::EmptyActiveSet);
    }
    let objective = |i: usize| state.pulled_mean(i).objective;
    let leader = active
        .iter()
        .copied()
        .min_by(|&x, &y| objective(x).total_cmp(&objective(y)).then(x.cmp(&y)))
        .expect("nonempty");
    let rejected = argmax_by(active, |x, y| objective(x).total_cmp(&objective(y)));
    let lead = objective(leader);
    let gaps = active
        .iter()
        .filter(|&&i| i != leader)
        .map(|&i| (i, a1.sqrt() * (objective(i) - lead)))
        .collect();
    Ok(Rejection {
        rejected,
        apparent_optimal: leader,
        gaps,
    })
}
