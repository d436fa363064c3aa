use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::BanditInstance;
use crate::error::{Error, Result};
use crate::gaps::{self, compare_candidates};

/// Role of an arm relative to the optimal arm of its instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArmClass {
    Optimal,
    FeasibleSuboptimal,
    /// Infeasible, but with an objective no worse than the optimal arm's.
    Deceiver,
    InfeasibleSuboptimal,
    /// Non-optimal arm of an instance with no feasible arm.
    Infeasible,
}

/// Ground truth for an instance: feasibility, optimal arm, gaps and hardness.
///
/// Per-arm vectors are indexed by arm; the optimal arm carries zero gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceAnalysis {
    pub feasible: bool,
    pub feasible_set: Vec<usize>,
    pub optimal_arm: usize,
    pub classes: Vec<ArmClass>,
    /// Arms sorted by increasing gap to the optimal arm, optimal arm first.
    pub ordering: Vec<usize>,
    /// Raw gaps `delta(J, i)`.
    pub delta_to_opt: Vec<f64>,
    /// Effective gaps `Delta(J, i)`.
    pub gap_to_opt: Vec<f64>,
    pub h1: f64,
    pub h2: f64,
}

/// Computes the ground-truth analysis of `instance`.
///
/// Requires a strict optimum: the smallest objective among feasible arms, or
/// the smallest constraint value when no arm is feasible.
pub fn classify_instance(instance: &BanditInstance) -> Result<InstanceAnalysis> {
    let k = instance.len();
    if k == 0 {
        return Err(Error::EmptyInstance);
    }
    let tau = instance.tau();
    let feasible_set: Vec<usize> = (0..k).filter(|&i| instance.is_feasible(i)).collect();
    let feasible = !feasible_set.is_empty();

    let best = (0..k)
        .min_by(|&x, &y| compare_candidates(instance.mean(x), instance.mean(y), tau))
        .expect("nonempty");
    let ties: Vec<usize> = (0..k)
        .filter(|&i| compare_candidates(instance.mean(i), instance.mean(best), tau) == Ordering::Equal)
        .collect();
    if ties.len() > 1 {
        return Err(Error::NonUniqueOptimal(ties));
    }

    let opt = instance.mean(best);
    let classes = (0..k)
        .map(|i| {
            let m = instance.mean(i);
            if i == best {
                ArmClass::Optimal
            } else if !feasible {
                ArmClass::Infeasible
            } else if instance.is_feasible(i) {
                ArmClass::FeasibleSuboptimal
            } else if m.objective <= opt.objective {
                ArmClass::Deceiver
            } else {
                ArmClass::InfeasibleSuboptimal
            }
        })
        .collect();

    let mut delta_to_opt = vec![0.0; k];
    let mut gap_to_opt = vec![0.0; k];
    for i in 0..k {
        let report = gaps::pair_gap(instance, best, i)?;
        delta_to_opt[i] = report.delta;
        gap_to_opt[i] = report.gap;
    }

    let mut ordering: Vec<usize> = (0..k).filter(|&i| i != best).collect();
    ordering.sort_by(|&x, &y| {
        gap_to_opt[x]
            .total_cmp(&gap_to_opt[y])
            .then_with(|| canonical_tie_break(instance, x, y))
    });
    ordering.insert(0, best);

    let mut analysis = InstanceAnalysis {
        feasible,
        feasible_set,
        optimal_arm: best,
        classes,
        ordering,
        delta_to_opt,
        gap_to_opt,
        h1: 0.0,
        h2: 0.0,
    };
    analysis.h1 = gaps::hardness_h1(&analysis);
    analysis.h2 = gaps::hardness_h2(&analysis);
    Ok(analysis)
}

// Equal gaps: feasible arms first, by objective; infeasible arms by
// constraint; then by index.
fn canonical_tie_break(instance: &BanditInstance, x: usize, y: usize) -> Ordering {
    let (mx, my) = (instance.mean(x), instance.mean(y));
    let by_value = match (instance.is_feasible(x), instance.is_feasible(y)) {
        (true, true) => mx.objective.total_cmp(&my.objective),
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => mx.constraint.total_cmp(&my.constraint),
    };
    by_value.then(x.cmp(&y))
}
