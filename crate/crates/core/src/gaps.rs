//! Pairwise suboptimality gaps, hardness indices and lower-bound rates.
//!
//! For a pair of arms `(i, j)` where `i` is the better arm of the two-armed
//! sub-instance, the raw gap `delta(i, j)` measures how far `j` is from
//! beating `i`, and the effective gap `Delta(i, j)` caps it by the distance of
//! `i` from the threshold:
//!
//! ```text
//! delta(i,j) = sqrt(a1) (mu1(j) - mu1(i))                   both feasible
//!            = sqrt(a2) (mu2(j) - tau)                      j a deceiver
//!            = max{sqrt(a2)(mu2(j) - tau),
//!                  sqrt(a1)(mu1(j) - mu1(i))}               j infeasible suboptimal
//!            = sqrt(a2) (mu2(j) - mu2(i))                   both infeasible
//! Delta(i,j) = min{ sqrt(a2) |tau - mu2(i)|, delta(i,j) }
//! ```
//!
//! The same formulas are evaluated on empirical means inside the
//! elimination rule, so the point-level functions take plain [`Attributes`].

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{is_feasible, Attributes, BanditInstance, InstanceAnalysis};

/// Which branch of the raw-gap definition applied to a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairCase {
    BothFeasible,
    Deceiver,
    InfeasibleSuboptimal,
    BothInfeasible,
}

/// Gaps between a pair-optimal arm and another arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub optimal: usize,
    pub other: usize,
    /// Raw gap `delta(optimal, other)`.
    pub delta: f64,
    /// Effective gap `Delta(optimal, other)`.
    pub gap: f64,
    pub case: PairCase,
}

/// Compares two attribute points as candidates for the optimal arm.
///
/// `Less` means `a` is better: a feasible point beats an infeasible one,
/// feasible points compare by objective, infeasible points by constraint.
pub fn compare_candidates(a: Attributes, b: Attributes, tau: f64) -> Ordering {
    match (is_feasible(a.constraint, tau), is_feasible(b.constraint, tau)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => a.objective.total_cmp(&b.objective),
        (false, false) => a.constraint.total_cmp(&b.constraint),
    }
}

/// Raw gap `delta` between points, `best` assumed pair-optimal.
pub fn raw_delta(best: Attributes, other: Attributes, tau: f64, a1: f64, a2: f64) -> (f64, PairCase) {
    let best_feasible = is_feasible(best.constraint, tau);
    let other_feasible = is_feasible(other.constraint, tau);
    let objective_gap = a1.sqrt() * (other.objective - best.objective);
    match (best_feasible, other_feasible) {
        (true, true) => (objective_gap, PairCase::BothFeasible),
        (true, false) => {
            let violation = a2.sqrt() * (other.constraint - tau);
            if other.objective <= best.objective {
                (violation, PairCase::Deceiver)
            } else {
                (violation.max(objective_gap), PairCase::InfeasibleSuboptimal)
            }
        }
        // `best` infeasible: every point compared against it is treated as
        // infeasible too (it would otherwise be the better one).
        (false, _) => (
            a2.sqrt() * (other.constraint - best.constraint),
            PairCase::BothInfeasible,
        ),
    }
}

/// Effective gap `Delta` between points, `best` assumed pair-optimal.
///
/// Returns `(Delta, delta, case)`.
pub fn effective_gap(best: Attributes, other: Attributes, tau: f64, a1: f64, a2: f64) -> (f64, f64, PairCase) {
    let (delta, case) = raw_delta(best, other, tau, a1, a2);
    let margin = a2.sqrt() * (tau - best.constraint).abs();
    (margin.min(delta), delta, case)
}

/// The optimal arm of the two-armed sub-instance `{i, j}`. Exact ties go to the smaller index.
pub fn pair_optimal(instance: &BanditInstance, i: usize, j: usize) -> usize {
    match compare_candidates(instance.mean(i), instance.mean(j), instance.tau()) {
        Ordering::Less => i,
        Ordering::Greater => j,
        Ordering::Equal => i.min(j),
    }
}

fn checked_pair(instance: &BanditInstance, i: usize, j: usize) -> Result<()> {
    instance.check_index(i)?;
    instance.check_index(j)?;
    if i != j && pair_optimal(instance, i, j) != i {
        return Err(Error::PairOrderViolation { first: i, second: j });
    }
    Ok(())
}

/// Raw gap `delta(i, j)` on true means. `delta(i, i)` is zero.
pub fn pair_delta(instance: &BanditInstance, i: usize, j: usize) -> Result<f64> {
    Ok(pair_gap(instance, i, j)?.delta)
}

/// Both gaps for the pair `(i, j)` on true means.
///
/// Fails with [`Error::PairOrderViolation`] unless `i` is pair-optimal.
pub fn pair_gap(instance: &BanditInstance, i: usize, j: usize) -> Result<GapReport> {
    checked_pair(instance, i, j)?;
    let tau = instance.tau();
    let best = instance.mean(i);
    if i == j {
        let case = if is_feasible(best.constraint, tau) {
            PairCase::BothFeasible
        } else {
            PairCase::BothInfeasible
        };
        return Ok(GapReport {
            optimal: i,
            other: j,
            delta: 0.0,
            gap: 0.0,
            case,
        });
    }
    let (gap, delta, case) = effective_gap(best, instance.mean(j), tau, instance.a1(), instance.a2());
    Ok(GapReport {
        optimal: i,
        other: j,
        delta,
        gap,
        case,
    })
}

/// `H1`: sum of `1 / Delta(J, i)^2` over the non-optimal arms; `+inf` on any zero gap.
pub fn hardness_h1(analysis: &InstanceAnalysis) -> f64 {
    analysis
        .ordering
        .iter()
        .skip(1)
        .map(|&i| inverse_square(analysis.gap_to_opt[i]))
        .sum()
}

/// `H2`: max over canonical positions `p = 2..K` of `p / Delta(J, ordering[p-1])^2`.
///
/// Zero for a single-armed instance.
pub fn hardness_h2(analysis: &InstanceAnalysis) -> f64 {
    analysis
        .ordering
        .iter()
        .enumerate()
        .skip(1)
        .map(|(pos, &i)| (pos + 1) as f64 * inverse_square(analysis.gap_to_opt[i]))
        .fold(0.0, f64::max)
}

fn inverse_square(gap: f64) -> f64 {
    if gap == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (gap * gap)
    }
}

/// Classification of a two-armed instance used by the case-specific rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoArmCase {
    /// Case 1: the other arm is feasible and suboptimal.
    FeasibleSuboptimal,
    /// Case 2: the other arm is a deceiver.
    Deceiver,
    /// Case 3: the other arm is infeasible and suboptimal.
    InfeasibleSuboptimal,
    /// Case 4: neither arm is feasible.
    Infeasible,
}

impl TwoArmCase {
    pub fn number(self) -> u8 {
        match self {
            Self::FeasibleSuboptimal => 1,
            Self::Deceiver => 2,
            Self::InfeasibleSuboptimal => 3,
            Self::Infeasible => 4,
        }
    }
}

/// Upper bounds on the error exponent `limsup -(1/T) log e_T` of a two-armed instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub optimal: usize,
    /// `Delta(J, other)^2`.
    pub rate_gap_squared: f64,
    /// Case-specific rate, constants included.
    pub rate_case_specific: f64,
    pub case: TwoArmCase,
}

/// Lower-bound rates for a two-armed instance.
///
/// Case-specific rates (arm 1 = optimal, arm 2 = other):
///
/// 1. `1/2 min{a2 (tau - mu2(1))^2, a1 (mu1(2) - mu1(1))^2 / 4}`
/// 2. `1/2 min{a2 (tau - mu2(1))^2, a2 (mu2(2) - tau)^2}`
/// 3. `min{a2 (tau - mu2(1))^2, max{a2 (mu2(2) - tau)^2, a1 (mu1(2) - mu1(1))^2}}`
/// 4. `min{a1 (mu2(2) - mu2(1))^2 / 4, a2 (mu2(1) - tau)^2}`
///
/// Case 3 carries no factor 1/2 and case 4 multiplies a constraint-axis
/// difference by `a1`; both are kept as stated in the source derivation.
pub fn two_arm_rate(instance: &BanditInstance) -> Result<LowerBoundReport> {
    if instance.len() != 2 {
        return Err(Error::WrongArity(instance.len()));
    }
    let best = pair_optimal(instance, 0, 1);
    if compare_candidates(instance.mean(0), instance.mean(1), instance.tau()) == Ordering::Equal {
        return Err(Error::NonUniqueOptimal(vec![0, 1]));
    }
    let other = 1 - best;
    let report = pair_gap(instance, best, other)?;
    let (a1, a2, tau) = (instance.a1(), instance.a2(), instance.tau());
    let (m1, m2) = (instance.mean(best), instance.mean(other));
    let margin_sq = a2 * (tau - m1.constraint).powi(2);
    let objective_sq = a1 * (m2.objective - m1.objective).powi(2);
    let violation_sq = a2 * (m2.constraint - tau).powi(2);
    let (case, rate) = match report.case {
        PairCase::BothFeasible => (TwoArmCase::FeasibleSuboptimal, 0.5 * margin_sq.min(objective_sq / 4.0)),
        PairCase::Deceiver => (TwoArmCase::Deceiver, 0.5 * margin_sq.min(violation_sq)),
        PairCase::InfeasibleSuboptimal => (
            TwoArmCase::InfeasibleSuboptimal,
            margin_sq.min(violation_sq.max(objective_sq)),
        ),
        PairCase::BothInfeasible => (
            TwoArmCase::Infeasible,
            (a1 * (m2.constraint - m1.constraint).powi(2) / 4.0).min(margin_sq),
        ),
    };
    Ok(LowerBoundReport {
        optimal: best,
        rate_gap_squared: report.gap * report.gap,
        rate_case_specific: rate,
        case,
    })
}

/// Lower-bound rate when no arm is feasible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AllInfeasibleBound {
    /// Arm with the smallest constraint value.
    pub optimal: usize,
    /// `a2 (mu2(J) - tau)^2`.
    pub rate: f64,
    /// `K / (a2 (mu2(J) - tau)^2)`, the hardness obtained when the gap between
    /// two infeasible arms is taken as `sqrt(a2) min{mu2(i) - tau, mu2(j) - tau}`.
    pub min_violation_h1: f64,
}

pub fn all_infeasible_rate(instance: &BanditInstance) -> Result<AllInfeasibleBound> {
    if let Some(i) = (0..instance.len()).find(|&i| instance.is_feasible(i)) {
        return Err(Error::NotAllInfeasible(i));
    }
    let optimal = (0..instance.len())
        .min_by(|&x, &y| instance.mean(x).constraint.total_cmp(&instance.mean(y).constraint))
        .ok_or(Error::EmptyInstance)?;
    let rate = instance.a2() * (instance.mean(optimal).constraint - instance.tau()).powi(2);
    Ok(AllInfeasibleBound {
        optimal,
        rate,
        min_violation_h1: instance.len() as f64 / rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{classify_instance, BivariateGaussianArm};

    fn det(means: &[[f64; 2]], tau: f64, a1: f64, a2: f64) -> BanditInstance {
        let arms = means.iter().map(|&m| BivariateGaussianArm::deterministic(m)).collect();
        BanditInstance::with_concentration(arms, tau, Some(a1), Some(a2)).unwrap()
    }

    fn instance_a() -> BanditInstance {
        det(&[[1.0, 0.95], [5.0, 0.001], [10.0, 0.001]], 1.0, 0.5, 0.5)
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn pair_optimal_rules() {
        let inst = det(
            &[[1.0, 0.9], [2.0, 0.9], [5.0, 0.9], [1.0, 1.5], [0.3, 1.6], [0.2, 1.1]],
            1.0,
            1.0,
            1.0,
        );
        assert_eq!(pair_optimal(&inst, 0, 1), 0);
        assert_eq!(pair_optimal(&inst, 1, 0), 0);
        assert_eq!(pair_optimal(&inst, 2, 3), 2);
        assert_eq!(pair_optimal(&inst, 4, 5), 5);
        let tied = det(&[[1.0, 0.9], [1.0, 0.9]], 1.0, 1.0, 1.0);
        assert_eq!(pair_optimal(&tied, 1, 0), 0);
    }

    #[test]
    fn delta_branches() {
        let a = instance_a();
        let d = pair_delta(&a, 0, 1).unwrap();
        assert!(close(d, 0.5f64.sqrt() * 4.0, 1e-15));
        assert!(close(d, 2.828427, 1e-6));

        let dec = det(&[[1.0, 0.9], [0.5, 1.2]], 1.0, 1.0, 1.0);
        let r = pair_gap(&dec, 0, 1).unwrap();
        assert_eq!(r.case, PairCase::Deceiver);
        assert!(close(r.delta, 0.2, 1e-12));
        assert!(close(r.gap, 0.1, 1e-12));

        let eq = det(&[[1.0, 0.9], [1.0, 0.2]], 1.0, 1.0, 1.0);
        assert_eq!(pair_delta(&eq, 0, 1).unwrap(), 0.0);

        let inf_sub = det(&[[1.0, 0.9], [1.2, 1.05]], 1.0, 1.0, 1.0);
        let r = pair_gap(&inf_sub, 0, 1).unwrap();
        assert_eq!(r.case, PairCase::InfeasibleSuboptimal);
        assert!(close(r.delta, 0.2, 1e-12));

        let both_inf = det(&[[0.3, 1.6], [0.2, 1.1]], 1.0, 1.0, 1.0);
        let r = pair_gap(&both_inf, 1, 0).unwrap();
        assert_eq!(r.case, PairCase::BothInfeasible);
        assert!(close(r.delta, 0.5, 1e-12));
        assert!(close(r.gap, 0.1, 1e-12));
    }

    #[test]
    fn effective_gap_on_instance_a() {
        let a = instance_a();
        let r = pair_gap(&a, 0, 1).unwrap();
        assert!(close(r.gap, 0.5f64.sqrt() * 0.05, 1e-12));
        assert!(close(r.gap, 0.0353553, 1e-5));
    }

    #[test]
    fn boundary_optimal_has_zero_gap() {
        let inst = det(&[[1.0, 1.0], [3.0, 0.1]], 1.0, 1.0, 1.0);
        assert_eq!(pair_gap(&inst, 0, 1).unwrap().gap, 0.0);
    }

    #[test]
    fn wrong_order_is_rejected() {
        let a = instance_a();
        assert_eq!(
            pair_delta(&a, 1, 0),
            Err(Error::PairOrderViolation { first: 1, second: 0 })
        );
        assert_eq!(pair_delta(&a, 1, 1), Ok(0.0));
        assert!(matches!(pair_delta(&a, 0, 7), Err(Error::ArmOutOfRange { .. })));
    }

    #[test]
    fn hardness_on_instance_a() {
        let analysis = classify_instance(&instance_a()).unwrap();
        let g = 0.5f64.sqrt() * 0.05;
        let expect_h1 = 2.0 / (g * g);
        let expect_h2 = 3.0 / (g * g);
        assert!(close(hardness_h1(&analysis), expect_h1, 1e-12));
        assert!(close(hardness_h2(&analysis), expect_h2, 1e-12));
        assert!(close(analysis.h1, 1600.0, 1e-12));
        assert!(close(analysis.h2, 2400.0, 1e-12));
    }

    #[test]
    fn hardness_small_cases() {
        let inst = det(&[[0.0, 0.0], [1.0, 0.0]], 10.0, 1.0, 1.0);
        let an = classify_instance(&inst).unwrap();
        assert!(close(an.h1, 1.0, 1e-12));
        let inst = det(&[[0.0, 0.0], [0.5, 0.0]], 10.0, 1.0, 1.0);
        let an = classify_instance(&inst).unwrap();
        assert!(close(an.h2, 8.0, 1e-12));
        let inst = det(&[[0.0, 1.0], [0.5, 0.0]], 1.0, 1.0, 1.0);
        let an = classify_instance(&inst).unwrap();
        assert_eq!(an.h1, f64::INFINITY);
        assert_eq!(an.h2, f64::INFINITY);
    }

    #[test]
    fn two_arm_rates() {
        let c1 = det(&[[1.0, 0.9], [2.0, 0.95]], 1.0, 1.0, 1.0);
        let r = two_arm_rate(&c1).unwrap();
        assert_eq!(r.case, TwoArmCase::FeasibleSuboptimal);
        assert!(close(r.rate_gap_squared, 0.01, 1e-12));
        assert!(close(r.rate_case_specific, 0.005, 1e-12));

        let c2 = det(&[[1.0, 0.9], [0.5, 1.3]], 1.0, 1.0, 1.0);
        let r = two_arm_rate(&c2).unwrap();
        assert_eq!(r.case, TwoArmCase::Deceiver);
        assert!(close(r.rate_case_specific, 0.005, 1e-12));

        let c3 = det(&[[1.0, 0.9], [1.5, 1.2]], 1.0, 1.0, 1.0);
        let r = two_arm_rate(&c3).unwrap();
        assert_eq!(r.case, TwoArmCase::InfeasibleSuboptimal);
        // min{0.01, max{0.04, 0.25}}
        assert!(close(r.rate_case_specific, 0.01, 1e-12));

        let c4 = det(&[[0.0, 1.2], [0.0, 1.6]], 1.0, 2.0, 1.0);
        let r = two_arm_rate(&c4).unwrap();
        assert_eq!(r.case, TwoArmCase::Infeasible);
        // min{2 * 0.16 / 4, 0.04}
        assert!(close(r.rate_case_specific, 0.04, 1e-12));

        let boundary = det(&[[1.0, 1.0], [2.0, 0.5]], 1.0, 1.0, 1.0);
        let r = two_arm_rate(&boundary).unwrap();
        assert_eq!(r.rate_gap_squared, 0.0);
        assert_eq!(r.rate_case_specific, 0.0);

        assert_eq!(two_arm_rate(&instance_a()), Err(Error::WrongArity(3)));
    }

    #[test]
    fn two_arm_rate_is_label_invariant() {
        let ab = det(&[[1.0, 0.9], [0.5, 1.3]], 1.0, 1.0, 1.0);
        let ba = det(&[[0.5, 1.3], [1.0, 0.9]], 1.0, 1.0, 1.0);
        let (x, y) = (two_arm_rate(&ab).unwrap(), two_arm_rate(&ba).unwrap());
        assert_eq!(x.rate_gap_squared, y.rate_gap_squared);
        assert_eq!(x.rate_case_specific, y.rate_case_specific);
        assert_eq!(x.optimal, 0);
        assert_eq!(y.optimal, 1);
    }

    #[test]
    fn all_infeasible() {
        let d = det(&[[0.3, 1.6], [0.4, 1.7], [0.2, 1.1], [0.5, 1.2]], 1.0, 0.5, 0.5);
        let b = all_infeasible_rate(&d).unwrap();
        assert_eq!(b.optimal, 2);
        assert!(close(b.rate, 0.005, 1e-12));
        assert!(close(b.min_violation_h1, 4.0 / 0.005, 1e-12));

        let one = det(&[[0.0, 2.0]], 1.0, 1.0, 1.0);
        assert!(close(all_infeasible_rate(&one).unwrap().rate, 1.0, 1e-15));

        assert_eq!(all_infeasible_rate(&instance_a()), Err(Error::NotAllInfeasible(0)));
    }
}
