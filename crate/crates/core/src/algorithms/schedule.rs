use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};

/// `1/2 + sum_{i=2}^{K} 1/i`.
pub fn logbar(arms: usize) -> f64 {
    0.5 + (2..=arms).map(|i| 1.0 / i as f64).sum::<f64>()
}

/// Smallest budget for which the first phase pulls every arm at least once.
pub fn min_budget(arms: usize) -> u64 {
    if arms <= 1 {
        1
    } else {
        arms as u64 + 1
    }
}

/// Cumulative per-arm pull targets of a Successive-Rejects run.
///
/// `cumulative[k]` is `n_k`: every arm still active after phase `k` has been
/// pulled exactly that many times. `n_0 = 0` and, for `1 <= k <= K-1`,
/// `n_k = ceil((T - K) / (logbar(K) (K + 1 - k)))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSchedule {
    pub arms: usize,
    pub budget: u64,
    pub logbar: f64,
    pub cumulative: Vec<u64>,
}

impl PhaseSchedule {
    pub fn new(arms: usize, budget: u64) -> Result<Self> {
        if arms == 0 {
            return Err(Error::EmptyInstance);
        }
        let minimum = min_budget(arms);
        if budget < minimum {
            return Err(Error::BudgetTooSmall { arms, budget, minimum });
        }
        // Exact arithmetic: in floating point the ceiling can round an
        // integral quotient up by one (K=5, T=6425 gives 901 instead of 900).
        let mut lb = BigRational::new(BigInt::from(1), BigInt::from(2));
        for i in 2..=arms {
            lb += BigRational::new(BigInt::from(1), BigInt::from(i));
        }
        let spare_q = BigInt::from(budget - arms as u64) * lb.denom();
        let mut cumulative = Vec::with_capacity(arms);
        cumulative.push(0);
        for k in 1..arms {
            let n = spare_q.div_ceil(&(lb.numer() * BigInt::from(arms + 1 - k)));
            cumulative.push(u64::try_from(n).expect("n_k is at most T"));
        }
        Ok(Self {
            arms,
            budget,
            logbar: logbar(arms),
            cumulative,
        })
    }

    /// Number of elimination phases, `K - 1`.
    pub fn phases(&self) -> usize {
        self.arms - 1
    }

    /// Pulls per surviving arm during phase `k` (1-based), `n_k - n_{k-1}`.
    pub fn phase_pulls(&self, k: usize) -> u64 {
        self.cumulative[k] - self.cumulative[k - 1]
    }

    /// Total pulls the schedule issues, `n_1 + ... + n_{K-2} + 2 n_{K-1}`.
    pub fn total_pulls(&self) -> u64 {
        (1..self.arms)
            .map(|k| (self.arms + 1 - k) as u64 * self.phase_pulls(k))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_derived_schedules() {
        let s = PhaseSchedule::new(3, 1000).unwrap();
        assert!((s.logbar - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.cumulative, vec![0, 250, 374]);
        assert_eq!(s.total_pulls(), 998);

        let s = PhaseSchedule::new(2, 100).unwrap();
        assert_eq!(s.logbar, 1.0);
        assert_eq!(s.cumulative, vec![0, 49]);
        assert_eq!(s.total_pulls(), 98);

        let s = PhaseSchedule::new(4, 10000).unwrap();
        assert!((s.logbar - 19.0 / 12.0).abs() < 1e-15);
        assert_eq!(s.cumulative, vec![0, 1579, 2105, 3157]);
        assert_eq!(s.total_pulls(), 9998);
    }

    #[test]
    fn budget_floor() {
        assert_eq!(
            PhaseSchedule::new(3, 3),
            Err(Error::BudgetTooSmall {
                arms: 3,
                budget: 3,
                minimum: 4
            })
        );
        let s = PhaseSchedule::new(3, 4).unwrap();
        assert_eq!(s.cumulative, vec![0, 1, 1]);
        assert!(s.total_pulls() <= 4);
    }

    #[test]
    fn single_arm_has_no_phases() {
        let s = PhaseSchedule::new(1, 10).unwrap();
        assert_eq!(s.phases(), 0);
        assert_eq!(s.cumulative, vec![0]);
    }
}
