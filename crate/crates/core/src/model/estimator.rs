use super::Attributes;

/// Pull count and running mean for one arm.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ArmEstimate {
    pub pulls: u64,
    // Stored as a running mean rather than a raw sum so that a constant
    // stream reproduces its value exactly.
    mean: [f64; 2],
}

impl ArmEstimate {
    /// Empirical mean of everything absorbed so far, `None` before the first sample.
    pub fn mean(&self) -> Option<Attributes> {
        (self.pulls > 0).then(|| Attributes::new(self.mean[0], self.mean[1]))
    }
}

/// Per-arm empirical averages for one algorithm run.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorState {
    arms: Vec<ArmEstimate>,
}

impl EstimatorState {
    pub fn new(arms: usize) -> Self {
        Self {
            arms: vec![ArmEstimate::default(); arms],
        }
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    /// Folds a single sample into the estimate of `arm`.
    ///
    /// Panics if `arm` is out of range.
    pub fn update(&mut self, arm: usize, sample: Attributes) {
        self.absorb(arm, 1, sample);
    }

    /// Folds `count` samples, given by their coordinate-wise `sum`, into `arm`.
    pub fn absorb(&mut self, arm: usize, count: u64, sum: Attributes) {
        if count == 0 {
            return;
        }
        let est = &mut self.arms[arm];
        let c = count as f64;
        est.pulls += count;
        let n = est.pulls as f64;
        est.mean[0] += (sum.objective - c * est.mean[0]) / n;
        est.mean[1] += (sum.constraint - c * est.mean[1]) / n;
    }

    pub fn pulls(&self, arm: usize) -> u64 {
        self.arms[arm].pulls
    }

    pub fn total_pulls(&self) -> u64 {
        self.arms.iter().map(|a| a.pulls).sum()
    }

    pub fn mean(&self, arm: usize) -> Option<Attributes> {
        self.arms[arm].mean()
    }

    /// Mean of an arm known to have been pulled.
    ///
    /// Panics if the arm has no samples.
    pub(crate) fn pulled_mean(&self, arm: usize) -> Attributes {
        self.arms[arm]
            .mean()
            .unwrap_or_else(|| panic!("arm {arm} has not been pulled"))
    }

    pub fn estimates(&self) -> &[ArmEstimate] {
        &self.arms
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_sample() {
        let mut s = EstimatorState::new(1);
        assert_eq!(s.mean(0), None);
        s.update(0, Attributes::new(3.0, 4.0));
        assert_eq!(s.mean(0), Some(Attributes::new(3.0, 4.0)));
        assert_eq!(s.pulls(0), 1);
    }

    #[test]
    fn average_of_two() {
        let mut s = EstimatorState::new(2);
        s.update(1, Attributes::new(1.0, 0.0));
        s.update(1, Attributes::new(3.0, 0.0));
        assert_eq!(s.mean(1), Some(Attributes::new(2.0, 0.0)));
        assert_eq!(s.pulls(1), 2);
        assert_eq!(s.pulls(0), 0);
    }

    #[test]
    fn constant_stream() {
        let mut s = EstimatorState::new(1);
        for _ in 0..1000 {
            s.update(0, Attributes::new(5.0, 5.0));
        }
        let m = s.mean(0).unwrap();
        assert!((m.objective - 5.0).abs() < 1e-12);
        assert!((m.constraint - 5.0).abs() < 1e-12);
        assert_eq!(s.pulls(0), 1000);
    }

    proptest! {
        #[test]
        fn running_mean_matches_batch_average(
            xs in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..200),
            split in 0usize..200,
        ) {
            let mut s = EstimatorState::new(1);
            let split = split.min(xs.len());
            for &(a, b) in &xs[..split] {
                s.update(0, Attributes::new(a, b));
            }
            let tail = &xs[split..];
            let sum = tail.iter().fold((0.0, 0.0), |acc, &(a, b)| (acc.0 + a, acc.1 + b));
            s.absorb(0, tail.len() as u64, Attributes::new(sum.0, sum.1));

            let n = xs.len() as f64;
            let m0 = xs.iter().map(|x| x.0).sum::<f64>() / n;
            let m1 = xs.iter().map(|x| x.1).sum::<f64>() / n;
            let got = s.mean(0).unwrap();
            prop_assert_eq!(s.pulls(0), xs.len() as u64);
            prop_assert!((got.objective - m0).abs() <= 1e-9 * (1.0 + m0.abs()));
            prop_assert!((got.constraint - m1).abs() <= 1e-9 * (1.0 + m1.abs()));
        }
    }
}
