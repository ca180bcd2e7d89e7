use serde::{Deserialize, Serialize};

use super::{mean, TimeSeries};
use crate::error::Result;

/// Summary statistics in the layout of a returns descriptive-statistics table.
///
/// `skewness` and `excess_kurtosis` are the standardized third and fourth
/// central moments (population moments, n denominator); kurtosis has 3
/// subtracted. `std_dev` uses the n − 1 denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub n: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

impl TimeSeries {
    pub fn describe(&self) -> Result<DescriptiveStats> {
        self.require_len(4)?;
        let x = self.values();
        let n = x.len() as f64;
        let mu = mean(x);
        let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
        for &v in x {
            let d = v - mu;
            let d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        let (min, max) = x
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        let std_dev = (m2 / (n - 1.0)).sqrt();
        let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
        let (skewness, excess_kurtosis) = if m2 > 0.0 {
            (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
        } else {
            (0.0, 0.0)
        };
        Ok(DescriptiveStats {
            n: x.len(),
            mean: mu.clamp(min, max),
            std_dev,
            min,
            max,
            skewness,
            excess_kurtosis,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn one_to_four() {
        let s = TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap().describe().unwrap();
        assert_eq!(s.n, 4);
        assert_abs_diff_eq!(s.mean, 2.5);
        assert_abs_diff_eq!(s.std_dev, 1.2909944487358056, epsilon = 1e-12);
        assert_eq!((s.min, s.max), (1.0, 4.0));
        assert_abs_diff_eq!(s.skewness, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn two_point_distribution() {
        let x: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let s = TimeSeries::new(x).unwrap().describe().unwrap();
        assert_abs_diff_eq!(s.skewness, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.excess_kurtosis, -2.0, epsilon = 1e-12);
    }

    #[test]
    fn standard_normal_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let x: Vec<f64> = (0..100_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let s = TimeSeries::new(x).unwrap().describe().unwrap();
        assert!(s.skewness.abs() < 0.05, "skew {}", s.skewness);
        assert!(s.excess_kurtosis.abs() < 0.1, "kurt {}", s.excess_kurtosis);
    }

    #[test]
    fn needs_four_observations() {
        assert!(TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap().describe().is_err());
    }

    proptest! {
        #[test]
        fn order_invariant(mut xs in prop::collection::vec(-1e3f64..1e3, 4..100), seed in any::<u64>()) {
            let a = TimeSeries::new(xs.clone()).unwrap().describe().unwrap();
            use rand::seq::SliceRandom;
            xs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let b = TimeSeries::new(xs).unwrap().describe().unwrap();
            let close = |p: f64, q: f64| (p - q).abs() <= 1e-9 * (1.0 + p.abs());
            prop_assert!(close(a.mean, b.mean));
            prop_assert!(close(a.std_dev, b.std_dev));
            prop_assert!(close(a.skewness, b.skewness) || a.std_dev < 1e-6);
            prop_assert!(close(a.excess_kurtosis, b.excess_kurtosis) || a.std_dev < 1e-6);
            prop_assert!(a.min <= a.mean && a.mean <= a.max);
        }
    }
}
