//! KPSS test of level stationarity with a Bartlett-kernel long-run variance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::result::KpssResult;
use crate::timeseries::{centered, TimeSeries};

pub const MIN_LENGTH: usize = 10;

/// Upper-tail critical values of the level-stationarity statistic.
pub const CRITICAL_VALUES: [(SignificanceLevel, f64); 4] = [
    (SignificanceLevel::Ten, 0.347),
    (SignificanceLevel::Five, 0.463),
    (SignificanceLevel::TwoPointFive, 0.574),
    (SignificanceLevel::One, 0.739),
];

/// The tabulated significance levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SignificanceLevel {
    One,
    TwoPointFive,
    Five,
    Ten,
}

impl SignificanceLevel {
    pub fn alpha(self) -> f64 {
        match self {
            SignificanceLevel::Ten => 0.10,
            SignificanceLevel::Five => 0.05,
            SignificanceLevel::TwoPointFive => 0.025,
            SignificanceLevel::One => 0.01,
        }
    }

    pub fn critical_value(self) -> f64 {
        CRITICAL_VALUES
            .iter()
            .find(|(l, _)| *l == self)
            .map(|(_, c)| *c)
            .expect("every level is tabulated")
    }
}

impl TryFrom<f64> for SignificanceLevel {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        CRITICAL_VALUES
            .iter()
            .map(|(l, _)| *l)
            .find(|l| (l.alpha() - alpha).abs() < 1e-12)
            .ok_or(Error::UnsupportedAlpha(alpha))
    }
}

impl Serialize for SignificanceLevel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.alpha())
    }
}

impl<'de> Deserialize<'de> for SignificanceLevel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let a = f64::deserialize(d)?;
        SignificanceLevel::try_from(a).map_err(serde::de::Error::custom)
    }
}

/// Truncation lag of the Bartlett kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Bandwidth {
    Fixed(usize),
    /// ⌊4·(T/100)^{1/4}⌋.
    #[default]
    Auto,
    /// ⌊3·√T/13⌋, the short lag of R's `tseries::kpss.test`.
    SqrtRule,
}

impl Bandwidth {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            Bandwidth::Fixed(l) => l,
            Bandwidth::Auto => (4.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize,
            Bandwidth::SqrtRule => (3.0 * (n as f64).sqrt() / 13.0).floor() as usize,
        }
    }
}

impl std::fmt::Display for Bandwidth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bandwidth::Fixed(l) => write!(f, "{l}"),
            Bandwidth::Auto => f.write_str("auto"),
            Bandwidth::SqrtRule => f.write_str("sqrt"),
        }
    }
}

impl std::str::FromStr for Bandwidth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Bandwidth::Auto),
            "sqrt" => Ok(Bandwidth::SqrtRule),
            _ => s
                .parse()
                .map(Bandwidth::Fixed)
                .map_err(|_| Error::InvalidInput(format!("bandwidth must be a lag, \"auto\" or \"sqrt\", got {s:?}"))),
        }
    }
}

impl Serialize for Bandwidth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bandwidth::Fixed(l) => s.serialize_u64(*l as u64),
            other => s.collect_str(other),
        }
    }
}

impl<'de> Deserialize<'de> for Bandwidth {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Lag(usize),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Lag(l) => Ok(Bandwidth::Fixed(l)),
            Raw::Name(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KpssConfig {
    #[serde(default)]
    pub bandwidth: Bandwidth,
    pub alpha: SignificanceLevel,
}

impl Default for KpssConfig {
    fn default() -> Self {
        Self {
            bandwidth: Bandwidth::Auto,
            alpha: SignificanceLevel::Five,
        }
    }
}

/// σ̂² = γ̂(0) + 2 Σ_{j=1}^{ℓ} (1 − j/(ℓ+1)) γ̂(j) on the demeaned series.
pub fn long_run_variance(values: &[f64], bandwidth: usize) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    if bandwidth >= n {
        return Err(Error::InvalidInput(format!("bandwidth {bandwidth} must be below the series length {n}")));
    }
    let e = centered(values);
    Ok(bartlett_variance(&e, bandwidth))
}

fn bartlett_variance(e: &[f64], bandwidth: usize) -> f64 {
    let n = e.len() as f64;
    let gamma = |lag: usize| e[lag..].iter().zip(e).map(|(a, b)| a * b).sum::<f64>() / n;
    let weight = |j: usize| 1.0 - j as f64 / (bandwidth as f64 + 1.0);
    gamma(0) + 2.0 * (1..=bandwidth).map(|j| weight(j) * gamma(j)).sum::<f64>()
}

/// Statistic and the lag actually used.
pub fn kpss_statistic_with_lag(series: &TimeSeries, bandwidth: Bandwidth) -> Result<(f64, usize)> {
    let x = series.values();
    let n = x.len();
    if n < MIN_LENGTH {
        return Err(Error::TooShort { needed: MIN_LENGTH, got: n });
    }
    let lag = bandwidth.resolve(n).min(n - 1);
    let e = centered(x);
    let sigma2 = bartlett_variance(&e, lag);
    let scale = e.iter().map(|v| v * v).sum::<f64>() / n as f64;
    if !(sigma2 > 1e-12 * scale) || !(scale > 0.0) {
        return Err(Error::DegenerateVariance(sigma2));
    }
    let mut partial = 0.0;
    let mut eta = 0.0;
    for v in &e {
        partial += v;
        eta += partial * partial;
    }
    Ok((eta / (sigma2 * (n as f64).powi(2)), lag))
}

pub fn kpss_statistic(series: &TimeSeries, config: &KpssConfig) -> Result<f64> {
    kpss_statistic_with_lag(series, config.bandwidth).map(|(s, _)| s)
}

/// Interval of tabulated levels containing the p-value of `statistic`.
pub fn p_bracket(statistic: f64) -> [f64; 2] {
    // CRITICAL_VALUES ascend in the statistic and descend in alpha.
    let mut upper = 1.0;
    for (level, cv) in CRITICAL_VALUES {
        if statistic > cv {
            upper = level.alpha();
        } else {
            return [level.alpha(), upper];
        }
    }
    [0.0, upper]
}

pub fn kpss_test(series: &TimeSeries, config: &KpssConfig) -> Result<KpssResult> {
    let (statistic, lag) = kpss_statistic_with_lag(series, config.bandwidth)?;
    Ok(KpssResult {
        statistic,
        p_bracket: p_bracket(statistic),
        alpha: config.alpha.alpha(),
        reject: statistic > config.alpha.critical_value(),
        bandwidth: lag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn alternating(n: usize) -> Vec<f64> {
        (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect()
    }

    #[test]
    fn bandwidth_zero_is_biased_variance() {
        let x = [1.0, 2.0, 4.0, 7.0];
        let m = 3.5;
        let want = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / 4.0;
        assert!((long_run_variance(&x, 0).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn alternating_long_run_variance() {
        // γ(0) = 1, γ(1) = −99/100 → 1 + 2·(1/2)·(−0.99) = 0.01.
        let v = long_run_variance(&alternating(100), 1).unwrap();
        assert!((v - 0.01).abs() < 1e-12, "{v}");
    }

    #[test]
    fn auto_bandwidth() {
        assert_eq!(Bandwidth::Auto.resolve(100), 4);
        assert_eq!(Bandwidth::Auto.resolve(250), 5);
        assert_eq!(Bandwidth::SqrtRule.resolve(250), 3);
        assert_eq!(Bandwidth::SqrtRule.resolve(1000), 7);
        assert_eq!(Bandwidth::Fixed(9).resolve(1000), 9);
    }

    #[test]
    fn alternating_statistic_closed_form() {
        for n in [10, 100, 1000] {
            let s = TimeSeries::new(alternating(n)).unwrap();
            let cfg = KpssConfig {
                bandwidth: Bandwidth::Fixed(0),
                ..KpssConfig::default()
            };
            let stat = kpss_statistic(&s, &cfg).unwrap();
            assert!((stat - 1.0 / (2.0 * n as f64)).abs() < 1e-15, "T = {n}");
        }
    }

    #[test]
    fn decision_table() {
        assert_eq!(p_bracket(0.20), [0.10, 1.0]);
        assert_eq!(p_bracket(0.40), [0.05, 0.10]);
        assert_eq!(p_bracket(0.50), [0.025, 0.05]);
        assert_eq!(p_bracket(0.60), [0.01, 0.025]);
        assert_eq!(p_bracket(0.80), [0.0, 0.01]);
        let reject = |stat: f64, level: SignificanceLevel| stat > level.critical_value();
        assert!(!reject(0.20, SignificanceLevel::Five));
        assert!(reject(0.50, SignificanceLevel::Five));
        assert!(!reject(0.50, SignificanceLevel::One));
    }

    #[test]
    fn unsupported_alpha() {
        assert!(matches!(SignificanceLevel::try_from(0.07), Err(Error::UnsupportedAlpha(_))));
        assert_eq!(SignificanceLevel::try_from(0.025).unwrap(), SignificanceLevel::TwoPointFive);
        assert!(serde_json::from_str::<KpssConfig>(r#"{"alpha":0.2}"#).is_err());
    }

    #[test]
    fn constant_series_degenerate() {
        let s = TimeSeries::new(vec![3.0; 50]).unwrap();
        assert!(matches!(
            kpss_test(&s, &KpssConfig::default()),
            Err(Error::DegenerateVariance(_))
        ));
        assert!(kpss_test(&TimeSeries::new(vec![1.0; 9]).unwrap(), &KpssConfig::default()).is_err());
    }

    #[test]
    fn random_walk_statistic_grows_with_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let mut median = |n: usize| {
            let mut stats: Vec<f64> = (0..201)
                .map(|_| {
                    let mut acc = 0.0;
                    let x: Vec<f64> = (0..n)
                        .map(|_| {
                            acc += <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng);
                            acc
                        })
                        .collect();
                    kpss_statistic(&TimeSeries::new(x).unwrap(), &KpssConfig::default()).unwrap()
                })
                .collect();
            stats.sort_by(f64::total_cmp);
            stats[100]
        };
        let m250 = median(250);
        let m1000 = median(1000);
        assert!(m1000 > m250, "{m1000} vs {m250}");
    }

    #[test]
    fn config_json() {
        let c = KpssConfig {
            bandwidth: Bandwidth::SqrtRule,
            alpha: SignificanceLevel::Five,
        };
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"bandwidth":"sqrt","alpha":0.05}"#);
        assert_eq!(serde_json::from_str::<KpssConfig>(&s).unwrap(), c);
        let f: KpssConfig = serde_json::from_str(r#"{"bandwidth":3,"alpha":0.01}"#).unwrap();
        assert_eq!(f.bandwidth, Bandwidth::Fixed(3));
    }

    proptest! {
        #[test]
        fn shift_and_scale_invariant(
            xs in prop::collection::vec(-10.0f64..10.0, 20..200),
            shift in -1e3f64..1e3,
            scale in 1e-3f64..1e3,
        ) {
            let base = TimeSeries::new(xs.clone()).unwrap();
            let cfg = KpssConfig::default();
            let Ok(s0) = kpss_statistic(&base, &cfg) else { return Ok(()); };
            let shifted = TimeSeries::new(xs.iter().map(|v| v + shift).collect()).unwrap();
            let scaled = TimeSeries::new(xs.iter().map(|v| v * scale).collect()).unwrap();
            let s1 = kpss_statistic(&shifted, &cfg).unwrap();
            let s2 = kpss_statistic(&scaled, &cfg).unwrap();
            prop_assert!((s1 - s0).abs() <= 1e-12 * s0, "{} vs {}", s1, s0);
            prop_assert!((s2 - s0).abs() <= 1e-9 * s0);
        }
    }
}
