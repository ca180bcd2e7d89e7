use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Steepness multiplier applied to γ in normalized time; with γ = 10 the
/// logistic moves from 0.12 to 0.88 within τ = m ± 0.01.
pub const SMOOTH_TIME_SCALE: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariancePattern {
    Constant,
    SingleBreak,
    SmoothTransition,
    PiecewiseLinear,
}

/// Whether the transition weight interpolates σ² or σ between σ0 and σ1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceScale {
    #[default]
    Variance,
    StdDev,
}

/// Innovation variance path σ²_t with σ1 = c·σ0 and change point m on the
/// normalized time axis τ = t/T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceProfile {
    pub pattern: VariancePattern,
    pub m: f64,
    pub c: f64,
    pub gamma: f64,
    pub sigma0: f64,
    pub scale: VarianceScale,
}

impl VarianceProfile {
    pub fn new(pattern: VariancePattern, m: f64, c: f64) -> Result<Self> {
        let p = Self {
            pattern,
            m,
            c,
            gamma: 10.0,
            sigma0: 1.0,
            scale: VarianceScale::Variance,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn constant() -> Self {
        Self {
            pattern: VariancePattern::Constant,
            m: 0.0,
            c: 1.0,
            gamma: 10.0,
            sigma0: 1.0,
            scale: VarianceScale::Variance,
        }
    }

    pub fn with_scale(mut self, scale: VarianceScale) -> Self {
        self.scale = scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.pattern == VariancePattern::Constant {
            return if self.sigma0 > 0.0 && self.sigma0.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("sigma0 must be positive, got {}", self.sigma0)))
            };
        }
        if !(0.0..1.0).contains(&self.m) {
            return Err(Error::InvalidInput(format!("m must lie in [0, 1), got {}", self.m)));
        }
        for (name, v) in [("c", self.c), ("gamma", self.gamma), ("sigma0", self.sigma0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Transition weight in [0, 1] at normalized time τ.
    fn weight(&self, tau: f64) -> f64 {
        match self.pattern {
            VariancePattern::Constant => 0.0,
            VariancePattern::SingleBreak => {
                if tau >= self.m {
                    1.0
                } else {
                    0.0
                }
            }
            VariancePattern::SmoothTransition => 1.0 / (1.0 + (-self.gamma * (tau - self.m) * SMOOTH_TIME_SCALE).exp()),
            VariancePattern::PiecewiseLinear => {
                if tau >= self.m {
                    (tau - self.m) / (1.0 - self.m)
                } else {
                    0.0
                }
            }
        }
    }

    /// σ²_t for t = 1..=T.
    pub fn path(&self, length: usize) -> Result<Vec<f64>> {
        self.validate()?;
        if length < 2 {
            return Err(Error::TooShort { needed: 2, got: length });
        }
        let s0 = self.sigma0;
        let s1 = self.c * self.sigma0;
        Ok((1..=length)
            .map(|t| {
                let w = self.weight(t as f64 / length as f64);
                match self.scale {
                    VarianceScale::Variance => s0 * s0 + (s1 * s1 - s0 * s0) * w,
                    VarianceScale::StdDev => {
                        let s = s0 + (s1 - s0) * w;
                        s * s
                    }
                }
            })
            .collect())
    }
}

/// σ²_t for t = 1..=T under `profile`.
pub fn variance_profile(profile: &VarianceProfile, length: usize) -> Result<Vec<f64>> {
    profile.path(length)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_break_example() {
        let p = VarianceProfile::new(VariancePattern::SingleBreak, 0.5, 4.0).unwrap();
        assert_eq!(
            p.path(10).unwrap(),
            vec![1.0, 1.0, 1.0, 1.0, 16.0, 16.0, 16.0, 16.0, 16.0, 16.0]
        );
        // σ-space interpolation coincides for a step.
        assert_eq!(p.with_scale(VarianceScale::StdDev).path(10).unwrap(), p.path(10).unwrap());
    }

    #[test]
    fn piecewise_linear_endpoints() {
        let p = VarianceProfile::new(VariancePattern::PiecewiseLinear, 0.0, 2.0).unwrap();
        let v = p.path(1000).unwrap();
        assert!((v[999] - 4.0).abs() < 1e-12);
        assert!((v[0] - (1.0 + 3.0 / 1000.0)).abs() < 1e-12);
        let s = p.with_scale(VarianceScale::StdDev).path(1000).unwrap();
        assert!((s[999] - 4.0).abs() < 1e-12);
        assert!((s[499] - 2.25).abs() < 1e-12);
    }

    #[test]
    fn piecewise_flat_before_m() {
        let p = VarianceProfile::new(VariancePattern::PiecewiseLinear, 0.5, 4.0).unwrap();
        let v = p.path(100).unwrap();
        assert!(v[..49].iter().all(|x| *x == 1.0));
        assert_eq!(v[49], 1.0);
        assert!((v[99] - 16.0).abs() < 1e-12);
    }

    #[test]
    fn smooth_transition_midpoint() {
        let p = VarianceProfile::new(VariancePattern::SmoothTransition, 0.5, 4.0).unwrap();
        let v = p.path(1000).unwrap();
        assert!((v[499] - 8.5).abs() < 1e-12);
        assert!(v[0] < 1.01 && v[999] > 15.99);
    }

    #[test]
    fn constant_ignores_shape_parameters() {
        let mut p = VarianceProfile::constant();
        p.m = 7.0;
        p.c = -1.0;
        assert_eq!(p.path(5).unwrap(), vec![1.0; 5]);
    }

    #[test]
    fn errors() {
        assert!(VarianceProfile::new(VariancePattern::SingleBreak, 1.0, 4.0).is_err());
        assert!(VarianceProfile::new(VariancePattern::SingleBreak, 0.5, 0.0).is_err());
        assert!(VarianceProfile::new(VariancePattern::SingleBreak, -0.1, 4.0).is_err());
        let p = VarianceProfile::new(VariancePattern::SingleBreak, 0.5, 4.0).unwrap();
        assert!(p.path(1).is_err());
    }

    proptest! {
        #[test]
        fn path_stays_between_levels(
            pat in prop_oneof![
                Just(VariancePattern::SingleBreak),
                Just(VariancePattern::SmoothTransition),
                Just(VariancePattern::PiecewiseLinear),
            ],
            m in 0.0f64..0.95,
            c in 0.1f64..10.0,
            std_scale in any::<bool>(),
            t in 2usize..500,
        ) {
            let mut p = VarianceProfile::new(pat, m, c).unwrap();
            if std_scale {
                p.scale = VarianceScale::StdDev;
            }
            let lo = 1.0f64.min(c * c) * (1.0 - 1e-12);
            let hi = 1.0f64.max(c * c) * (1.0 + 1e-12);
            for v in p.path(t).unwrap() {
                prop_assert!(v > 0.0 && v >= lo && v <= hi);
            }
        }
    }
}
