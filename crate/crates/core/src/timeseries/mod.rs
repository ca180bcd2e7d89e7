//! Time-series container and the preprocessing applied before testing.
//!
//! A [`TimeSeries`] is immutable: every transform returns a new series and
//! appends a [`Transform`] tag to its preprocessing log, so a test result can
//! echo exactly what was done to the data.

mod ar;
mod input;
mod stats;
mod transform;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ar::{ArModel, DEFAULT_MAX_ORDER};
pub use input::{load_csv, read_column, ColumnSelector};
pub use stats::DescriptiveStats;

/// A preprocessing step recorded on a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform {
    LogReturns,
    Trim { fraction: f64 },
    Detrend,
    Demean,
    Prewhiten { order: usize },
    RollingStandardize { window: usize },
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::LogReturns => write!(f, "log_returns"),
            Transform::Trim { fraction } => write!(f, "trim:{fraction}"),
            Transform::Detrend => write!(f, "detrend"),
            Transform::Demean => write!(f, "demean"),
            Transform::Prewhiten { order } => write!(f, "prewhiten:{order}"),
            Transform::RollingStandardize { window } => write!(f, "roll_window:{window}"),
        }
    }
}

impl std::str::FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown preprocessing tag {s:?}"));
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        Ok(match (name, arg) {
            ("log_returns", None) => Transform::LogReturns,
            ("detrend", None) => Transform::Detrend,
            ("demean", None) => Transform::Demean,
            ("trim", Some(a)) => Transform::Trim {
                fraction: a.parse().map_err(|_| bad())?,
            },
            ("prewhiten", Some(a)) => Transform::Prewhiten {
                order: a.parse().map_err(|_| bad())?,
            },
            ("roll_window", Some(a)) => Transform::RollingStandardize {
                window: a.parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        })
    }
}

impl Serialize for Transform {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Transform {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Ordered, finite, real-valued observations sampled every `sampling_interval`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    sampling_interval: f64,
    preprocessing_log: Vec<Transform>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_interval(values, 1.0)
    }

    pub fn with_interval(values: Vec<f64>, sampling_interval: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if !(sampling_interval > 0.0 && sampling_interval.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "sampling interval must be positive, got {sampling_interval}"
            )));
        }
        Ok(Self {
            values,
            sampling_interval,
            preprocessing_log: Vec::new(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; a series holds at least one observation.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sampling_interval(&self) -> f64 {
        self.sampling_interval
    }

    /// Highest resolvable frequency, 1/(2τ).
    pub fn nyquist(&self) -> f64 {
        0.5 / self.sampling_interval
    }

    pub fn preprocessing_log(&self) -> &[Transform] {
        &self.preprocessing_log
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    /// Derives a new series from this one, carrying the log forward.
    pub(crate) fn derive(&self, values: Vec<f64>, step: Transform) -> Result<Self> {
        let mut out = Self::with_interval(values, self.sampling_interval)?;
        out.preprocessing_log = self.preprocessing_log.clone();
        out.preprocessing_log.push(step);
        Ok(out)
    }

    pub(crate) fn require_len(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            Err(Error::TooShort {
                needed,
                got: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

impl TryFrom<Vec<f64>> for TimeSeries {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Deviations from the mean, with a second pass to remove the rounding
/// residue of the first.
pub(crate) fn centered(xs: &[f64]) -> Vec<f64> {
    let mu = mean(xs);
    let e: Vec<f64> = xs.iter().map(|v| v - mu).collect();
    let residue = mean(&e);
    e.into_iter().map(|v| v - residue).collect()
}
