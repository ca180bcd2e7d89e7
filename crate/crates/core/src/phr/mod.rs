//! The cumulant-spectrum test for strict stationarity.
//!
//! Under strict stationarity the second-order cumulant spectrum vanishes on
//! the principal domain. The test estimates it by frame averaging, normalizes
//! each pair by the estimated spectrum, scales by √(2P) and checks that the
//! stacked real and imaginary parts look standard normal with a one-sample
//! Kolmogorov–Smirnov test.

mod ks;
mod pivot;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::result::PhrResult;
use crate::spectral::{CumulantGrid, DftBackend, FramePlan};
use crate::timeseries::TimeSeries;

pub use ks::{kolmogorov_q, ks_p_value, ks_standard_normal, ks_uniform_statistic, normal_cdf, KsResult};
pub use pivot::{stack_components, y_statistics, YGrid, SPECTRUM_FLOOR};

/// Below this length the asymptotics are unreliable.
pub const RECOMMENDED_MIN_LENGTH: usize = 500;
pub const MIN_LENGTH: usize = 150;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhrConfig {
    /// Frame length L; `None` picks the nearest even integer to √T.
    pub frame_length: Option<usize>,
    pub alpha: f64,
    #[serde(default)]
    pub backend: DftBackend,
}

impl Default for PhrConfig {
    fn default() -> Self {
        Self {
            frame_length: None,
            alpha: 0.05,
            backend: DftBackend::Direct,
        }
    }
}

impl PhrConfig {
    pub fn with_frame_length(frame_length: usize, alpha: f64) -> Self {
        Self {
            frame_length: Some(frame_length),
            alpha,
            ..Self::default()
        }
    }
}

/// Everything the test computed along the way.
#[derive(Debug, Clone)]
pub struct PhrOutcome {
    pub result: PhrResult,
    pub ks: KsResult,
    pub y: YGrid,
    pub grid: CumulantGrid,
    pub warnings: Vec<String>,
}

pub fn phr_test(series: &TimeSeries, config: &PhrConfig) -> Result<PhrOutcome> {
    if !(config.alpha > 0.0 && config.alpha < 1.0) {
        return Err(Error::InvalidInput(format!("alpha must lie in (0, 1), got {}", config.alpha)));
    }
    let n = series.len();
    let mut warnings = Vec::new();
    if n < MIN_LENGTH {
        warnings.push(format!("series length {n} is below the minimum recommended {MIN_LENGTH}"));
    } else if n < RECOMMENDED_MIN_LENGTH {
        warnings.push(format!(
            "series length {n} is below {RECOMMENDED_MIN_LENGTH}; empirical size may exceed nominal"
        ));
    }
    let frame_length = config
        .frame_length
        .unwrap_or_else(|| FramePlan::default_frame_length(n));

    let grid = CumulantGrid::estimate(series, frame_length, config.backend)?;
    let y = y_statistics(&grid)?;
    let ks = ks_standard_normal(&stack_components(&y))?;
    let plan = grid.plan();
    let result = PhrResult {
        d_statistic: ks.d_statistic,
        p_value: ks.p_value,
        alpha: config.alpha,
        reject: ks.p_value < config.alpha,
        frame_length: plan.frame_length,
        frame_count: plan.frame_count,
        n_pairs: grid.pairs().len(),
        preprocessing: series.preprocessing_log().to_vec(),
    };
    Ok(PhrOutcome {
        result,
        ks,
        y,
        grid,
        warnings,
    })
}
