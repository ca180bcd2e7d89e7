use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{CumulantGrid, FrequencyPair};

/// Relative floor for spectrum values used as denominators.
pub const SPECTRUM_FLOOR: f64 = 1e-9;

/// Normalized cumulant spectrum Γ̂ and pivotal quantity Ŷ per frequency pair.
#[derive(Debug, Clone, PartialEq)]
pub struct YGrid {
    pairs: Vec<FrequencyPair>,
    gamma_hat: Vec<Complex64>,
    y: Vec<Complex64>,
}

impl YGrid {
    pub fn pairs(&self) -> &[FrequencyPair] {
        &self.pairs
    }

    pub fn gamma_hat(&self) -> &[Complex64] {
        &self.gamma_hat
    }

    pub fn y(&self) -> &[Complex64] {
        &self.y
    }

    /// Builds Ŷ = √(2P)·Γ̂ from given Γ̂ values.
    pub fn from_gamma(pairs: Vec<FrequencyPair>, gamma_hat: Vec<Complex64>, frame_count: usize) -> Result<Self> {
        if pairs.len() != gamma_hat.len() {
            return Err(Error::InvalidInput(format!(
                "{} Γ values for {} pairs",
                gamma_hat.len(),
                pairs.len()
            )));
        }
        if let Some(index) = gamma_hat.iter().position(|g| !g.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let scale = (2.0 * frame_count as f64).sqrt();
        let y = gamma_hat.iter().map(|g| g * scale).collect();
        Ok(Self { pairs, gamma_hat, y })
    }
}

/// Γ̂(k1, k2) = K̂(k1, k2)/√(Ŝ(|k1|)·Ŝ(|k2|)) and Ŷ = √(2P)·Γ̂.
///
/// Under strict stationarity the real and imaginary parts of Ŷ are
/// asymptotically standard normal. Any Ŝ used as a denominator must be at
/// least `SPECTRUM_FLOOR` times the mean of Ŝ over 0..=L/2.
pub fn y_statistics(grid: &CumulantGrid) -> Result<YGrid> {
    let s = grid.s_hat();
    let mean_s = s.iter().sum::<f64>() / s.len() as f64;
    let floor = SPECTRUM_FLOOR * mean_s;
    let check = |k: i64| {
        let v = grid.spectrum_at(k);
        if v > floor && v > 0.0 {
            Ok(v)
        } else {
            Err(Error::DegenerateSpectrum {
                frequency: k.unsigned_abs() as usize,
            })
        }
    };
    let gamma = grid
        .pairs()
        .iter()
        .zip(grid.k_hat())
        .map(|(p, k)| Ok(k / (check(p.k1)? * check(p.k2)?).sqrt()))
        .collect::<Result<Vec<_>>>()?;
    YGrid::from_gamma(grid.pairs().to_vec(), gamma, grid.plan().frame_count)
}

/// All real parts in pair order, then all imaginary parts.
pub fn stack_components(y: &YGrid) -> Vec<f64> {
    y.y().iter().map(|v| v.re).chain(y.y().iter().map(|v| v.im)).collect()
}
