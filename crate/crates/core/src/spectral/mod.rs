//! Frame-averaged spectrum and second-order cumulant spectrum estimates.
//!
//! The series is cut into P non-overlapping frames of even length L (the
//! trailing partial frame is dropped). Each frame is transformed with a raw,
//! untapered DFT X_p(k), giving
//!
//! ```text
//! S_p(k)      = |X_p(k)|² / L                 k = 0..=L/2
//! K_p(k1, k2) = X_p(k1) · X_p(k2) / L         (k1, k2) in the principal domain
//! ```
//!
//! and both are averaged over frames. Negative k2 resolve through
//! X(−k) = conj(X(k)).

mod dft;
mod domain;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timeseries::TimeSeries;

pub use dft::{dft_frame, DftBackend, FrameDft};
pub use domain::{principal_domain, principal_domain_size, FrequencyPair};

/// How a series of length T is cut into frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramePlan {
    pub frame_length: usize,
    pub frame_count: usize,
    pub total_used: usize,
}

impl FramePlan {
    /// P = ⌊T/L⌋ frames; requires L even, L ≥ 4 and P ≥ 2.
    pub fn new(series_length: usize, frame_length: usize) -> Result<Self> {
        domain::check_frame_length(frame_length)?;
        let frame_count = series_length / frame_length;
        if frame_count < 2 {
            return Err(Error::FrameLength {
                length: frame_length,
                reason: format!("series of length {series_length} yields {frame_count} frame(s), need at least 2"),
            });
        }
        Ok(Self {
            frame_length,
            frame_count,
            total_used: frame_length * frame_count,
        })
    }

    /// Nearest even integer to √T, clamped so that L ≥ 4 and P ≥ 2.
    pub fn default_frame_length(series_length: usize) -> usize {
        let l = 2 * ((series_length as f64).sqrt() / 2.0).round() as usize;
        let max = (series_length / 2) & !1;
        l.min(max).max(4)
    }

    pub fn discarded(&self, series_length: usize) -> usize {
        series_length - self.total_used
    }

    /// Frame p covers indices [pL, pL + L).
    pub fn frames<'a>(&self, values: &'a [f64]) -> impl Iterator<Item = &'a [f64]> + 'a {
        values[..self.total_used].chunks_exact(self.frame_length)
    }
}

/// Splits a series into its frame plan and per-frame views.
pub fn partition_frames(series: &TimeSeries, frame_length: usize) -> Result<(FramePlan, Vec<&[f64]>)> {
    let plan = FramePlan::new(series.len(), frame_length)?;
    let frames = plan.frames(series.values()).collect();
    Ok((plan, frames))
}

/// S_p(k) = |X_p(k)|²/L for k = 0..=L/2.
pub fn frame_spectrum(dft: &[Complex64]) -> Vec<f64> {
    let l = dft.len() as f64;
    dft[..=dft.len() / 2].iter().map(|x| x.norm_sqr() / l).collect()
}

/// K_p(k1, k2) = X_p(k1)·X_p(k2)/L for each pair.
pub fn frame_cumulant(dft: &[Complex64], pairs: &[FrequencyPair]) -> Result<Vec<Complex64>> {
    let l = dft.len();
    if let Some(p) = pairs.iter().find(|p| !p.in_principal_domain(l)) {
        return Err(Error::OutsideDomain {
            k1: p.k1,
            k2: p.k2,
            frame_length: l,
        });
    }
    Ok(cumulant_unchecked(dft, pairs))
}

fn cumulant_unchecked(dft: &[Complex64], pairs: &[FrequencyPair]) -> Vec<Complex64> {
    let l = dft.len() as f64;
    pairs
        .iter()
        .map(|p| {
            let x1 = dft[p.k1 as usize];
            let x2 = if p.k2 >= 0 {
                dft[p.k2 as usize]
            } else {
                dft[(-p.k2) as usize].conj()
            };
            x1 * x2 / l
        })
        .collect()
}

/// Frame-averaged Ŝ(k) and K̂(k1, k2) over the principal domain.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantGrid {
    plan: FramePlan,
    pairs: Vec<FrequencyPair>,
    k_hat: Vec<Complex64>,
    s_hat: Vec<f64>,
}

impl CumulantGrid {
    /// Builds a grid from already-averaged values, validating shapes.
    pub fn from_parts(plan: FramePlan, pairs: Vec<FrequencyPair>, k_hat: Vec<Complex64>, s_hat: Vec<f64>) -> Result<Self> {
        let l = plan.frame_length;
        if k_hat.len() != pairs.len() {
            return Err(Error::InvalidInput(format!(
                "{} cumulant values for {} pairs",
                k_hat.len(),
                pairs.len()
            )));
        }
        if s_hat.len() != l / 2 + 1 {
            return Err(Error::InvalidInput(format!(
                "{} spectrum values, expected {}",
                s_hat.len(),
                l / 2 + 1
            )));
        }
        if let Some(p) = pairs.iter().find(|p| !p.in_principal_domain(l)) {
            return Err(Error::OutsideDomain {
                k1: p.k1,
                k2: p.k2,
                frame_length: l,
            });
        }
        if pairs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("pairs must be strictly sorted by (k1, k2)".into()));
        }
        if s_hat.iter().any(|s| !(*s >= 0.0 && s.is_finite())) || k_hat.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidInput("spectrum estimates must be finite and non-negative".into()));
        }
        Ok(Self {
            plan,
            pairs,
            k_hat,
            s_hat,
        })
    }

    /// Partitions, transforms and averages in one pass. Frames are summed in
    /// index order, so the result does not depend on scheduling.
    pub fn estimate(series: &TimeSeries, frame_length: usize, backend: DftBackend) -> Result<Self> {
        let plan = FramePlan::new(series.len(), frame_length)?;
        let pairs = principal_domain(frame_length)?;
        let dft = FrameDft::new(frame_length, backend);
        let mut s_sum = vec![0.0; frame_length / 2 + 1];
        let mut k_sum = vec![Complex64::new(0.0, 0.0); pairs.len()];
        for frame in plan.frames(series.values()) {
            let x = dft.transform(frame)?;
            for (acc, s) in s_sum.iter_mut().zip(frame_spectrum(&x)) {
                *acc += s;
            }
            for (acc, k) in k_sum.iter_mut().zip(cumulant_unchecked(&x, &pairs)) {
                *acc += k;
            }
        }
        let p = plan.frame_count as f64;
        Ok(Self {
            plan,
            pairs,
            k_hat: k_sum.into_iter().map(|k| k / p).collect(),
            s_hat: s_sum.into_iter().map(|s| s / p).collect(),
        })
    }

    pub fn plan(&self) -> FramePlan {
        self.plan
    }

    pub fn pairs(&self) -> &[FrequencyPair] {
        &self.pairs
    }

    pub fn k_hat(&self) -> &[Complex64] {
        &self.k_hat
    }

    /// Ŝ(k) for k = 0..=L/2; Ŝ(−k) = Ŝ(k).
    pub fn s_hat(&self) -> &[f64] {
        &self.s_hat
    }

    pub fn spectrum_at(&self, k: i64) -> f64 {
        self.s_hat[k.unsigned_abs() as usize]
    }
}

/// Arithmetic mean over frames of per-frame spectra and cumulants.
pub fn average_estimates(
    plan: FramePlan,
    pairs: &[FrequencyPair],
    spectra: &[Vec<f64>],
    cumulants: &[Vec<Complex64>],
) -> Result<CumulantGrid> {
    let half = plan.frame_length / 2 + 1;
    if spectra.len() != plan.frame_count || cumulants.len() != plan.frame_count {
        return Err(Error::InvalidInput(format!(
            "expected {} frames, got {} spectra and {} cumulant sets",
            plan.frame_count,
            spectra.len(),
            cumulants.len()
        )));
    }
    if spectra.iter().any(|s| s.len() != half) || cumulants.iter().any(|c| c.len() != pairs.len()) {
        return Err(Error::InvalidInput("inconsistent frame shapes".into()));
    }
    let p = plan.frame_count as f64;
    let s_hat = (0..half)
        .map(|k| spectra.iter().map(|s| s[k]).sum::<f64>() / p)
        .collect();
    let k_hat = (0..pairs.len())
        .map(|j| cumulants.iter().map(|c| c[j]).sum::<Complex64>() / p)
        .collect();
    CumulantGrid::from_parts(plan, pairs.to_vec(), k_hat, s_hat)
}

#[derive(Serialize, Deserialize)]
struct GridWire {
    #[serde(rename = "L")]
    frame_length: usize,
    #[serde(rename = "P")]
    frame_count: usize,
    pairs: Vec<FrequencyPair>,
    k_hat_re: Vec<f64>,
    k_hat_im: Vec<f64>,
    s_hat: Vec<f64>,
}

impl Serialize for CumulantGrid {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GridWire {
            frame_length: self.plan.frame_length,
            frame_count: self.plan.frame_count,
            pairs: self.pairs.clone(),
            k_hat_re: self.k_hat.iter().map(|k| k.re).collect(),
            k_hat_im: self.k_hat.iter().map(|k| k.im).collect(),
            s_hat: self.s_hat.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CumulantGrid {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = GridWire::deserialize(deserializer)?;
        if w.k_hat_re.len() != w.k_hat_im.len() {
            return Err(D::Error::custom("k_hat_re and k_hat_im differ in length"));
        }
        let plan = FramePlan {
            frame_length: w.frame_length,
            frame_count: w.frame_count,
            total_used: w.frame_length * w.frame_count,
        };
        let k_hat = w
            .k_hat_re
            .into_iter()
            .zip(w.k_hat_im)
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        CumulantGrid::from_parts(plan, w.pairs, k_hat, w.s_hat).map_err(D::Error::custom)
    }
}
