use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Transform implementation used for per-frame DFTs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DftBackend {
    /// O(L²) transform over a precomputed twiddle table.
    #[default]
    Direct,
    /// Mixed-radix FFT.
    Fast,
}

/// A reusable length-L forward transform X(k) = Σ_t x(t)·exp(−i2πkt/L).
pub enum FrameDft {
    Direct { twiddles: Vec<Complex64> },
    Fast { plan: Arc<dyn Fft<f64>> },
}

impl FrameDft {
    pub fn new(frame_length: usize, backend: DftBackend) -> Self {
        match backend {
            DftBackend::Direct => {
                // Reduced (k·t) mod L indexing keeps every twiddle an exact table lookup.
                let twiddles = (0..frame_length)
                    .map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / frame_length as f64))
                    .collect();
                FrameDft::Direct { twiddles }
            }
            DftBackend::Fast => FrameDft::Fast {
                plan: FftPlanner::new().plan_fft_forward(frame_length),
            },
        }
    }

    pub fn len(&self) -> usize {
        match self {
            FrameDft::Direct { twiddles } => twiddles.len(),
            FrameDft::Fast { plan } => plan.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn transform(&self, frame: &[f64]) -> Result<Vec<Complex64>> {
        let l = self.len();
        if frame.len() != l {
            return Err(Error::InvalidInput(format!(
                "frame has {} values, transform expects {l}",
                frame.len()
            )));
        }
        Ok(match self {
            FrameDft::Direct { twiddles } => (0..l)
                .map(|k| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    let mut idx = 0usize;
                    for &x in frame {
                        acc += twiddles[idx] * x;
                        idx += k;
                        if idx >= l {
                            idx -= l;
                        }
                    }
                    acc
                })
                .collect(),
            FrameDft::Fast { plan } => {
                let mut buf: Vec<Complex64> = frame.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                plan.process(&mut buf);
                buf
            }
        })
    }
}

/// Direct DFT of one frame of length L.
pub fn dft_frame(frame: &[f64], frame_length: usize) -> Result<Vec<Complex64>> {
    FrameDft::new(frame_length, DftBackend::Direct).transform(frame)
}
