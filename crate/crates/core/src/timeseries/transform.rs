use super::{centered, mean, TimeSeries, Transform};
use crate::error::{Error, Result};

const MAX_TRIM_FRACTION: f64 = 0.1;
const MIN_ROLLING_STD: f64 = 1e-12;

impl TimeSeries {
    /// First difference of the natural logarithm of a price series.
    pub fn log_returns(&self) -> Result<TimeSeries> {
        self.require_len(2)?;
        if let Some(i) = self.values.iter().position(|&p| p <= 0.0) {
            return Err(Error::InvalidInput(format!(
                "price at index {i} is not strictly positive ({})",
                self.values[i]
            )));
        }
        let returns = self
            .values
            .windows(2)
            .map(|w| w[1].ln() - w[0].ln())
            .collect();
        self.derive(returns, Transform::LogReturns)
    }

    /// Deletes the ⌊fraction·T⌋ smallest and ⌊fraction·T⌋ largest observations.
    ///
    /// Among equal extreme values the earliest index goes first. Surviving
    /// observations keep their original relative order.
    pub fn trim(&self, fraction: f64) -> Result<TimeSeries> {
        if !(0.0..=MAX_TRIM_FRACTION).contains(&fraction) {
            return Err(Error::InvalidInput(format!(
                "trim fraction must lie in [0, {MAX_TRIM_FRACTION}], got {fraction}"
            )));
        }
        let n = self.len();
        let k = (fraction * n as f64).floor() as usize;
        if n < 2 * k + 2 {
            return Err(Error::TooShort {
                needed: 2 * k + 2,
                got: n,
            });
        }

        let mut order: Vec<usize> = (0..n).collect();
        // Stable sort keeps equal values in index order.
        order.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        let mut drop = vec![false; n];
        for &i in &order[..k] {
            drop[i] = true;
        }
        // Largest values: walk from the top, earliest index first within a tie run.
        let mut removed = 0;
        let mut hi = n;
        while removed < k {
            let v = self.values[order[hi - 1]];
            let mut lo = hi - 1;
            while lo > 0 && self.values[order[lo - 1]] == v {
                lo -= 1;
            }
            for &i in &order[lo..hi] {
                if removed == k {
                    break;
                }
                if !drop[i] {
                    drop[i] = true;
                    removed += 1;
                }
            }
            hi = lo;
        }

        let kept = self
            .values
            .iter()
            .zip(&drop)
            .filter(|(_, &d)| !d)
            .map(|(&v, _)| v)
            .collect();
        self.derive(kept, Transform::Trim { fraction })
    }

    pub fn demean(&self) -> Result<TimeSeries> {
        self.derive(centered(&self.values), Transform::Demean)
    }

    /// Removes the ordinary least-squares line a + b·t, t = 0..T−1.
    pub fn detrend(&self) -> Result<TimeSeries> {
        self.require_len(2)?;
        let residuals = ols_line_residuals(&self.values);
        self.derive(residuals, Transform::Detrend)
    }

    /// Divides each observation by the standard deviation of the trailing
    /// `window` observations ending at it. The first `window − 1` outputs use
    /// the first full window.
    pub fn rolling_variance_standardize(&self, window: usize) -> Result<TimeSeries> {
        if window < 2 {
            return Err(Error::InvalidInput(format!(
                "rolling window must be at least 2, got {window}"
            )));
        }
        self.require_len(window)?;
        let x = &self.values;
        let mut out = Vec::with_capacity(x.len());
        let mut first = None;
        for end in window - 1..x.len() {
            let w = &x[end + 1 - window..=end];
            let s = sample_std(w);
            if !(s >= MIN_ROLLING_STD) {
                return Err(Error::DegenerateWindow { index: end });
            }
            if first.is_none() {
                first = Some(s);
                out.extend(x[..window - 1].iter().map(|v| v / s));
            }
            out.push(x[end] / s);
        }
        self.derive(out, Transform::RollingStandardize { window })
    }
}

pub(crate) fn ols_line_residuals(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let t_bar = (n - 1.0) / 2.0;
    let x_bar = mean(x);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, &v) in x.iter().enumerate() {
        let dt = t as f64 - t_bar;
        sxy += dt * (v - x_bar);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    x.iter()
        .enumerate()
        .map(|(t, &v)| (v - x_bar) - slope * (t as f64 - t_bar))
        .collect()
}

pub(crate) fn sample_std(w: &[f64]) -> f64 {
    let m = mean(w);
    let ss: f64 = w.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (w.len() as f64 - 1.0)).sqrt()
}
