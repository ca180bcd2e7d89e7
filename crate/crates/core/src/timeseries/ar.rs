use serde::{Deserialize, Serialize};

use super::{mean, TimeSeries, Transform};
use crate::error::{Error, Result};

/// Autoregressive model x(t) = Σ φ_j x(t−j) + e(t) fitted by Yule–Walker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArModel {
    pub order: usize,
    pub coefficients: Vec<f64>,
    pub residual_variance: f64,
}

impl ArModel {
    /// Schur–Cohn stability check: step the coefficients down to reflection
    /// coefficients and require each to lie strictly inside the unit disc.
    pub fn is_causal(&self) -> bool {
        let mut a = self.coefficients.clone();
        while let Some(&k) = a.last() {
            if k.abs() >= 1.0 {
                return false;
            }
            let m = a.len();
            let denom = 1.0 - k * k;
            a = (0..m - 1).map(|j| (a[j] + k * a[m - 2 - j]) / denom).collect();
        }
        true
    }
}

/// Sample autocovariances γ̂(0..=max_lag) of the demeaned series, 1/T denominator.
pub(crate) fn autocovariances(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let mu = mean(x);
    let y: Vec<f64> = x.iter().map(|v| v - mu).collect();
    (0..=max_lag)
        .map(|lag| {
            y[lag..]
                .iter()
                .zip(&y[..n - lag])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / n as f64
        })
        .collect()
}

/// Levinson–Durbin recursion. Returns the coefficient vector and innovation
/// variance for every order 0..=max_order.
fn levinson(gamma: &[f64], max_order: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    if !(gamma[0] > 0.0) {
        return Err(Error::NonInvertible { order: 0 });
    }
    let mut fits = Vec::with_capacity(max_order + 1);
    let mut phi: Vec<f64> = Vec::new();
    let mut v = gamma[0];
    fits.push((phi.clone(), v));
    for m in 1..=max_order {
        let acc: f64 = (1..m).map(|j| phi[j - 1] * gamma[m - j]).sum();
        let k = (gamma[m] - acc) / v;
        if !(k.abs() < 1.0) {
            return Err(Error::NonInvertible { order: m });
        }
        let mut next = vec![0.0; m];
        for j in 1..m {
            next[j - 1] = phi[j - 1] - k * phi[m - j - 1];
        }
        next[m - 1] = k;
        phi = next;
        v *= 1.0 - k * k;
        if !(v > 0.0) {
            return Err(Error::NonInvertible { order: m });
        }
        fits.push((phi.clone(), v));
    }
    Ok(fits)
}

pub const DEFAULT_MAX_ORDER: usize = 10;

impl TimeSeries {
    /// Fits AR(p) for p = 0..=max_order by Yule–Walker, picks p by AIC, and
    /// returns the filtered residuals (length T − p) with the model.
    ///
    /// Order 0 passes the input through unchanged. For p > 0 the residuals are
    /// computed on the mean-adjusted series.
    pub fn prewhiten(&self, max_order: usize) -> Result<(TimeSeries, ArModel)> {
        self.require_len(10 * max_order.max(1))?;
        let x = self.values();
        let n = x.len() as f64;
        let gamma = autocovariances(x, max_order);
        let fits = levinson(&gamma, max_order)?;

        let aic = |p: usize, v: f64| n * v.ln() + 2.0 * p as f64;
        let (order, (coefficients, residual_variance)) = fits
            .into_iter()
            .enumerate()
            .min_by(|(p, (_, v)), (q, (_, w))| aic(*p, *v).total_cmp(&aic(*q, *w)).then(p.cmp(q)))
            .expect("order 0 always present");

        let model = ArModel {
            order,
            coefficients,
            residual_variance,
        };
        let filtered = if order == 0 {
            x.to_vec()
        } else {
            let mu = mean(x);
            (order..x.len())
                .map(|t| {
                    let pred: f64 = model
                        .coefficients
                        .iter()
                        .enumerate()
                        .map(|(j, phi)| phi * (x[t - 1 - j] - mu))
                        .sum();
                    (x[t] - mu) - pred
                })
                .collect()
        };
        let out = self.derive(filtered, Transform::Prewhiten { order })?;
        Ok((out, model))
    }
}
