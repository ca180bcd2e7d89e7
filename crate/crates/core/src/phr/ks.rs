use serde::{Deserialize, Serialize};
use libm::erfc;

use crate::error::{Error, Result};

const MIN_KS_SAMPLE: usize = 8;
const SERIES_TOL: f64 = 1e-12;
/// Below this λ the theta-function form converges faster than the alternating series.
const SMALL_LAMBDA: f64 = 1.18;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov survival function Q(λ) = 2 Σ_{j≥1} (−1)^{j−1} exp(−2j²λ²), with Q(0) = 1.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    let q = if lambda < SMALL_LAMBDA {
        // Equivalent form: 1 − (√(2π)/λ) Σ_{j≥1} exp(−(2j−1)²π²/(8λ²)).
        let a = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for j in 1.. {
            let odd = (2 * j - 1) as f64;
            let term = (-odd * odd * a).exp();
            sum += term;
            if term < SERIES_TOL {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * sum
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for j in 1.. {
            let jf = j as f64;
            let term = (-2.0 * jf * jf * lambda * lambda).exp();
            sum += sign * term;
            sign = -sign;
            if term < SERIES_TOL {
                break;
            }
        }
        2.0 * sum
    };
    q.clamp(0.0, 1.0)
}

/// One-sample two-sided KS test result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub d_statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Asymptotic p-value for statistic D on n points, λ = (√n + 0.12 + 0.11/√n)·D.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let rn = (n as f64).sqrt();
    kolmogorov_q((rn + 0.12 + 0.11 / rn) * d)
}

/// Two-sided D statistic of already-transformed values u_i in [0, 1] against U(0, 1).
pub fn ks_uniform_statistic(mut u: Vec<f64>) -> f64 {
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    u.iter()
        .enumerate()
        .map(|(i, &v)| {
            let i = i as f64;
            ((i + 1.0) / n - v).max(v - i / n)
        })
        .fold(0.0, f64::max)
}

/// Tests `values` against the standard normal via the probability-integral transform.
pub fn ks_standard_normal(values: &[f64]) -> Result<KsResult> {
    if values.len() < MIN_KS_SAMPLE {
        return Err(Error::TooShort {
            needed: MIN_KS_SAMPLE,
            got: values.len(),
        });
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let d = ks_uniform_statistic(values.iter().map(|&v| normal_cdf(v)).collect());
    Ok(KsResult {
        d_statistic: d,
        p_value: ks_p_value(d, values.len()),
        n: values.len(),
    })
}
