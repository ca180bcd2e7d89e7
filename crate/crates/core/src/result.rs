use serde::{Deserialize, Serialize};

use crate::timeseries::Transform;

/// Decision of the cumulant-spectrum stationarity test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhrResult {
    #[serde(rename = "D")]
    pub d_statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
    #[serde(rename = "L")]
    pub frame_length: usize,
    #[serde(rename = "P")]
    pub frame_count: usize,
    pub n_pairs: usize,
    pub preprocessing: Vec<Transform>,
}

/// Decision of the KPSS level-stationarity test. The p-value is only known to
/// lie in `p_bracket`, between adjacent tabulated levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpssResult {
    pub statistic: f64,
    pub p_bracket: [f64; 2],
    pub alpha: f64,
    pub reject: bool,
    pub bandwidth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test")]
pub enum TestResult {
    #[serde(rename = "PHR")]
    Phr(PhrResult),
    #[serde(rename = "KPSS")]
    Kpss(KpssResult),
}

impl TestResult {
    pub fn test_name(&self) -> &'static str {
        match self {
            TestResult::Phr(_) => "PHR",
            TestResult::Kpss(_) => "KPSS",
        }
    }

    pub fn statistic(&self) -> f64 {
        match self {
            TestResult::Phr(r) => r.d_statistic,
            TestResult::Kpss(r) => r.statistic,
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            TestResult::Phr(r) => r.alpha,
            TestResult::Kpss(r) => r.alpha,
        }
    }

    pub fn reject(&self) -> bool {
        match self {
            TestResult::Phr(r) => r.reject,
            TestResult::Kpss(r) => r.reject,
        }
    }
}

impl From<PhrResult> for TestResult {
    fn from(r: PhrResult) -> Self {
        TestResult::Phr(r)
    }
}

impl From<KpssResult> for TestResult {
    fn from(r: KpssResult) -> Self {
        TestResult::Kpss(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phr_json_layout() {
        let r = TestResult::Phr(PhrResult {
            d_statistic: 0.125,
            p_value: 0.3,
            alpha: 0.05,
            reject: false,
            frame_length: 10,
            frame_count: 50,
            n_pairs: 29,
            preprocessing: vec![Transform::Trim { fraction: 0.01 }, Transform::Detrend],
        });
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"test":"PHR","D":0.125,"p_value":0.3,"alpha":0.05,"reject":false,"L":10,"P":50,"n_pairs":29,"preprocessing":["trim:0.01","detrend"]}"#
        );
        let back: TestResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn kpss_json_layout() {
        let r = TestResult::Kpss(KpssResult {
            statistic: 0.5,
            p_bracket: [0.025, 0.05],
            alpha: 0.05,
            reject: true,
            bandwidth: 7,
        });
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"test":"KPSS","statistic":0.5,"p_bracket":[0.025,0.05],"alpha":0.05,"reject":true,"bandwidth":7}"#
        );
        assert_eq!(serde_json::from_str::<TestResult>(&s).unwrap(), r);
    }
}
