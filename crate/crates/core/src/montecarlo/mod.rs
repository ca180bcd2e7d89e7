//! Replicated size and power experiments: generate, preprocess, test, count.

mod table;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::{gen_series, replication_seed, DgpSpec};
use crate::error::{Error, Result};
use crate::kpss::{kpss_test, Bandwidth, KpssConfig, SignificanceLevel};
use crate::phr::{phr_test, PhrConfig};
use crate::timeseries::TimeSeries;

pub use table::{table_sweep, Cell, Grouping, SweepTable, ROW_KEYS};

pub const MIN_REPLICATIONS: usize = 100;
pub const DEFAULT_REPLICATIONS: usize = 1000;
/// Largest tolerated share of failed replications per test.
pub const MAX_FAILURE_SHARE: f64 = 0.01;

/// Preprocessing flags, always applied as trim, detrend, demean, prewhiten.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Preprocessing {
    /// Fraction trimmed from each tail; 0 disables.
    #[serde(default)]
    pub itrim: f64,
    #[serde(default)]
    pub idetrend: bool,
    #[serde(default)]
    pub idemean: bool,
    /// Maximum AR order for prewhitening.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prewhiten: Option<usize>,
}

impl Preprocessing {
    pub fn apply(&self, series: TimeSeries) -> Result<TimeSeries> {
        let mut s = series;
        if self.itrim > 0.0 {
            s = s.trim(self.itrim)?;
        }
        if self.idetrend {
            s = s.detrend()?;
        }
        if self.idemean {
            s = s.demean()?;
        }
        if let Some(order) = self.prewhiten {
            s = s.prewhiten(order)?.0;
        }
        Ok(s)
    }
}

fn default_alpha() -> f64 {
    0.05
}

fn default_level() -> SignificanceLevel {
    SignificanceLevel::Five
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test")]
pub enum TestSpec {
    #[serde(rename = "PHR")]
    Phr {
        #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
        frame_length: Option<usize>,
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    #[serde(rename = "KPSS")]
    Kpss {
        #[serde(default = "default_level")]
        alpha: SignificanceLevel,
        #[serde(default)]
        bandwidth: Bandwidth,
    },
}

impl TestSpec {
    pub fn phr(frame_length: Option<usize>, alpha: f64) -> Self {
        TestSpec::Phr { frame_length, alpha }
    }

    pub fn kpss(alpha: SignificanceLevel, bandwidth: Bandwidth) -> Self {
        TestSpec::Kpss { alpha, bandwidth }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TestSpec::Phr { .. } => "PHR",
            TestSpec::Kpss { .. } => "KPSS",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TestSpec::Phr { alpha, .. } if !(alpha > 0.0 && alpha < 1.0) => {
                Err(Error::InvalidInput(format!("alpha must lie in (0, 1), got {alpha}")))
            }
            _ => Ok(()),
        }
    }

    /// Decision on one series, with the frame length used by PHR.
    fn run(&self, series: &TimeSeries) -> Result<(bool, Option<usize>)> {
        match *self {
            TestSpec::Phr { frame_length, alpha } => {
                let config = PhrConfig {
                    frame_length,
                    alpha,
                    ..PhrConfig::default()
                };
                let out = phr_test(series, &config)?;
                Ok((out.result.reject, Some(out.result.frame_length)))
            }
            TestSpec::Kpss { alpha, bandwidth } => {
                let r = kpss_test(series, &KpssConfig { bandwidth, alpha })?;
                Ok((r.reject, None))
            }
        }
    }
}

fn default_replications() -> usize {
    DEFAULT_REPLICATIONS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    /// Design template; its seed is replaced per replication.
    pub dgp: DgpSpec,
    #[serde(default)]
    pub preprocessing: Preprocessing,
    pub tests: Vec<TestSpec>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub base_seed: u64,
}

impl Scenario {
    pub fn new(name: impl Into<String>, dgp: DgpSpec, tests: Vec<TestSpec>) -> Self {
        Self {
            name: name.into(),
            dgp,
            preprocessing: Preprocessing::default(),
            tests,
            replications: DEFAULT_REPLICATIONS,
            base_seed: 0,
        }
    }

    pub fn with_preprocessing(mut self, preprocessing: Preprocessing) -> Self {
        self.preprocessing = preprocessing;
        self
    }

    pub fn with_replications(mut self, replications: usize) -> Self {
        self.replications = replications;
        self
    }

    pub fn with_base_seed(mut self, base_seed: u64) -> Self {
        self.base_seed = base_seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications < MIN_REPLICATIONS {
            return Err(Error::InvalidInput(format!(
                "scenario {:?}: replications must be at least {MIN_REPLICATIONS}, got {}",
                self.name, self.replications
            )));
        }
        if self.tests.is_empty() {
            return Err(Error::InvalidInput(format!("scenario {:?} lists no tests", self.name)));
        }
        if !(0.0..=0.1).contains(&self.preprocessing.itrim) {
            return Err(Error::InvalidInput(format!(
                "itrim must lie in [0, 0.1], got {}",
                self.preprocessing.itrim
            )));
        }
        self.dgp.validate()?;
        self.tests.iter().try_for_each(TestSpec::validate)
    }

    /// Seed of replication `index`.
    pub fn seed(&self, index: usize) -> u64 {
        replication_seed(self.base_seed, index as u64)
    }
}

/// Parses a scenario file: one scenario, an array of them, or an object with
/// `scenarios` and an optional `grouping`.
pub fn parse_scenarios(json: &str) -> Result<(Option<Grouping>, Vec<Scenario>)> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum File {
        Sweep {
            #[serde(default)]
            grouping: Option<Grouping>,
            scenarios: Vec<Scenario>,
        },
        Many(Vec<Scenario>),
        One(Box<Scenario>),
    }
    let (grouping, scenarios) = match serde_json::from_str::<File>(json) {
        Ok(File::Sweep { grouping, scenarios }) => (grouping, scenarios),
        Ok(File::Many(v)) => (None, v),
        Ok(File::One(s)) => (None, vec![*s]),
        // The untagged error hides the cause; retry each shape for a useful message.
        Err(_) => {
            let value: serde_json::Value = serde_json::from_str(json)?;
            match value {
                serde_json::Value::Array(_) => (None, serde_json::from_value(value)?),
                serde_json::Value::Object(ref o) if o.contains_key("scenarios") => {
                    let scenarios = serde_json::from_value(o["scenarios"].clone())?;
                    let grouping = o.get("grouping").cloned().map(serde_json::from_value).transpose()?;
                    (grouping, scenarios)
                }
                _ => (None, vec![serde_json::from_value(value)?]),
            }
        }
    };
    if scenarios.is_empty() {
        return Err(Error::InvalidInput("scenario file contains no scenarios".into()));
    }
    for s in &scenarios {
        s.validate()?;
    }
    Ok((grouping, scenarios))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSummary {
    pub test: TestSpec,
    /// Frame length PHR resolved to.
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub frame_length: Option<usize>,
    pub rejections: usize,
    pub successes: usize,
    pub failures: usize,
    pub rejection_rate: f64,
    pub standard_error: f64,
    pub failure_breakdown: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub scenario: Scenario,
    pub seeds: Vec<u64>,
    pub results: Vec<TestSummary>,
}

impl SimulationReport {
    pub fn result(&self, label: &str) -> Option<&TestSummary> {
        self.results.iter().find(|r| r.test.label() == label)
    }
}

type Outcome = std::result::Result<(bool, Option<usize>), &'static str>;

fn replicate(scenario: &Scenario, index: usize) -> Vec<Outcome> {
    let spec = scenario.dgp.with_seed(scenario.seed(index));
    let series = gen_series(&spec).and_then(|x| scenario.preprocessing.apply(x));
    match series {
        Ok(x) => scenario.tests.iter().map(|t| t.run(&x).map_err(|e| e.kind())).collect(),
        Err(e) => vec![Err(e.kind()); scenario.tests.len()],
    }
}

/// Runs every replication of `scenario` on `workers` threads. Every reported
/// number is independent of `workers`.
pub fn run_scenario(scenario: &Scenario, workers: usize) -> Result<SimulationReport> {
    scenario.validate()?;
    let reps = scenario.replications;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Vec<Outcome>> = pool.install(|| (0..reps).into_par_iter().map(|r| replicate(scenario, r)).collect());

    let mut results = Vec::with_capacity(scenario.tests.len());
    for (j, test) in scenario.tests.iter().enumerate() {
        let mut rejections = 0;
        let mut successes = 0;
        let mut frame_length = None;
        let mut failure_breakdown = BTreeMap::new();
        for o in &outcomes {
            match o[j] {
                Ok((reject, l)) => {
                    successes += 1;
                    rejections += reject as usize;
                    frame_length = frame_length.or(l);
                }
                Err(kind) => *failure_breakdown.entry(kind.to_string()).or_insert(0) += 1,
            }
        }
        let failures = reps - successes;
        if failures as f64 > MAX_FAILURE_SHARE * reps as f64 {
            let breakdown = failure_breakdown
                .iter()
                .map(|(k, v)| format!("{k}: {v}"))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::ReplicationFailures {
                failures,
                total: reps,
                breakdown: format!("{} in scenario {:?}: {breakdown}", test.label(), scenario.name),
            });
        }
        let p = rejections as f64 / successes as f64;
        results.push(TestSummary {
            test: *test,
            frame_length,
            rejections,
            successes,
            failures,
            rejection_rate: p,
            standard_error: (p * (1.0 - p) / successes as f64).sqrt(),
            failure_breakdown,
        });
    }
    Ok(SimulationReport {
        scenario: scenario.clone(),
        seeds: (0..reps).map(|r| scenario.seed(r)).collect(),
        results,
    })
}
