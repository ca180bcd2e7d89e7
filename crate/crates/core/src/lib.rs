//! Testing time series for strict stationarity through the frame-averaged
//! second-order cumulant spectrum, with a KPSS comparator, seeded data
//! generators and a Monte Carlo harness for size and power studies.

pub mod datagen;
pub mod error;
pub mod kpss;
pub mod montecarlo;
pub mod phr;
pub mod result;
pub mod spectral;
pub mod timeseries;

pub use error::{Error, Result};
pub use kpss::{kpss_test, Bandwidth, KpssConfig, SignificanceLevel};
pub use phr::{phr_test, PhrConfig, PhrOutcome};
pub use result::{KpssResult, PhrResult, TestResult};
pub use timeseries::{DescriptiveStats, TimeSeries, Transform};
pub use montecarlo::{run_scenario, table_sweep, Scenario, SimulationReport, TestSpec};
