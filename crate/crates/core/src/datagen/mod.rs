//! Seeded generators for the simulation designs: i.i.d. or AR(1) innovations,
//! unit-root mixtures and heteroskedastic level/random-walk processes.

mod rng;
mod variance;

use rand::Rng;
use rand_distr::{Distribution as _, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timeseries::TimeSeries;

pub use rng::{replication_seed, stream_rng, INNOVATION_STREAM, RANDOM_WALK_STREAM};
pub use variance::{variance_profile, VariancePattern, VarianceProfile, VarianceScale, SMOOTH_TIME_SCALE};

/// Discarded warm-up draws of the AR(1) recursion.
pub const BURN_IN: usize = 100;
pub const ALLOWED_DF: [u32; 4] = [3, 5, 10, 15];
pub const MIN_SERIES_LENGTH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    Normal,
    /// Raw Student-t, variance df/(df−2).
    StudentT { df: u32 },
}

impl Distribution {
    fn validate(self) -> Result<()> {
        match self {
            Distribution::StudentT { df } if !ALLOWED_DF.contains(&df) => Err(Error::InvalidInput(format!(
                "degrees of freedom must be one of {ALLOWED_DF:?}, got {df}"
            ))),
            _ => Ok(()),
        }
    }

    fn sampler(self) -> Result<Sampler> {
        self.validate()?;
        Ok(match self {
            Distribution::Normal => Sampler::Normal,
            Distribution::StudentT { df } => Sampler::T(
                StudentT::new(df as f64).map_err(|e| Error::InvalidInput(e.to_string()))?,
            ),
        })
    }
}

enum Sampler {
    Normal,
    T(StudentT<f64>),
}

impl Sampler {
    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            Sampler::Normal => StandardNormal.sample(rng),
            Sampler::T(t) => t.sample(rng),
        }
    }

    fn fill<R: Rng>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnovationSpec {
    pub distribution: Distribution,
    pub rho: f64,
    pub seed: u64,
}

impl InnovationSpec {
    pub fn normal(seed: u64) -> Self {
        Self {
            distribution: Distribution::Normal,
            rho: 0.0,
            seed,
        }
    }

    pub fn student_t(df: u32, seed: u64) -> Result<Self> {
        let s = Self {
            distribution: Distribution::StudentT { df },
            rho: 0.0,
            seed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho.abs() < 1.0) {
            return Err(Error::InvalidInput(format!("rho must satisfy |rho| < 1, got {}", self.rho)));
        }
        self.distribution.validate()
    }
}

/// u(t) = ρ u(t−1) + v(t), t = 1..=T.
pub fn gen_innovations(spec: &InnovationSpec, length: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    if length == 0 {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let sampler = spec.distribution.sampler()?;
    let mut rng = stream_rng(spec.seed, INNOVATION_STREAM);
    if spec.rho == 0.0 {
        return Ok(sampler.fill(&mut rng, length));
    }
    let mut u = 0.0;
    let mut out = Vec::with_capacity(length);
    for i in 0..BURN_IN + length {
        u = spec.rho * u + sampler.draw(&mut rng);
        if i >= BURN_IN {
            out.push(u);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DgpKind {
    /// x(t) = u(t)
    Stationary,
    /// x(t) = λ Σ_{j≤t} w(j) + u(t), w independent of u
    UnitRootMixture { lambda: f64 },
    /// x(t) = σ_t u(t)
    Dgp1 { variance: VarianceProfile },
    /// x(t) = x(t−1) + σ_t u(t), x(0) = 0
    Dgp2 { variance: VarianceProfile },
}

impl DgpKind {
    pub fn name(&self) -> &'static str {
        match self {
            DgpKind::Stationary => "stationary",
            DgpKind::UnitRootMixture { .. } => "unit_root_mixture",
            DgpKind::Dgp1 { .. } => "dgp1",
            DgpKind::Dgp2 { .. } => "dgp2",
        }
    }

    pub fn variance(&self) -> Option<&VarianceProfile> {
        match self {
            DgpKind::Dgp1 { variance } | DgpKind::Dgp2 { variance } => Some(variance),
            _ => None,
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match self {
            DgpKind::UnitRootMixture { lambda } => Some(*lambda),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DgpWire", into = "DgpWire")]
pub struct DgpSpec {
    pub kind: DgpKind,
    pub length: usize,
    pub innovations: InnovationSpec,
}

impl DgpSpec {
    pub fn new(kind: DgpKind, length: usize, innovations: InnovationSpec) -> Result<Self> {
        let s = Self {
            kind,
            length,
            innovations,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.length < MIN_SERIES_LENGTH {
            return Err(Error::TooShort {
                needed: MIN_SERIES_LENGTH,
                got: self.length,
            });
        }
        self.innovations.validate()?;
        match self.kind {
            DgpKind::Stationary => Ok(()),
            DgpKind::UnitRootMixture { lambda } => {
                if lambda >= 0.0 && lambda.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(format!("lambda must be non-negative, got {lambda}")))
                }
            }
            DgpKind::Dgp1 { variance } | DgpKind::Dgp2 { variance } => variance.validate(),
        }
    }

    /// Same design with a different seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.innovations.seed = seed;
        self
    }
}

pub fn gen_series(spec: &DgpSpec) -> Result<TimeSeries> {
    spec.validate()?;
    let n = spec.length;
    let u = gen_innovations(&spec.innovations, n)?;
    let x = match spec.kind {
        DgpKind::Stationary => u,
        DgpKind::UnitRootMixture { lambda } => {
            if lambda == 0.0 {
                u
            } else {
                let sampler = spec.innovations.distribution.sampler()?;
                let mut rng = stream_rng(spec.innovations.seed, RANDOM_WALK_STREAM);
                let mut y = 0.0;
                u.iter()
                    .map(|ut| {
                        y += sampler.draw(&mut rng);
                        lambda * y + ut
                    })
                    .collect()
            }
        }
        DgpKind::Dgp1 { variance } => {
            let s2 = variance.path(n)?;
            u.iter().zip(&s2).map(|(ut, v)| v.sqrt() * ut).collect()
        }
        DgpKind::Dgp2 { variance } => {
            let s2 = variance.path(n)?;
            let mut x = 0.0;
            u.iter()
                .zip(&s2)
                .map(|(ut, v)| {
                    x += v.sqrt() * ut;
                    x
                })
                .collect()
        }
    };
    TimeSeries::new(x)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DgpWire {
    kind: String,
    #[serde(rename = "T")]
    length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(default)]
    rho: f64,
    #[serde(default = "default_distribution")]
    distribution: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    df: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pattern: Option<VariancePattern>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<VarianceScale>,
    #[serde(default)]
    seed: u64,
}

fn default_distribution() -> String {
    "normal".into()
}

impl From<DgpSpec> for DgpWire {
    fn from(s: DgpSpec) -> Self {
        let (distribution, df) = match s.innovations.distribution {
            Distribution::Normal => ("normal".to_string(), None),
            Distribution::StudentT { df } => ("t".to_string(), Some(df)),
        };
        let v = s.kind.variance();
        DgpWire {
            kind: s.kind.name().into(),
            length: s.length,
            lambda: s.kind.lambda(),
            rho: s.innovations.rho,
            distribution,
            df,
            pattern: v.map(|v| v.pattern),
            m: v.map(|v| v.m),
            c: v.map(|v| v.c),
            gamma: v.map(|v| v.gamma),
            sigma0: v.map(|v| v.sigma0).filter(|s| *s != 1.0),
            scale: v.map(|v| v.scale).filter(|s| *s != VarianceScale::Variance),
            seed: s.innovations.seed,
        }
    }
}

impl TryFrom<DgpWire> for DgpSpec {
    type Error = Error;

    fn try_from(w: DgpWire) -> Result<Self> {
        let distribution = match w.distribution.as_str() {
            "normal" => Distribution::Normal,
            "t" => Distribution::StudentT {
                df: w
                    .df
                    .ok_or_else(|| Error::InvalidInput("distribution \"t\" requires df".into()))?,
            },
            other => return Err(Error::InvalidInput(format!("unknown distribution {other:?}"))),
        };
        let variance = || -> Result<VarianceProfile> {
            let pattern = w
                .pattern
                .ok_or_else(|| Error::InvalidInput(format!("kind {:?} requires a variance pattern", w.kind)))?;
            let mut p = VarianceProfile::constant();
            p.pattern = pattern;
            if pattern != VariancePattern::Constant {
                p.m = w.m.ok_or_else(|| Error::InvalidInput("variance pattern requires m".into()))?;
                p.c = w.c.ok_or_else(|| Error::InvalidInput("variance pattern requires c".into()))?;
            }
            p.gamma = w.gamma.unwrap_or(10.0);
            p.sigma0 = w.sigma0.unwrap_or(1.0);
            p.scale = w.scale.unwrap_or_default();
            Ok(p)
        };
        let kind = match w.kind.as_str() {
            "stationary" => DgpKind::Stationary,
            "unit_root_mixture" => DgpKind::UnitRootMixture {
                lambda: w
                    .lambda
                    .ok_or_else(|| Error::InvalidInput("unit_root_mixture requires lambda".into()))?,
            },
            "dgp1" => DgpKind::Dgp1 { variance: variance()? },
            "dgp2" => DgpKind::Dgp2 { variance: variance()? },
            other => return Err(Error::InvalidInput(format!("unknown DGP kind {other:?}"))),
        };
        DgpSpec::new(
            kind,
            w.length,
            InnovationSpec {
                distribution,
                rho: w.rho,
                seed: w.seed,
            },
        )
    }
}
