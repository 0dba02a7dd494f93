//! Imperfection sweeps: one parameter varied over an even grid, each point
//! scored by fidelity and success probability.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{cz, extract_operator, ghz_prepare, ideal_cascaded_unitary, process_fidelity};
use crate::encoding::EncodingKind;
use crate::error::{Error, Result};
use crate::metasurface::{
    apply_conversion_deficit, build_parallel_bs, perturb_ratio, with_uniform_efficiency,
    MetasurfaceConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Relative deviation δ of every splitter's transmitted power fraction.
    RatioDelta,
    /// Uniform per-splitter diffraction efficiency η.
    Efficiency,
    /// Polarization conversion efficiency.
    ConversionEfficiency,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::RatioDelta => "ratio_delta",
            Self::Efficiency => "efficiency",
            Self::ConversionEfficiency => "conversion_efficiency",
        }
    }

    fn check_domain(self, value: f64) -> Result<()> {
        let ok = value.is_finite()
            && match self {
                Self::RatioDelta => value > -1.0,
                Self::Efficiency | Self::ConversionEfficiency => value > 0.0 && value <= 1.0,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("{} = {value} is unphysical", self.name())))
        }
    }

    pub fn apply(self, base: &MetasurfaceConfig, value: f64) -> Result<MetasurfaceConfig> {
        match self {
            Self::RatioDelta => perturb_ratio(base, value),
            Self::Efficiency => with_uniform_efficiency(base, value),
            Self::ConversionEfficiency => apply_conversion_deficit(base, value),
        }
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ratio_delta" => Ok(Self::RatioDelta),
            "efficiency" => Ok(Self::Efficiency),
            "conversion_efficiency" => Ok(Self::ConversionEfficiency),
            other => Err(Error::Domain(format!("unknown sweep parameter {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    SingleCz,
    Cascaded,
    Ghz,
    PathCz,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Self::SingleCz => "single_cz",
            Self::Cascaded => "cascaded",
            Self::Ghz => "ghz",
            Self::PathCz => "path_cz",
        }
    }

    pub fn encoding_kind(self) -> EncodingKind {
        match self {
            Self::SingleCz => EncodingKind::Polarization,
            Self::Cascaded | Self::Ghz => EncodingKind::Cascaded,
            Self::PathCz => EncodingKind::Path,
        }
    }

    pub fn default_config(self) -> MetasurfaceConfig {
        self.encoding_kind().default_config()
    }

    /// `(fidelity, mean success probability)` for one device.
    ///
    /// Gate scenarios report process fidelity against the ideal logical
    /// unitary; `ghz` reports the state fidelity against the target.
    pub fn evaluate(self, config: &MetasurfaceConfig) -> Result<(f64, f64)> {
        let u = build_parallel_bs(config)?;
        let enc = self.encoding_kind().encoding();
        match self {
            Self::Ghz => {
                let r = ghz_prepare(&u, &enc)?;
                Ok((r.fidelity, r.success_probability))
            }
            Self::SingleCz | Self::PathCz | Self::Cascaded => {
                let ideal = if self == Self::Cascaded {
                    ideal_cascaded_unitary()
                } else {
                    cz(2, 0, 1)
                };
                let r = process_fidelity(&extract_operator(&u, &enc)?, &ideal)?;
                Ok((r.process_fidelity, r.mean_success_probability))
            }
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single_cz" => Ok(Self::SingleCz),
            "cascaded" => Ok(Self::Cascaded),
            "ghz" => Ok(Self::Ghz),
            "path_cz" => Ok(Self::PathCz),
            other => Err(Error::Domain(format!("unknown scenario {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub scenario: Scenario,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Domain(format!("steps = {} (need at least 2)", self.steps)));
        }
        if self.min >= self.max || self.min.is_nan() || self.max.is_nan() {
            return Err(Error::Domain(format!(
                "range [{}, {}] is empty",
                self.min, self.max
            )));
        }
        self.parameter.check_domain(self.min)?;
        self.parameter.check_domain(self.max)
    }

    /// Evenly spaced grid from `min` to `max`, both included.
    pub fn values(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * (i as f64 / last as f64)
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub process_fidelity: f64,
    pub mean_success_probability: f64,
}

/// Evaluates every grid point; rows come back in grid order.
///
/// Both range endpoints are applied to `base` before any evaluation, so a
/// range that leaves the physical domain for this device fails as a
/// [`Error::Domain`] without partial results.
pub fn run_sweep(spec: &SweepSpec, base: &MetasurfaceConfig) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    base.validate()?;
    for end in [spec.min, spec.max] {
        spec.parameter.apply(base, end).map_err(|e| match e {
            Error::Domain(msg) => Error::Domain(msg),
            other => Error::Domain(format!("{} = {end}: {other}", spec.parameter.name())),
        })?;
    }
    spec.values()
        .into_par_iter()
        .map(|value| {
            let annotate = |e: Error| Error::SweepPoint {
                parameter: spec.parameter.name(),
                value,
                source: Box::new(e),
            };
            let config = spec.parameter.apply(base, value).map_err(annotate)?;
            let (fidelity, prob) = spec.scenario.evaluate(&config).map_err(annotate)?;
            Ok(SweepRow {
                value,
                process_fidelity: fidelity,
                mean_success_probability: prob,
            })
        })
        .collect()
}
