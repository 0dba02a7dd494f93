//! Mode transfer matrix of a gradient metasurface acting as a bank of
//! identical two-mode beam splitters.
//!
//! Circular polarization and diffraction order are locked together: the
//! left-circular mode at order `j` couples only to the right-circular mode
//! at order `j + 1`. Every such pair forms one 2×2 block
//!
//! ```text
//! √η · [ t      i·r·√ηc ]
//!      [ i·r·√ηc  t     ]
//! ```
//!
//! where `t² = ratio` is the transmitted power fraction, `r² = 1 − ratio`,
//! `η` the diffraction efficiency and `ηc` the polarization conversion
//! efficiency. With `ratio = 1/3` and unit efficiencies this is the 1:2
//! splitter used by the post-selected CZ construction.
//!
//! The mode basis lists, for each order from `order_max` down to
//! `order_min`, `L(j)` then `R(j)`. Modes without a partner inside the
//! order range (`L(order_max)` and `R(order_min)`) are left out unless
//! `edge_modes` is set, in which case they pass through with amplitude
//! `t·√η`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{self, ComplexMatrix, PhotonicState};

/// Transmitted power fraction of the ideal 1:2 splitter.
pub const IDEAL_RATIO: f64 = 1.0 / 3.0;

const UNITARITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    L,
    R,
}

/// One optical mode: a diffraction order carrying one circular polarization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolarizedMode {
    pub order: i32,
    pub pol: Polarization,
}

impl PolarizedMode {
    pub const fn l(order: i32) -> Self {
        Self {
            order,
            pol: Polarization::L,
        }
    }

    pub const fn r(order: i32) -> Self {
        Self {
            order,
            pol: Polarization::R,
        }
    }

    /// The mode sharing a splitter block with this one.
    pub const fn partner(self) -> Self {
        match self.pol {
            Polarization::L => Self::r(self.order + 1),
            Polarization::R => Self::l(self.order - 1),
        }
    }
}

impl fmt::Display for PolarizedMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pol = match self.pol {
            Polarization::L => 'L',
            Polarization::R => 'R',
        };
        if self.order > 0 {
            write!(f, "{pol}(+{})", self.order)
        } else {
            write!(f, "{pol}({})", self.order)
        }
    }
}

/// Ordered list of modes with reverse lookup.
#[derive(Clone, Debug)]
pub struct ModeBasis {
    modes: Vec<PolarizedMode>,
    index: HashMap<PolarizedMode, usize>,
}

impl ModeBasis {
    pub fn new(modes: Vec<PolarizedMode>) -> Result<Self> {
        let mut index = HashMap::with_capacity(modes.len());
        for (i, &m) in modes.iter().enumerate() {
            if index.insert(m, i).is_some() {
                return Err(Error::Config(format!("mode {m} listed twice")));
            }
        }
        Ok(Self { modes, index })
    }

    /// Paired modes over `[order_min, order_max]`, descending by order, `L` before `R`.
    pub fn parallel(order_min: i32, order_max: i32) -> Result<Self> {
        Self::build(order_min, order_max, false)
    }

    fn build(order_min: i32, order_max: i32, edge_modes: bool) -> Result<Self> {
        if order_min >= order_max {
            return Err(Error::Config(format!(
                "order range [{order_min}, {order_max}] is empty"
            )));
        }
        let mut modes = Vec::new();
        for j in (order_min..=order_max).rev() {
            if j < order_max || edge_modes {
                modes.push(PolarizedMode::l(j));
            }
            if j > order_min || edge_modes {
                modes.push(PolarizedMode::r(j));
            }
        }
        Self::new(modes)
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[PolarizedMode] {
        &self.modes
    }

    pub fn index_of(&self, mode: PolarizedMode) -> Option<usize> {
        self.index.get(&mode).copied()
    }

    pub fn require(&self, mode: PolarizedMode) -> Result<usize> {
        self.index_of(mode).ok_or(Error::MissingMode(mode))
    }

    pub fn contains(&self, mode: PolarizedMode) -> bool {
        self.index.contains_key(&mode)
    }
}

impl PartialEq for ModeBasis {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes
    }
}

/// Resolved parameters of the splitter coupling `L(pair_order)` with `R(pair_order + 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitterSpec {
    pub pair_order: i32,
    pub t: f64,
    pub r: f64,
    pub efficiency: f64,
}

impl SplitterSpec {
    pub fn from_ratio(pair_order: i32, ratio: f64, efficiency: f64) -> Result<Self> {
        check_ratio(ratio)?;
        check_efficiency("efficiency", efficiency)?;
        Ok(Self {
            pair_order,
            t: ratio.sqrt(),
            r: (1.0 - ratio).sqrt(),
            efficiency,
        })
    }
}

fn check_ratio(ratio: f64) -> Result<()> {
    if ratio > 0.0 && ratio <= 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("splitting ratio {ratio} outside (0, 1]")))
    }
}

fn check_efficiency(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} {value} outside (0, 1]")))
    }
}

/// Per-splitter override as it appears in a config document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitterOverride {
    pub pair_order: i32,
    pub ratio: f64,
    /// Falls back to the global efficiency when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<f64>,
}

fn ideal_ratio() -> f64 {
    IDEAL_RATIO
}

fn unity() -> f64 {
    1.0
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Declarative description of a metasurface.
///
/// The JSON form uses the keys `order_min`, `order_max`, `ratio`,
/// `efficiency`, `conversion_efficiency` and `overrides`; everything but
/// the order range defaults to the ideal device.
///
/// `efficiency` is applied per splitter. Whether a measured diffraction
/// efficiency refers to one splitter or a whole pass is left to the caller.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetasurfaceConfig {
    pub order_min: i32,
    pub order_max: i32,
    #[serde(rename = "ratio", default = "ideal_ratio")]
    pub default_ratio: f64,
    #[serde(rename = "efficiency", default = "unity")]
    pub global_efficiency: f64,
    #[serde(default = "unity")]
    pub conversion_efficiency: f64,
    #[serde(rename = "overrides", default)]
    pub per_splitter_overrides: Vec<SplitterOverride>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub edge_modes: bool,
}

impl MetasurfaceConfig {
    /// 1:2 splitters with unit efficiencies over the given order range.
    pub fn ideal(order_min: i32, order_max: i32) -> Self {
        Self {
            order_min,
            order_max,
            default_ratio: IDEAL_RATIO,
            global_efficiency: 1.0,
            conversion_efficiency: 1.0,
            per_splitter_overrides: Vec::new(),
            edge_modes: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.order_min >= self.order_max {
            return Err(Error::Config(format!(
                "order_min {} must be below order_max {}",
                self.order_min, self.order_max
            )));
        }
        check_ratio(self.default_ratio)?;
        check_efficiency("efficiency", self.global_efficiency)?;
        if !(self.conversion_efficiency > 0.0 && self.conversion_efficiency <= 1.0) {
            return Err(Error::Config(format!(
                "conversion_efficiency {} outside (0, 1]",
                self.conversion_efficiency
            )));
        }
        let mut seen = HashSet::new();
        for o in &self.per_splitter_overrides {
            if o.pair_order < self.order_min || o.pair_order >= self.order_max {
                return Err(Error::Config(format!(
                    "override for pair L({}) / R({}) lies outside orders [{}, {}]",
                    o.pair_order,
                    o.pair_order + 1,
                    self.order_min,
                    self.order_max
                )));
            }
            if !seen.insert(o.pair_order) {
                return Err(Error::Config(format!(
                    "pair_order {} overridden twice",
                    o.pair_order
                )));
            }
            check_ratio(o.ratio)?;
            if let Some(eff) = o.efficiency {
                check_efficiency("override efficiency", eff)?;
            }
        }
        Ok(())
    }

    pub fn basis(&self) -> Result<ModeBasis> {
        ModeBasis::build(self.order_min, self.order_max, self.edge_modes)
    }

    /// One resolved splitter per pair order, ascending.
    pub fn splitters(&self) -> Result<Vec<SplitterSpec>> {
        self.validate()?;
        (self.order_min..self.order_max)
            .map(|j| match self.per_splitter_overrides.iter().find(|o| o.pair_order == j) {
                Some(o) => SplitterSpec::from_ratio(
                    j,
                    o.ratio,
                    o.efficiency.unwrap_or(self.global_efficiency),
                ),
                None => SplitterSpec::from_ratio(j, self.default_ratio, self.global_efficiency),
            })
            .collect()
    }

    fn is_lossless(&self) -> bool {
        let unit_efficiency = self.global_efficiency == 1.0
            && self
                .per_splitter_overrides
                .iter()
                .all(|o| o.efficiency.is_none_or(|e| e == 1.0));
        let lossy_edges = self.edge_modes && self.default_ratio != 1.0;
        unit_efficiency && self.conversion_efficiency == 1.0 && !lossy_edges
    }
}

/// Transfer matrix over an ordered mode basis, `a_out = U · a_in`.
#[derive(Clone, Debug)]
pub struct ModeUnitary {
    basis: ModeBasis,
    matrix: ComplexMatrix,
    lossless: bool,
}

impl ModeUnitary {
    /// Checks unitarity when `lossless`, otherwise that no singular value exceeds 1.
    pub fn new(basis: ModeBasis, matrix: ComplexMatrix, lossless: bool) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != basis.len() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix over {} modes",
                matrix.rows(),
                matrix.cols(),
                basis.len()
            )));
        }
        if lossless {
            let defect = matrix.unitarity_defect();
            if defect >= UNITARITY_TOL {
                return Err(Error::InvalidState(format!(
                    "matrix flagged lossless has unitarity defect {defect:e}"
                )));
            }
        } else {
            let smax = matrix.max_singular_value();
            if smax > 1.0 + UNITARITY_TOL {
                return Err(Error::InvalidState(format!(
                    "transfer matrix amplifies: singular value {smax}"
                )));
            }
        }
        Ok(Self {
            basis,
            matrix,
            lossless,
        })
    }

    pub fn identity(basis: ModeBasis) -> Self {
        let n = basis.len();
        Self {
            basis,
            matrix: ComplexMatrix::identity(n),
            lossless: true,
        }
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_lossless(&self) -> bool {
        self.lossless
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Matrix element `⟨to| U |from⟩`.
    pub fn coupling(&self, to: PolarizedMode, from: PolarizedMode) -> Result<C64> {
        Ok(self.matrix[(self.basis.require(to)?, self.basis.require(from)?)])
    }

    /// Submatrix over the listed modes, in the given order.
    pub fn restrict(&self, modes: &[PolarizedMode]) -> Result<ComplexMatrix> {
        let idx = modes
            .iter()
            .map(|&m| self.basis.require(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.matrix.select(&idx, &idx))
    }

    pub fn evolve(&self, state: &PhotonicState) -> Result<PhotonicState> {
        fock::evolve(state, &self.matrix)
    }
}

/// Assembles the block-diagonal parallel beam-splitter transfer matrix.
pub fn build_parallel_bs(config: &MetasurfaceConfig) -> Result<ModeUnitary> {
    let splitters = config.splitters()?;
    let basis = config.basis()?;
    let mut m = ComplexMatrix::zeros(basis.len(), basis.len());
    let conv = config.conversion_efficiency.sqrt();

    for s in &splitters {
        let a = basis.require(PolarizedMode::l(s.pair_order))?;
        let b = basis.require(PolarizedMode::r(s.pair_order + 1))?;
        let amp = s.efficiency.sqrt();
        let diag = C64::new(s.t * amp, 0.0);
        let off = C64::new(0.0, s.r * amp * conv);
        m[(a, a)] = diag;
        m[(b, b)] = diag;
        m[(a, b)] = off;
        m[(b, a)] = off;
    }
    if config.edge_modes {
        let pass = C64::new((config.default_ratio * config.global_efficiency).sqrt(), 0.0);
        for edge in [
            PolarizedMode::l(config.order_max),
            PolarizedMode::r(config.order_min),
        ] {
            let i = basis.require(edge)?;
            m[(i, i)] = pass;
        }
    }
    ModeUnitary::new(basis, m, config.is_lossless())
}

/// Scales every splitter's transmitted power fraction by `1 + delta`.
///
/// `r` is recomputed from the new fraction so each block stays unitary.
pub fn perturb_ratio(config: &MetasurfaceConfig, delta: f64) -> Result<MetasurfaceConfig> {
    let scaled = |ratio: f64| {
        let p = ratio * (1.0 + delta);
        if p > 0.0 && p <= 1.0 {
            Ok(p)
        } else {
            Err(Error::Domain(format!(
                "ratio deviation {delta} turns power fraction {ratio} into {p}"
            )))
        }
    };
    let mut out = config.clone();
    out.default_ratio = scaled(config.default_ratio)?;
    for o in &mut out.per_splitter_overrides {
        o.ratio = scaled(o.ratio)?;
    }
    out.validate()?;
    Ok(out)
}

/// Multiplies the polarization conversion efficiency by `eta_conv`.
///
/// The conversion amplitude of every splitter shrinks by `√eta_conv`; the
/// missing power is dropped as loss.
pub fn apply_conversion_deficit(
    config: &MetasurfaceConfig,
    eta_conv: f64,
) -> Result<MetasurfaceConfig> {
    if !(eta_conv > 0.0 && eta_conv <= 1.0) {
        return Err(Error::Domain(format!(
            "conversion efficiency {eta_conv} outside (0, 1]"
        )));
    }
    let mut out = config.clone();
    out.conversion_efficiency *= eta_conv;
    Ok(out)
}

/// Sets one diffraction efficiency for every splitter, discarding per-splitter values.
pub fn with_uniform_efficiency(config: &MetasurfaceConfig, eta: f64) -> Result<MetasurfaceConfig> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!("efficiency {eta} outside (0, 1]")));
    }
    let mut out = config.clone();
    out.global_efficiency = eta;
    for o in &mut out.per_splitter_overrides {
        o.efficiency = None;
    }
    Ok(out)
}
