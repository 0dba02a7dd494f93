//! Logical qubits carried by single photons in pairs of metasurface modes.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{ComplexMatrix, FockState, PhotonicState};
use crate::metasurface::{MetasurfaceConfig, ModeBasis, PolarizedMode};

const NORM_TOL: f64 = 1e-12;

/// A logical qubit: one photon in either its `zero` or its `one` mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitRegister {
    pub label: String,
    pub zero: PolarizedMode,
    pub one: PolarizedMode,
}

impl QubitRegister {
    pub fn new(label: impl Into<String>, zero: PolarizedMode, one: PolarizedMode) -> Self {
        Self {
            label: label.into(),
            zero,
            one,
        }
    }
}

/// Assignment of logical qubits and auxiliary modes to a mode basis.
///
/// The first qubit is the most significant bit of a logical basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitEncoding {
    qubits: Vec<QubitRegister>,
    auxiliary: Vec<PolarizedMode>,
    basis: ModeBasis,
}

impl QubitEncoding {
    pub fn new(
        qubits: Vec<QubitRegister>,
        auxiliary: Vec<PolarizedMode>,
        basis: ModeBasis,
    ) -> Result<Self> {
        if qubits.is_empty() {
            return Err(Error::Encoding("no qubits".into()));
        }
        let mut seen = HashSet::new();
        let assigned = qubits
            .iter()
            .flat_map(|q| [q.zero, q.one])
            .chain(auxiliary.iter().copied());
        for m in assigned {
            if !seen.insert(m) {
                return Err(Error::Encoding(format!("mode {m} assigned twice")));
            }
            basis.require(m)?;
        }
        let mut labels = HashSet::new();
        if let Some(q) = qubits.iter().find(|q| !labels.insert(q.label.as_str())) {
            return Err(Error::Encoding(format!("qubit label {} used twice", q.label)));
        }
        Ok(Self {
            qubits,
            auxiliary,
            basis,
        })
    }

    pub fn qubits(&self) -> &[QubitRegister] {
        &self.qubits
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.qubits.iter().map(|q| q.label.as_str()).collect()
    }

    pub fn auxiliary(&self) -> &[PolarizedMode] {
        &self.auxiliary
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    /// Every mode this encoding assigns, qubit modes first.
    pub fn modes(&self) -> Vec<PolarizedMode> {
        self.qubits
            .iter()
            .flat_map(|q| [q.zero, q.one])
            .chain(self.auxiliary.iter().copied())
            .collect()
    }

    /// The same assignment re-expressed over another basis containing all of its modes.
    pub fn on_basis(&self, basis: &ModeBasis) -> Result<Self> {
        if *basis == self.basis {
            return Ok(self.clone());
        }
        Self::new(self.qubits.clone(), self.auxiliary.clone(), basis.clone())
    }

    /// Qubits of `self` followed by those of `other`, over `basis`.
    pub fn join(&self, other: &Self, basis: &ModeBasis) -> Result<Self> {
        let mut qubits = self.qubits.clone();
        qubits.extend(other.qubits.iter().cloned());
        let mut aux = self.auxiliary.clone();
        aux.extend(other.auxiliary.iter().copied());
        Self::new(qubits, aux, basis.clone())
    }

    /// Fock state of a computational basis index.
    pub fn basis_fock(&self, index: usize) -> Result<FockState> {
        let n = self.n_qubits();
        if index >= 1 << n {
            return Err(Error::Dimension(format!("basis index {index} for {n} qubits")));
        }
        let modes = self
            .qubits
            .iter()
            .enumerate()
            .map(|(q, reg)| {
                let bit = (index >> (n - 1 - q)) & 1;
                self.basis.require(if bit == 1 { reg.one } else { reg.zero })
            })
            .collect::<Result<Vec<_>>>()?;
        FockState::from_modes(self.basis.len(), &modes)
    }
}

fn register(label: &str, zero: PolarizedMode, one: PolarizedMode) -> QubitRegister {
    QubitRegister::new(label, zero, one)
}

/// Adjacent-path CZ with control on order `c` and target on `c + 1`:
/// `|0⟩_C = R(c)`, `|1⟩_C = L(c)`, `|0⟩_T = L(c+1)`, `|1⟩_T = R(c+1)`,
/// auxiliaries `R(c+2)` and `L(c−1)`.
pub fn cz_on_paths(control_order: i32, labels: (&str, &str)) -> Result<QubitEncoding> {
    let c = control_order;
    QubitEncoding::new(
        vec![
            register(labels.0, PolarizedMode::r(c), PolarizedMode::l(c)),
            register(labels.1, PolarizedMode::l(c + 1), PolarizedMode::r(c + 1)),
        ],
        vec![PolarizedMode::r(c + 2), PolarizedMode::l(c - 1)],
        ModeBasis::parallel(c - 1, c + 2)?,
    )
}

/// Polarization-encoded CZ on paths 0 (control) and +1 (target) over orders `[−1, +2]`.
pub fn polarization_cz_encoding() -> QubitEncoding {
    cz_on_paths(0, ("C", "T")).expect("fixed encoding is valid")
}

/// Three qubits `C, S, T` over orders `[−2, +2]`; `S` sits on path −1 with
/// `|0⟩_S = R(−1)`, `|1⟩_S = L(−1)`.
pub fn cascaded_encoding() -> QubitEncoding {
    QubitEncoding::new(
        vec![
            register("C", PolarizedMode::r(0), PolarizedMode::l(0)),
            register("S", PolarizedMode::r(-1), PolarizedMode::l(-1)),
            register("T", PolarizedMode::l(1), PolarizedMode::r(1)),
        ],
        vec![PolarizedMode::r(2), PolarizedMode::l(-2)],
        ModeBasis::parallel(-2, 2).expect("fixed range"),
    )
    .expect("fixed encoding is valid")
}

/// Dual-rail CZ: every qubit spans two paths, polarization locked to path.
///
/// `|0⟩_C = R(−1)`, `|1⟩_C = L(0)`, `|0⟩_T = L(+2)`, `|1⟩_T = R(+1)`,
/// auxiliaries `R(+3)` and `L(−2)`, over orders `[−2, +3]`. The four modes
/// `L(−1)`, `R(0)`, `L(+1)`, `R(+2)` stay empty.
pub fn path_cz_encoding() -> QubitEncoding {
    QubitEncoding::new(
        vec![
            register("C", PolarizedMode::r(-1), PolarizedMode::l(0)),
            register("T", PolarizedMode::l(2), PolarizedMode::r(1)),
        ],
        vec![PolarizedMode::r(3), PolarizedMode::l(-2)],
        ModeBasis::parallel(-2, 3).expect("fixed range"),
    )
    .expect("fixed encoding is valid")
}

/// Named encodings selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingKind {
    Polarization,
    Cascaded,
    Path,
}

impl EncodingKind {
    pub fn encoding(self) -> QubitEncoding {
        match self {
            Self::Polarization => polarization_cz_encoding(),
            Self::Cascaded => cascaded_encoding(),
            Self::Path => path_cz_encoding(),
        }
    }

    /// Ideal device sized to the encoding's order range.
    pub fn default_config(self) -> MetasurfaceConfig {
        match self {
            Self::Polarization => MetasurfaceConfig::ideal(-1, 2),
            Self::Cascaded => MetasurfaceConfig::ideal(-2, 2),
            Self::Path => MetasurfaceConfig::ideal(-2, 3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Polarization => "polarization",
            Self::Cascaded => "cascaded",
            Self::Path => "path",
        }
    }
}

impl FromStr for EncodingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polarization" => Ok(Self::Polarization),
            "cascaded" => Ok(Self::Cascaded),
            "path" => Ok(Self::Path),
            other => Err(Error::Encoding(format!("unknown encoding {other:?}"))),
        }
    }
}

/// `α|0⟩ + β|1⟩`, normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitState {
    alpha: C64,
    beta: C64,
}

impl SingleQubitState {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "single-qubit state has squared norm {norm}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn zero() -> Self {
        Self {
            alpha: C64::new(1.0, 0.0),
            beta: C64::new(0.0, 0.0),
        }
    }

    pub fn one() -> Self {
        Self {
            alpha: C64::new(0.0, 0.0),
            beta: C64::new(1.0, 0.0),
        }
    }

    pub fn plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            alpha: C64::new(s, 0.0),
            beta: C64::new(s, 0.0),
        }
    }

    pub fn minus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            alpha: C64::new(s, 0.0),
            beta: C64::new(-s, 0.0),
        }
    }

    pub fn bit(b: bool) -> Self {
        if b {
            Self::one()
        } else {
            Self::zero()
        }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        [self.alpha, self.beta]
    }
}

/// Unnormalized amplitude vector over `2ⁿ` logical basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl LogicalState {
    pub fn new(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        let state = Self {
            n_qubits,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if norm > 1.0 + NORM_TOL {
            return Err(Error::InvalidState(format!("logical state norm {norm} exceeds 1")));
        }
        Ok(state)
    }

    pub fn zeros(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            amplitudes: vec![C64::new(0.0, 0.0); 1 << n_qubits],
        }
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn product(qubits: &[SingleQubitState]) -> Self {
        let mut amplitudes = vec![C64::new(1.0, 0.0)];
        for q in qubits {
            amplitudes = amplitudes
                .iter()
                .flat_map(|a| [a * q.alpha, a * q.beta])
                .collect();
        }
        Self {
            n_qubits: qubits.len(),
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(C64::norm_sqr).sum()
    }

    /// Unit-norm copy; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let norm = self.norm_sqr().sqrt();
        (norm > 0.0).then(|| Self {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a / norm).collect(),
        })
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨a|b⟩|² / (‖a‖² ‖b‖²)`; zero if either is the zero vector.
    pub fn fidelity(&self, other: &Self) -> f64 {
        let denom = self.norm_sqr() * other.norm_sqr();
        if denom == 0.0 {
            0.0
        } else {
            self.inner(other).norm_sqr() / denom
        }
    }

    /// Applies a 2×2 operator to one qubit.
    pub fn apply_single(&self, qubit: usize, op: &[[C64; 2]; 2]) -> Self {
        let shift = self.n_qubits - 1 - qubit;
        let mut out = self.amplitudes.clone();
        for i in 0..out.len() {
            if (i >> shift) & 1 == 0 {
                let j = i | (1 << shift);
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[j]);
                out[i] = op[0][0] * a0 + op[0][1] * a1;
                out[j] = op[1][0] * a0 + op[1][1] * a1;
            }
        }
        Self {
            n_qubits: self.n_qubits,
            amplitudes: out,
        }
    }

    /// Single-qubit reduced density matrix of the normalized state.
    pub fn reduced_density(&self, qubit: usize) -> [[C64; 2]; 2] {
        let shift = self.n_qubits - 1 - qubit;
        let norm = self.norm_sqr();
        let mut rho = [[C64::new(0.0, 0.0); 2]; 2];
        if norm == 0.0 {
            return rho;
        }
        for i in 0..self.amplitudes.len() {
            for j in 0..self.amplitudes.len() {
                // Other qubits must agree to survive the partial trace.
                if (i ^ j) & !(1 << shift) != 0 {
                    continue;
                }
                let (bi, bj) = ((i >> shift) & 1, (j >> shift) & 1);
                rho[bi][bj] += self.amplitudes[i] * self.amplitudes[j].conj() / norm;
            }
        }
        rho
    }

    /// `Tr ρ²` of one qubit's reduced state.
    pub fn reduced_purity(&self, qubit: usize) -> f64 {
        let rho = self.reduced_density(qubit);
        (rho[0][0] * rho[0][0] + 2.0 * rho[0][1] * rho[1][0] + rho[1][1] * rho[1][1]).re
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.n_qubits != other.n_qubits {
            return f64::INFINITY;
        }
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for LogicalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if a.norm() < 1e-15 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{:0width$b}⟩", a.re, a.im, i, width = self.n_qubits)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Places one photon per qubit register, superposed according to each qubit's state.
pub fn inject(qubits: &[SingleQubitState], enc: &QubitEncoding) -> Result<PhotonicState> {
    if qubits.len() != enc.n_qubits() {
        return Err(Error::Dimension(format!(
            "{} single-qubit states for {} qubits",
            qubits.len(),
            enc.n_qubits()
        )));
    }
    for q in qubits {
        SingleQubitState::new(q.alpha, q.beta)?;
    }
    let product = LogicalState::product(qubits);
    let terms = product
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(idx, &a)| Ok((enc.basis_fock(idx)?, a)))
        .collect::<Result<Vec<_>>>()?;
    PhotonicState::from_terms(enc.basis.len(), enc.n_qubits(), terms)
}

/// Keeps terms with exactly one photon in every qubit register.
///
/// Since every term carries as many photons as there are qubits, this also
/// rules out photons in auxiliary or unused modes. Returns the retained
/// (unnormalized) logical amplitudes and their squared norm.
pub fn post_select(state: &PhotonicState, enc: &QubitEncoding) -> Result<(LogicalState, f64)> {
    let n = enc.n_qubits();
    if state.photon_number() != n {
        return Err(Error::Dimension(format!(
            "{}-photon state post-selected on {n} qubits",
            state.photon_number()
        )));
    }
    if state.n_modes() != enc.basis.len() {
        return Err(Error::Dimension(format!(
            "state over {} modes, encoding over {}",
            state.n_modes(),
            enc.basis.len()
        )));
    }
    let registers = enc
        .qubits
        .iter()
        .map(|q| Ok((enc.basis.require(q.zero)?, enc.basis.require(q.one)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n];
    'terms: for (fock, &amp) in state.iter() {
        let mut index = 0;
        for &(zero, one) in &registers {
            let (n0, n1) = (fock.occupation(zero), fock.occupation(one));
            if n0 + n1 != 1 {
                continue 'terms;
            }
            index = (index << 1) | n1 as usize;
        }
        amplitudes[index] += amp;
    }
    let logical = LogicalState::new(n, amplitudes)?;
    let p = logical.norm_sqr();
    Ok((logical, p))
}

/// Logical operator of a mode transformation: column `k` is the post-selected
/// output of basis input `k`.
pub(crate) fn logical_columns(
    u: &crate::metasurface::ModeUnitary,
    enc: &QubitEncoding,
) -> Result<ComplexMatrix> {
    let enc = enc.on_basis(u.basis())?;
    let d = 1 << enc.n_qubits();
    let mut m = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        let input = PhotonicState::from_fock(enc.basis_fock(k)?);
        let (out, _) = post_select(&u.evolve(&input)?, &enc)?;
        for (i, &a) in out.amplitudes().iter().enumerate() {
            m[(i, k)] = a;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use PolarizedMode as M;

    #[test]
    fn polarization_table() {
        let e = polarization_cz_encoding();
        assert_eq!(e.labels(), vec!["C", "T"]);
        assert_eq!(e.qubits()[0].one, M::l(0));
        assert_eq!(e.qubits()[0].zero, M::r(0));
        assert_eq!(e.qubits()[1].one, M::r(1));
        assert_eq!(e.qubits()[1].zero, M::l(1));
        assert_eq!(e.auxiliary(), &[M::r(2), M::l(-1)]);
        assert_eq!(e.basis().len(), 6);
    }

    #[test]
    fn cascaded_extends_single_gate() {
        let e = cascaded_encoding();
        let single = polarization_cz_encoding();
        assert_eq!(e.labels(), vec!["C", "S", "T"]);
        assert_eq!(e.qubits()[1].one, M::l(-1));
        assert_eq!(e.qubits()[1].zero, M::r(-1));
        assert_eq!(e.auxiliary(), &[M::r(2), M::l(-2)]);
        assert_eq!(e.qubits()[0], single.qubits()[0]);
        assert_eq!(e.qubits()[2], single.qubits()[1]);
        assert_eq!(e.basis().len(), 8);
    }

    #[test]
    fn path_qubits_are_dual_rail() {
        let e = path_cz_encoding();
        let c = &e.qubits()[0];
        let t = &e.qubits()[1];
        let mut c_orders = [c.zero.order, c.one.order];
        c_orders.sort();
        let mut t_orders = [t.zero.order, t.one.order];
        t_orders.sort();
        assert_eq!(c_orders, [-1, 0]);
        assert_eq!(t_orders, [1, 2]);
        let all: HashSet<_> = e.modes().into_iter().collect();
        assert_eq!(all.len(), 6);
    }

    #[test]
    fn shared_mode_rejected() {
        let basis = ModeBasis::parallel(-1, 2).unwrap();
        let r = QubitEncoding::new(
            vec![register("A", M::r(0), M::l(0)), register("B", M::l(0), M::r(1))],
            vec![],
            basis,
        );
        assert!(matches!(r, Err(Error::Encoding(_))));
    }

    #[test]
    fn mode_outside_basis_rejected() {
        let basis = ModeBasis::parallel(-1, 2).unwrap();
        let r = QubitEncoding::new(vec![register("A", M::r(0), M::l(3))], vec![], basis);
        assert!(matches!(r, Err(Error::MissingMode(_))));
    }

    #[test]
    fn inject_basis_and_superposition() {
        let e = polarization_cz_encoding();
        let s = inject(&[SingleQubitState::one(), SingleQubitState::one()], &e).unwrap();
        assert_eq!(s.len(), 1);
        let b = e.basis();
        let expected = FockState::from_modes(
            6,
            &[b.index_of(M::l(0)).unwrap(), b.index_of(M::r(1)).unwrap()],
        )
        .unwrap();
        assert_eq!(s.amplitude(&expected), C64::new(1.0, 0.0));

        let s = inject(&[SingleQubitState::zero(), SingleQubitState::zero()], &e).unwrap();
        let expected = FockState::from_modes(
            6,
            &[b.index_of(M::r(0)).unwrap(), b.index_of(M::l(1)).unwrap()],
        )
        .unwrap();
        assert_eq!(s.amplitude(&expected), C64::new(1.0, 0.0));

        let plus = SingleQubitState::plus();
        let s = inject(&[plus, plus, plus], &cascaded_encoding()).unwrap();
        assert_eq!(s.len(), 8);
        let want = 1.0 / (2.0 * 2f64.sqrt());
        assert!(s.iter().all(|(_, a)| (a.re - want).abs() < 1e-15 && a.im == 0.0));
    }

    #[test]
    fn inject_rejects_bad_inputs() {
        let e = polarization_cz_encoding();
        assert!(SingleQubitState::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0)).is_err());
        assert!(inject(&[SingleQubitState::one()], &e).is_err());
    }

    #[test]
    fn post_select_discards_auxiliary_and_bunched() {
        let e = polarization_cz_encoding();
        let b = e.basis();
        let aux = FockState::from_modes(
            6,
            &[b.index_of(M::r(2)).unwrap(), b.index_of(M::l(-1)).unwrap()],
        )
        .unwrap();
        let (l, p) = post_select(&PhotonicState::from_fock(aux), &e).unwrap();
        assert_eq!(p, 0.0);
        assert!(l.amplitudes().iter().all(|a| a.norm() == 0.0));

        let bunched = FockState::from_modes(6, &[b.index_of(M::l(0)).unwrap(); 2]).unwrap();
        let (_, p) = post_select(&PhotonicState::from_fock(bunched), &e).unwrap();
        assert_eq!(p, 0.0);
    }

    #[test]
    fn post_select_photon_count_checked() {
        let e = polarization_cz_encoding();
        let one = PhotonicState::from_fock(FockState::from_modes(6, &[0]).unwrap());
        assert!(post_select(&one, &e).is_err());
    }

    #[test]
    fn encoding_names() {
        for kind in [EncodingKind::Polarization, EncodingKind::Cascaded, EncodingKind::Path] {
            assert_eq!(kind.name().parse::<EncodingKind>().unwrap(), kind);
            let cfg = kind.default_config();
            let basis = cfg.basis().unwrap();
            assert_eq!(&basis, kind.encoding().basis());
        }
        assert!("bogus".parse::<EncodingKind>().is_err());
    }

    #[test]
    fn reduced_purity_bounds() {
        let prod = LogicalState::product(&[SingleQubitState::plus(), SingleQubitState::zero()]);
        assert!((prod.reduced_purity(0) - 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = LogicalState::new(
            2,
            vec![C64::new(s, 0.0), C64::default(), C64::default(), C64::new(s, 0.0)],
        )
        .unwrap();
        assert!((bell.reduced_purity(0) - 0.5).abs() < 1e-15);
        assert!((bell.reduced_purity(1) - 0.5).abs() < 1e-15);
    }
}
