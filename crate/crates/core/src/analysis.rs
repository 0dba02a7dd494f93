//! Logical action of a metasurface after post-selection.

use std::collections::HashSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::encoding::{self, inject, post_select, LogicalState, QubitEncoding, SingleQubitState};
use crate::error::{Error, Result};
use crate::fock::ComplexMatrix;
use crate::metasurface::ModeUnitary;

/// Logical basis used to label truth-table rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruthBasis {
    Standard,
    /// Qubits `S` and `T` in `|±⟩`, every other qubit in `|0⟩, |1⟩`.
    HadamardSt,
}

impl TruthBasis {
    pub fn name(self) -> &'static str {
        match self {
            Self::Standard => "standard",
            Self::HadamardSt => "hadamard_st",
        }
    }

    fn rotated(self, enc: &QubitEncoding) -> Vec<bool> {
        enc.labels()
            .iter()
            .map(|l| self == Self::HadamardSt && matches!(*l, "S" | "T"))
            .collect()
    }
}

impl FromStr for TruthBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Self::Standard),
            "hadamard_st" => Ok(Self::HadamardSt),
            other => Err(Error::Encoding(format!("unknown basis {other:?}"))),
        }
    }
}

fn basis_label(index: usize, rotated: &[bool]) -> String {
    let n = rotated.len();
    rotated
        .iter()
        .enumerate()
        .map(|(q, &h)| {
            let bit = (index >> (n - 1 - q)) & 1 == 1;
            match (h, bit) {
                (false, false) => '0',
                (false, true) => '1',
                (true, false) => '+',
                (true, true) => '-',
            }
        })
        .collect()
}

fn hadamard() -> [[C64; 2]; 2] {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruthRow {
    pub input: String,
    /// Post-selected output, expressed in the table's basis.
    pub output_state: LogicalState,
    /// Label of the largest-modulus output amplitude (first wins on ties).
    pub output: String,
    /// Unit-modulus phase of that amplitude; `1` if the output vanishes.
    pub phase: C64,
    pub success_probability: f64,
}

impl TruthRow {
    pub fn dominant_amplitude(&self) -> C64 {
        let idx = self.dominant_index();
        self.output_state.amplitudes()[idx]
    }

    fn dominant_index(&self) -> usize {
        dominant(self.output_state.amplitudes())
    }
}

fn dominant(amps: &[C64]) -> usize {
    let mut best = 0;
    for (i, a) in amps.iter().enumerate() {
        if a.norm() > amps[best].norm() {
            best = i;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruthTable {
    pub qubit_labels: Vec<String>,
    pub basis: TruthBasis,
    pub rows: Vec<TruthRow>,
}

impl TruthTable {
    /// Qubit order of every label, e.g. `"CST"`.
    pub fn qubit_order(&self) -> String {
        self.qubit_labels.concat()
    }
}

/// Evolves every logical basis input and records its post-selected output.
pub fn truth_table(u: &ModeUnitary, enc: &QubitEncoding, basis: TruthBasis) -> Result<TruthTable> {
    let enc = enc.on_basis(u.basis())?;
    let n = enc.n_qubits();
    let rotated = basis.rotated(&enc);
    let h = hadamard();

    let rows = (0..1usize << n)
        .map(|idx| {
            let inputs: Vec<SingleQubitState> = rotated
                .iter()
                .enumerate()
                .map(|(q, &rot)| {
                    let bit = (idx >> (n - 1 - q)) & 1 == 1;
                    match (rot, bit) {
                        (false, b) => SingleQubitState::bit(b),
                        (true, false) => SingleQubitState::plus(),
                        (true, true) => SingleQubitState::minus(),
                    }
                })
                .collect();
            let out = u.evolve(&inject(&inputs, &enc)?)?;
            let (mut logical, p) = post_select(&out, &enc)?;
            for (q, &rot) in rotated.iter().enumerate() {
                if rot {
                    logical = logical.apply_single(q, &h);
                }
            }
            let best = dominant(logical.amplitudes());
            let amp = logical.amplitudes()[best];
            let phase = if amp.norm() > 0.0 {
                amp / amp.norm()
            } else {
                C64::new(1.0, 0.0)
            };
            Ok(TruthRow {
                input: basis_label(idx, &rotated),
                output: basis_label(best, &rotated),
                output_state: logical,
                phase,
                success_probability: p,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(TruthTable {
        qubit_labels: enc.labels().iter().map(|s| s.to_string()).collect(),
        basis,
        rows,
    })
}

/// Post-selected logical operator: column `k` holds the unnormalized
/// output amplitudes for computational input `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PostSelectedOperator {
    pub qubit_labels: Vec<String>,
    pub matrix: ComplexMatrix,
}

impl PostSelectedOperator {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Squared column norms.
    pub fn success_probabilities(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|k| self.matrix.column(k).iter().map(C64::norm_sqr).sum())
            .collect()
    }
}

pub fn extract_operator(u: &ModeUnitary, enc: &QubitEncoding) -> Result<PostSelectedOperator> {
    Ok(PostSelectedOperator {
        qubit_labels: enc.labels().iter().map(|s| s.to_string()).collect(),
        matrix: encoding::logical_columns(u, enc)?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FidelityReport {
    pub process_fidelity: f64,
    pub mean_success_probability: f64,
    pub success_probabilities: Vec<f64>,
}

/// `|Tr(U†A)|² / (d · Tr(A†A))`, which is 1 exactly when `A ∝ U`.
pub fn process_fidelity(a: &PostSelectedOperator, ideal: &ComplexMatrix) -> Result<FidelityReport> {
    let d = a.dim();
    if ideal.rows() != d || ideal.cols() != d || !a.matrix.is_square() {
        return Err(Error::Dimension(format!(
            "operator of dimension {d} against a {}x{} ideal",
            ideal.rows(),
            ideal.cols()
        )));
    }
    let weight = a.matrix.frobenius_norm_sqr();
    if weight == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let overlap = (&ideal.adjoint() * &a.matrix).trace();
    let probs = a.success_probabilities();
    Ok(FidelityReport {
        process_fidelity: overlap.norm_sqr() / (d as f64 * weight),
        mean_success_probability: probs.iter().sum::<f64>() / d as f64,
        success_probabilities: probs,
    })
}

/// Diagonal CZ between two qubits of an `n`-qubit register.
pub fn cz(n_qubits: usize, a: usize, b: usize) -> ComplexMatrix {
    let (sa, sb) = (n_qubits - 1 - a, n_qubits - 1 - b);
    let diag: Vec<C64> = (0..1usize << n_qubits)
        .map(|i| {
            if (i >> sa) & 1 == 1 && (i >> sb) & 1 == 1 {
                C64::new(-1.0, 0.0)
            } else {
                C64::new(1.0, 0.0)
            }
        })
        .collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// Bit flip on one qubit of an `n`-qubit register.
pub fn pauli_x(n_qubits: usize, q: usize) -> ComplexMatrix {
    let shift = n_qubits - 1 - q;
    let dim = 1usize << n_qubits;
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        if i == j ^ (1 << shift) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `CZ(C,T) · X_C · CZ(C,S) · X_C` on `|C S T⟩`.
pub fn ideal_cascaded_unitary() -> ComplexMatrix {
    let (c, s, t) = (0, 1, 2);
    let x_c = pauli_x(3, c);
    let flipped = &(&x_c * &cz(3, c, s)) * &x_c;
    &cz(3, c, t) * &flipped
}

#[derive(Clone, Debug, PartialEq)]
pub struct GhzReport {
    /// Normalized post-selected state on `|C S T⟩`.
    pub state: LogicalState,
    pub success_probability: f64,
    pub fidelity: f64,
}

/// `(|1⟩_C|+⟩_S|−⟩_T + |0⟩_C|−⟩_S|+⟩_T)/√2` on `|C S T⟩`.
pub fn ghz_target() -> LogicalState {
    use SingleQubitState as Q;
    let a = LogicalState::product(&[Q::one(), Q::plus(), Q::minus()]);
    let b = LogicalState::product(&[Q::zero(), Q::minus(), Q::plus()]);
    let amps = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x + y) * FRAC_1_SQRT_2)
        .collect();
    LogicalState::new(3, amps).expect("target is normalized")
}

/// Sends `|+⟩` into all three cascaded qubits and compares the post-selected
/// output against [`ghz_target`].
pub fn ghz_prepare(u: &ModeUnitary, enc: &QubitEncoding) -> Result<GhzReport> {
    if enc.labels() != ["C", "S", "T"] {
        return Err(Error::Encoding(format!(
            "GHZ preparation needs qubits C, S, T; got {:?}",
            enc.labels()
        )));
    }
    let enc = enc.on_basis(u.basis())?;
    let plus = SingleQubitState::plus();
    let out = u.evolve(&inject(&[plus, plus, plus], &enc)?)?;
    let (logical, p) = post_select(&out, &enc)?;
    let fidelity = logical.fidelity(&ghz_target());
    let state = logical.normalized().unwrap_or_else(|| LogicalState::zeros(3));
    Ok(GhzReport {
        state,
        success_probability: p,
        fidelity,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndependenceReport {
    pub joint: PostSelectedOperator,
    pub gate_a: PostSelectedOperator,
    pub gate_b: PostSelectedOperator,
    /// `max |A_joint − A_a ⊗ A_b|`.
    pub max_deviation: f64,
    /// Mean over joint inputs of the four-photon success probability.
    pub joint_success_probability: f64,
}

/// Fails with [`Error::OverlappingEncodings`] if any mode, auxiliary ones
/// included, is assigned by both encodings.
pub fn check_disjoint(enc_a: &QubitEncoding, enc_b: &QubitEncoding) -> Result<()> {
    let modes_a: HashSet<_> = enc_a.modes().into_iter().collect();
    match enc_b.modes().into_iter().find(|m| modes_a.contains(m)) {
        Some(shared) => Err(Error::OverlappingEncodings(shared)),
        None => Ok(()),
    }
}

/// Checks that two gates on disjoint modes act as a tensor product.
pub fn independent_gates_check(
    u: &ModeUnitary,
    enc_a: &QubitEncoding,
    enc_b: &QubitEncoding,
) -> Result<IndependenceReport> {
    check_disjoint(enc_a, enc_b)?;
    let joint_enc = enc_a.join(enc_b, u.basis())?;
    let joint = extract_operator(u, &joint_enc)?;
    let gate_a = extract_operator(u, enc_a)?;
    let gate_b = extract_operator(u, enc_b)?;
    let max_deviation = joint
        .matrix
        .max_abs_diff(&gate_a.matrix.kron(&gate_b.matrix));
    let probs = joint.success_probabilities();
    let joint_success_probability = probs.iter().sum::<f64>() / probs.len() as f64;
    Ok(IndependenceReport {
        joint,
        gate_a,
        gate_b,
        max_deviation,
        joint_success_probability,
    })
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} basis, qubits {}", self.basis.name(), self.qubit_order())?;
        for r in &self.rows {
            writeln!(
                f,
                "  {} -> {} phase {:+.3}{:+.3}i  p = {:.6}",
                r.input, r.output, r.phase.re, r.phase.im, r.success_probability
            )?;
        }
        Ok(())
    }
}
