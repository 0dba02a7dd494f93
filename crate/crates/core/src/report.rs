//! Deterministic JSON and CSV renderings of analysis results.
//!
//! Every float is rounded to 12 significant digits before it is written.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::analysis::{FidelityReport, GhzReport, IndependenceReport, PostSelectedOperator, TruthTable};
use crate::sweep::{SweepRow, SweepSpec};

const SIG_DIGITS: usize = 12;

/// Rounds to 12 significant digits; `-0.0` becomes `0.0`.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{:.*e}", SIG_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Fixed notation with 12 significant digits for magnitudes in `[1e-5, 1e12)`,
/// scientific otherwise; exact zero prints as `0`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific notation has an exponent");
    if (-5..12).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, round_sig(x))
    } else {
        sci
    }
}

fn pair(z: C64) -> [f64; 2] {
    [round_sig(z.re), round_sig(z.im)]
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct TruthRowDoc<'a> {
    input: &'a str,
    output: &'a str,
    phase_re: f64,
    phase_im: f64,
    success_probability: f64,
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct TruthTableDoc<'a> {
    encoding: &'a str,
    basis: &'a str,
    qubit_order: String,
    rows: Vec<TruthRowDoc<'a>>,
}

pub fn truth_table_json(table: &TruthTable, encoding: &str) -> String {
    to_json(&TruthTableDoc {
        encoding,
        basis: table.basis.name(),
        qubit_order: table.qubit_order(),
        rows: table
            .rows
            .iter()
            .map(|r| TruthRowDoc {
                input: &r.input,
                output: &r.output,
                phase_re: round_sig(r.phase.re),
                phase_im: round_sig(r.phase.im),
                success_probability: round_sig(r.success_probability),
                amplitudes: r.output_state.amplitudes().iter().copied().map(pair).collect(),
            })
            .collect(),
    })
}

pub fn truth_table_csv(table: &TruthTable) -> String {
    let mut out = String::from("input,output,phase_re,phase_im,success_probability\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.input,
            r.output,
            fmt_num(r.phase.re),
            fmt_num(r.phase.im),
            fmt_num(r.success_probability)
        ));
    }
    out
}

#[derive(Serialize)]
struct FidelityDoc {
    process_fidelity: f64,
    mean_success_probability: f64,
    success_probabilities: Vec<f64>,
}

impl From<&FidelityReport> for FidelityDoc {
    fn from(r: &FidelityReport) -> Self {
        Self {
            process_fidelity: round_sig(r.process_fidelity),
            mean_success_probability: round_sig(r.mean_success_probability),
            success_probabilities: r.success_probabilities.iter().copied().map(round_sig).collect(),
        }
    }
}

pub fn fidelity_csv(report: &FidelityReport) -> String {
    let mut out = String::from("input,success_probability\n");
    for (k, p) in report.success_probabilities.iter().enumerate() {
        out.push_str(&format!("{k},{}\n", fmt_num(*p)));
    }
    out.push_str(&format!(
        "mean,{}\nprocess_fidelity,{}\n",
        fmt_num(report.mean_success_probability),
        fmt_num(report.process_fidelity)
    ));
    out
}

#[derive(Serialize)]
struct OperatorDoc<'a> {
    encoding: &'a str,
    qubit_order: String,
    dim: usize,
    matrix: Vec<Vec<[f64; 2]>>,
    fidelity: FidelityDoc,
}

pub fn operator_json(op: &PostSelectedOperator, fidelity: &FidelityReport, encoding: &str) -> String {
    let d = op.dim();
    to_json(&OperatorDoc {
        encoding,
        qubit_order: op.qubit_labels.concat(),
        dim: d,
        matrix: (0..d)
            .map(|i| op.matrix.row(i).iter().copied().map(pair).collect())
            .collect(),
        fidelity: fidelity.into(),
    })
}

pub fn operator_csv(op: &PostSelectedOperator) -> String {
    let mut out = String::from("row,col,re,im\n");
    let d = op.dim();
    for i in 0..d {
        for j in 0..d {
            let z = op.matrix[(i, j)];
            out.push_str(&format!("{i},{j},{},{}\n", fmt_num(z.re), fmt_num(z.im)));
        }
    }
    out
}

#[derive(Serialize)]
struct GhzDoc {
    qubit_order: &'static str,
    fidelity: f64,
    success_probability: f64,
    state: Vec<[f64; 2]>,
}

pub fn ghz_json(report: &GhzReport) -> String {
    to_json(&GhzDoc {
        qubit_order: "CST",
        fidelity: round_sig(report.fidelity),
        success_probability: round_sig(report.success_probability),
        state: report.state.amplitudes().iter().copied().map(pair).collect(),
    })
}

pub fn ghz_csv(report: &GhzReport) -> String {
    format!(
        "fidelity,success_probability\n{},{}\n",
        fmt_num(report.fidelity),
        fmt_num(report.success_probability)
    )
}

#[derive(Serialize)]
struct SweepRowDoc {
    value: f64,
    process_fidelity: f64,
    mean_success_probability: f64,
}

#[derive(Serialize)]
struct SweepDoc {
    scenario: &'static str,
    parameter: &'static str,
    min: f64,
    max: f64,
    steps: usize,
    rows: Vec<SweepRowDoc>,
}

pub fn sweep_json(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    to_json(&SweepDoc {
        scenario: spec.scenario.name(),
        parameter: spec.parameter.name(),
        min: round_sig(spec.min),
        max: round_sig(spec.max),
        steps: spec.steps,
        rows: rows
            .iter()
            .map(|r| SweepRowDoc {
                value: round_sig(r.value),
                process_fidelity: round_sig(r.process_fidelity),
                mean_success_probability: round_sig(r.mean_success_probability),
            })
            .collect(),
    })
}

pub fn sweep_csv(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let mut out = String::from("parameter,value,process_fidelity,mean_success_probability\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            spec.parameter.name(),
            fmt_num(r.value),
            fmt_num(r.process_fidelity),
            fmt_num(r.mean_success_probability)
        ));
    }
    out
}

#[derive(Serialize)]
struct IndependenceDoc {
    gates: Vec<[i32; 2]>,
    qubit_order: String,
    max_deviation: f64,
    joint_success_probability: f64,
    gate_success_probabilities: Vec<f64>,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn independence_json(report: &IndependenceReport, gates: &[[i32; 2]]) -> String {
    to_json(&IndependenceDoc {
        gates: gates.to_vec(),
        qubit_order: report.joint.qubit_labels.join(","),
        max_deviation: round_sig(report.max_deviation),
        joint_success_probability: round_sig(report.joint_success_probability),
        gate_success_probabilities: [&report.gate_a, &report.gate_b]
            .iter()
            .map(|g| round_sig(mean(&g.success_probabilities())))
            .collect(),
    })
}

pub fn independence_csv(report: &IndependenceReport) -> String {
    format!(
        "max_deviation,joint_success_probability,gate_a_success_probability,gate_b_success_probability\n{},{},{},{}\n",
        fmt_num(report.max_deviation),
        fmt_num(report.joint_success_probability),
        fmt_num(mean(&report.gate_a.success_probabilities())),
        fmt_num(mean(&report.gate_b.success_probabilities())),
    )
}
