mod common;

use common::c;
use metacz::analysis::{
    cz, extract_operator, ghz_prepare, ghz_target, ideal_cascaded_unitary,
    independent_gates_check, process_fidelity, truth_table, PostSelectedOperator, TruthBasis,
};
use metacz::encoding::{
    cascaded_encoding, cz_on_paths, inject, path_cz_encoding, polarization_cz_encoding,
    post_select, SingleQubitState,
};
use metacz::fock::{ComplexMatrix, FockState, C64};
use metacz::metasurface::{build_parallel_bs, perturb_ratio, MetasurfaceConfig, ModeUnitary};
use metacz::Error;

const TOL: f64 = 1e-12;

fn single() -> ModeUnitary {
    build_parallel_bs(&MetasurfaceConfig::ideal(-1, 2)).unwrap()
}

fn cascade() -> ModeUnitary {
    build_parallel_bs(&MetasurfaceConfig::ideal(-2, 2)).unwrap()
}

#[test]
fn eleven_input_keeps_one_third_with_sign_flip() {
    let enc = polarization_cz_encoding();
    let input = inject(&[SingleQubitState::one(), SingleQubitState::one()], &enc).unwrap();
    let out = single().evolve(&input).unwrap();
    let (logical, p) = post_select(&out, &enc).unwrap();
    assert!((logical.amplitudes()[3] - c(-1.0 / 3.0, 0.0)).norm() < TOL);
    assert!((p - 1.0 / 9.0).abs() < TOL);
}

#[test]
fn zero_one_input_passes_with_one_third() {
    let enc = polarization_cz_encoding();
    let input = inject(&[SingleQubitState::zero(), SingleQubitState::one()], &enc).unwrap();
    let (logical, p) = post_select(&single().evolve(&input).unwrap(), &enc).unwrap();
    assert!((logical.amplitudes()[1] - c(1.0 / 3.0, 0.0)).norm() < TOL);
    assert!((p - 1.0 / 9.0).abs() < TOL);
}

#[test]
fn single_gate_truth_table() {
    let table = truth_table(&single(), &polarization_cz_encoding(), TruthBasis::Standard).unwrap();
    assert_eq!(table.qubit_order(), "CT");
    let signs = [1.0, 1.0, 1.0, -1.0];
    for (row, sign) in table.rows.iter().zip(signs) {
        assert_eq!(row.input, row.output);
        assert!((row.phase - c(sign, 0.0)).norm() < TOL, "{}: {}", row.input, row.phase);
        assert!((row.success_probability - 1.0 / 9.0).abs() < TOL);
        let rebuilt = row.phase * row.dominant_amplitude().norm();
        assert!((rebuilt - row.dominant_amplitude()).norm() < TOL);
    }
}

#[test]
fn single_gate_operator_is_scaled_cz() {
    let a = extract_operator(&single(), &polarization_cz_encoding()).unwrap();
    let expected = cz(2, 0, 1).scale(c(1.0 / 3.0, 0.0));
    assert!(a.matrix.max_abs_diff(&expected) < TOL);
    let f = process_fidelity(&a, &cz(2, 0, 1)).unwrap();
    assert!((f.process_fidelity - 1.0).abs() < TOL);
    let scaled = PostSelectedOperator {
        qubit_labels: a.qubit_labels.clone(),
        matrix: a.matrix.scale(c(0.0, 7.5)),
    };
    let g = process_fidelity(&scaled, &cz(2, 0, 1)).unwrap();
    assert!((g.process_fidelity - f.process_fidelity).abs() < TOL);
}

#[test]
fn cascaded_standard_truth_table() {
    let table = truth_table(&cascade(), &cascaded_encoding(), TruthBasis::Standard).unwrap();
    assert_eq!(table.qubit_order(), "CST");
    let signs = [1.0, 1.0, -1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
    let labels = ["000", "001", "010", "011", "100", "101", "110", "111"];
    for ((row, sign), label) in table.rows.iter().zip(signs).zip(labels) {
        assert_eq!(row.input, label);
        assert_eq!(row.output, label);
        assert!((row.phase - c(sign, 0.0)).norm() < TOL);
        assert!((row.success_probability - 1.0 / 27.0).abs() < TOL);
    }
}

#[test]
fn cascaded_hadamard_truth_table() {
    let table = truth_table(&cascade(), &cascaded_encoding(), TruthBasis::HadamardSt).unwrap();
    let expected = [
        ("0++", "0-+"),
        ("0+-", "0--"),
        ("0-+", "0++"),
        ("0--", "0+-"),
        ("1++", "1+-"),
        ("1+-", "1++"),
        ("1-+", "1--"),
        ("1--", "1-+"),
    ];
    for (row, (input, output)) in table.rows.iter().zip(expected) {
        assert_eq!(row.input, input);
        assert_eq!(row.output, output);
        assert!((row.phase - c(1.0, 0.0)).norm() < TOL);
        assert!((row.success_probability - 1.0 / 27.0).abs() < TOL);
        assert!((row.dominant_amplitude().norm_sqr() - 1.0 / 27.0).abs() < TOL);
    }
}

#[test]
fn cascaded_operator_matches_two_sequential_czs() {
    let a = extract_operator(&cascade(), &cascaded_encoding()).unwrap();
    let ideal = ideal_cascaded_unitary();
    let expected = ideal.scale(c(1.0 / 27f64.sqrt(), 0.0));
    assert!(a.matrix.max_abs_diff(&expected) < TOL);
    let f = process_fidelity(&a, &ideal).unwrap();
    assert!((f.process_fidelity - 1.0).abs() < TOL);
    assert!(f.success_probabilities.iter().all(|p| (p - 1.0 / 27.0).abs() < TOL));
}

#[test]
fn ghz_from_ideal_cascade() {
    let r = ghz_prepare(&cascade(), &cascaded_encoding()).unwrap();
    assert!((r.fidelity - 1.0).abs() < TOL);
    assert!((r.success_probability - 1.0 / 27.0).abs() < TOL);
    assert!(r.state.max_abs_diff(&ghz_target()) < TOL);
    for q in 0..3 {
        assert!((r.state.reduced_purity(q) - 0.5).abs() < TOL);
    }
}

#[test]
fn ghz_without_interaction() {
    // With no coupling the output is |+++⟩. Every term of the target has one
    // of S, T in |−⟩, and ⟨+|−⟩ = 0, so the overlap vanishes.
    let enc = cascaded_encoding();
    let r = ghz_prepare(&ModeUnitary::identity(enc.basis().clone()), &enc).unwrap();
    let plus = SingleQubitState::plus();
    let expected = metacz::encoding::LogicalState::product(&[plus, plus, plus]);
    assert!(r.state.max_abs_diff(&expected) < TOL);
    assert!(r.fidelity.abs() < TOL);
    assert!((r.success_probability - 1.0).abs() < TOL);
}

#[test]
fn ghz_with_ratio_error() {
    let cfg = perturb_ratio(&MetasurfaceConfig::ideal(-2, 2), 0.05).unwrap();
    let r = ghz_prepare(&build_parallel_bs(&cfg).unwrap(), &cascaded_encoding()).unwrap();
    assert!(r.fidelity > 0.9 && r.fidelity < 1.0, "{}", r.fidelity);
}

#[test]
fn path_encoding_reproduces_polarization_table() {
    let pol = truth_table(&single(), &polarization_cz_encoding(), TruthBasis::Standard).unwrap();
    let path_u = build_parallel_bs(&MetasurfaceConfig::ideal(-2, 3)).unwrap();
    let path = truth_table(&path_u, &path_cz_encoding(), TruthBasis::Standard).unwrap();
    for (a, b) in pol.rows.iter().zip(&path.rows) {
        assert_eq!(a.input, b.input);
        assert_eq!(a.output, b.output);
        assert!(a.output_state.max_abs_diff(&b.output_state) < TOL);
        assert!((a.success_probability - b.success_probability).abs() < TOL);
    }
}

#[test]
fn truth_table_on_wider_device() {
    // A config covering more orders than the encoding needs gives the same table.
    let wide = build_parallel_bs(&MetasurfaceConfig::ideal(-3, 4)).unwrap();
    let a = extract_operator(&wide, &polarization_cz_encoding()).unwrap();
    assert!(a.matrix.max_abs_diff(&cz(2, 0, 1).scale(c(1.0 / 3.0, 0.0))) < TOL);
}

#[test]
fn truth_table_basis_mismatch() {
    let small = build_parallel_bs(&MetasurfaceConfig::ideal(-1, 2)).unwrap();
    let err = truth_table(&small, &cascaded_encoding(), TruthBasis::Standard).unwrap_err();
    assert!(matches!(err, Error::MissingMode(_)));
}

#[test]
fn two_gates_factorize() {
    let u = build_parallel_bs(&MetasurfaceConfig::ideal(-4, 2)).unwrap();
    let a = cz_on_paths(0, ("C1", "T1")).unwrap();
    let b = cz_on_paths(-3, ("C2", "T2")).unwrap();
    let r = independent_gates_check(&u, &a, &b).unwrap();
    assert!(r.max_deviation < TOL, "{:e}", r.max_deviation);
    assert!((r.joint_success_probability - 1.0 / 81.0).abs() < TOL);
    for gate in [&r.gate_a, &r.gate_b] {
        let f = process_fidelity(gate, &cz(2, 0, 1)).unwrap();
        assert!((f.process_fidelity - 1.0).abs() < TOL);
    }
    let ideal = cz(2, 0, 1).kron(&cz(2, 0, 1)).scale(c(1.0 / 9.0, 0.0));
    assert!(r.joint.matrix.max_abs_diff(&ideal) < TOL);
}

#[test]
fn gates_sharing_a_path_are_rejected() {
    let u = build_parallel_bs(&MetasurfaceConfig::ideal(-2, 2)).unwrap();
    let a = cz_on_paths(0, ("C1", "T1")).unwrap();
    let b = cz_on_paths(-1, ("C2", "T2")).unwrap();
    assert!(matches!(
        independent_gates_check(&u, &a, &b),
        Err(Error::OverlappingEncodings(_))
    ));
}

#[test]
fn fidelity_examples() {
    let third = c(1.0 / 3.0, 0.0);
    let proportional = PostSelectedOperator {
        qubit_labels: vec!["C".into(), "T".into()],
        matrix: cz(2, 0, 1).scale(third),
    };
    assert!((process_fidelity(&proportional, &cz(2, 0, 1)).unwrap().process_fidelity - 1.0).abs() < TOL);

    // |Tr(CZ · I/3)|² = (2/3)² ; d · Tr(A†A) = 4 · 4/9.
    let flat = PostSelectedOperator {
        qubit_labels: vec!["C".into(), "T".into()],
        matrix: ComplexMatrix::identity(4).scale(third),
    };
    let f = process_fidelity(&flat, &cz(2, 0, 1)).unwrap();
    assert!((f.process_fidelity - (4.0 / 9.0) / (16.0 / 9.0)).abs() < TOL);
}

#[test]
fn round_trip_without_evolution() {
    let enc = cascaded_encoding();
    let id = ModeUnitary::identity(enc.basis().clone());
    let inputs = [
        SingleQubitState::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap(),
        SingleQubitState::minus(),
        SingleQubitState::one(),
    ];
    let (logical, p) = post_select(&id.evolve(&inject(&inputs, &enc).unwrap()).unwrap(), &enc).unwrap();
    let expected = metacz::encoding::LogicalState::product(&inputs);
    assert!(logical.max_abs_diff(&expected) < TOL);
    assert!((p - 1.0).abs() < TOL);
}

#[test]
fn encodings_are_injective() {
    for enc in [polarization_cz_encoding(), cascaded_encoding(), path_cz_encoding()] {
        let focks: Vec<FockState> = (0..1 << enc.n_qubits())
            .map(|k| enc.basis_fock(k).unwrap())
            .collect();
        let unique: std::collections::HashSet<_> = focks.iter().collect();
        assert_eq!(unique.len(), focks.len());
    }
}

#[test]
fn probabilities_input_independent_for_ideal_devices() {
    for (u, enc) in [(single(), polarization_cz_encoding()), (cascade(), cascaded_encoding())] {
        let probs = extract_operator(&u, &enc).unwrap().success_probabilities();
        let first = probs[0];
        assert!(probs.iter().all(|p| (p - first).abs() < TOL));
    }
    let _ = C64::new(0.0, 0.0);
}
