use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::{enumerate_fock_basis, permanent, ComplexMatrix, FockState, PhotonicState};
use crate::error::{Error, Result};

/// Largest total photon number accepted by [`evolve`] and [`evolve_bruteforce`].
pub const MAX_PHOTONS: usize = 4;
/// Largest mode count accepted by either evolution routine.
pub const MAX_MODES: usize = 16;

fn check_inputs(state: &PhotonicState, u: &ComplexMatrix) -> Result<()> {
    if !u.is_square() || u.rows() != state.n_modes() {
        return Err(Error::Dimension(format!(
            "state over {} modes against a {}x{} transfer matrix",
            state.n_modes(),
            u.rows(),
            u.cols()
        )));
    }
    if state.photon_number() > MAX_PHOTONS {
        return Err(Error::Bound {
            what: "photon number",
            value: state.photon_number(),
            bound: MAX_PHOTONS,
        });
    }
    if state.n_modes() > MAX_MODES {
        return Err(Error::Bound {
            what: "mode count",
            value: state.n_modes(),
            bound: MAX_MODES,
        });
    }
    Ok(())
}

/// Propagates a Fock superposition through the mode transformation
/// `â†ᵢ → Σⱼ Uⱼᵢ b̂†ⱼ`.
///
/// Each transition amplitude is `Per(U[m,n]) / √(∏mᵢ! ∏nⱼ!)`, where the
/// submatrix repeats row `i` `mᵢ` times and column `j` `nⱼ` times.
pub fn evolve(state: &PhotonicState, u: &ComplexMatrix) -> Result<PhotonicState> {
    check_inputs(state, u)?;
    let n_modes = state.n_modes();
    let photons = state.photon_number();
    let outputs: Vec<(FockState, Vec<usize>, f64)> = enumerate_fock_basis(n_modes, photons)
        .into_iter()
        .map(|m| {
            let rows = m.mode_list();
            let norm = m.factorial_product();
            (m, rows, norm)
        })
        .collect();

    let mut amps = vec![C64::new(0.0, 0.0); outputs.len()];
    for (input, &amp_in) in state.iter() {
        let cols = input.mode_list();
        let in_norm = input.factorial_product();
        for (slot, (_, rows, out_norm)) in amps.iter_mut().zip(&outputs) {
            let per = permanent(&u.select(rows, &cols))?;
            *slot += amp_in * per / (out_norm * in_norm).sqrt();
        }
    }

    PhotonicState::from_terms(
        n_modes,
        photons,
        outputs.into_iter().map(|(m, _, _)| m).zip(amps),
    )
}

/// Same transformation as [`evolve`], computed without permanents.
///
/// Each input term `∏(â†ᵢ)^nᵢ / √(∏nᵢ!) |0⟩` is expanded as a polynomial in
/// the output creation operators by multiplying out one linear form per
/// photon. A collected monomial `c · ∏(b̂†ⱼ)^mⱼ` contributes `c · √(∏mⱼ!)`
/// to the amplitude of `|m⟩`.
pub fn evolve_bruteforce(state: &PhotonicState, u: &ComplexMatrix) -> Result<PhotonicState> {
    check_inputs(state, u)?;
    let n_modes = state.n_modes();
    let mut collected: BTreeMap<Vec<u8>, C64> = BTreeMap::new();

    for (input, &amp_in) in state.iter() {
        let mut poly: BTreeMap<Vec<u8>, C64> = BTreeMap::new();
        poly.insert(vec![0; n_modes], amp_in / input.factorial_product().sqrt());
        for i in input.mode_list() {
            let mut next: BTreeMap<Vec<u8>, C64> = BTreeMap::new();
            for (mono, coeff) in &poly {
                for j in 0..n_modes {
                    let u_ji = u[(j, i)];
                    if u_ji == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut grown = mono.clone();
                    grown[j] += 1;
                    *next.entry(grown).or_default() += coeff * u_ji;
                }
            }
            poly = next;
        }
        for (mono, coeff) in poly {
            *collected.entry(mono).or_default() += coeff;
        }
    }

    PhotonicState::from_terms(
        n_modes,
        state.photon_number(),
        collected.into_iter().map(|(mono, coeff)| {
            let fock = FockState::new(mono);
            let scale = fock.factorial_product().sqrt();
            (fock, coeff * scale)
        }),
    )
}
