use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Terms with amplitude modulus below this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

const NORM_SLACK: f64 = 1e-12;

/// Photon-number occupation pattern over a fixed mode basis.
///
/// Ordering is descending-lexicographic on the occupation vector, so
/// `(1,0)` sorts before `(0,1)`; this is the order produced by
/// [`enumerate_fock_basis`] and the iteration order of [`PhotonicState`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FockState {
    occupations: Vec<u8>,
    total: usize,
}

impl FockState {
    pub fn new(occupations: Vec<u8>) -> Self {
        let total = occupations.iter().map(|&n| n as usize).sum();
        Self { occupations, total }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self::new(vec![0; n_modes])
    }

    /// One photon added to each listed mode (repeats allowed).
    pub fn from_modes(n_modes: usize, modes: &[usize]) -> Result<Self> {
        let mut occ = vec![0u8; n_modes];
        for &m in modes {
            let slot = occ.get_mut(m).ok_or_else(|| {
                Error::Dimension(format!("mode index {m} outside {n_modes} modes"))
            })?;
            *slot += 1;
        }
        Ok(Self::new(occ))
    }

    pub fn occupations(&self) -> &[u8] {
        &self.occupations
    }

    pub fn occupation(&self, mode: usize) -> u8 {
        self.occupations[mode]
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn n_modes(&self) -> usize {
        self.occupations.len()
    }

    /// Mode indices repeated by occupation, ascending.
    pub fn mode_list(&self) -> Vec<usize> {
        self.occupations
            .iter()
            .enumerate()
            .flat_map(|(i, &n)| std::iter::repeat_n(i, n as usize))
            .collect()
    }

    /// `∏ nᵢ!`
    pub fn factorial_product(&self) -> f64 {
        self.occupations
            .iter()
            .map(|&n| (1..=n as u64).product::<u64>() as f64)
            .product()
    }
}

impl Ord for FockState {
    fn cmp(&self, other: &Self) -> Ordering {
        other.occupations.cmp(&self.occupations)
    }
}

impl PartialOrd for FockState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.occupations.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Every occupation vector of `n_photons` over `n_modes`, descending-lexicographic.
pub fn enumerate_fock_basis(n_modes: usize, n_photons: usize) -> Vec<FockState> {
    fn fill(prefix: &mut Vec<u8>, remaining: usize, modes_left: usize, out: &mut Vec<FockState>) {
        if modes_left == 1 {
            prefix.push(remaining as u8);
            out.push(FockState::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in (0..=remaining).rev() {
            prefix.push(k as u8);
            fill(prefix, remaining - k, modes_left - 1, out);
            prefix.pop();
        }
    }

    assert!(n_modes >= 1, "a Fock basis needs at least one mode");
    assert!(n_photons <= u8::MAX as usize, "photon count exceeds occupation width");
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(n_modes), n_photons, n_modes, &mut out);
    out
}

/// Fixed-photon-number superposition of Fock states.
#[derive(Clone, PartialEq)]
pub struct PhotonicState {
    n_modes: usize,
    photon_number: usize,
    terms: BTreeMap<FockState, C64>,
}

impl PhotonicState {
    /// Collects terms, summing duplicates and pruning negligible amplitudes.
    ///
    /// An empty term list is allowed and yields the zero vector over the
    /// given modes and photon number.
    pub fn from_terms(
        n_modes: usize,
        photon_number: usize,
        terms: impl IntoIterator<Item = (FockState, C64)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<FockState, C64> = BTreeMap::new();
        for (fock, amp) in terms {
            if fock.n_modes() != n_modes {
                return Err(Error::InvalidState(format!(
                    "term {fock:?} has {} modes, expected {n_modes}",
                    fock.n_modes()
                )));
            }
            if fock.total() != photon_number {
                return Err(Error::InvalidState(format!(
                    "term {fock:?} has {} photons, expected {photon_number}",
                    fock.total()
                )));
            }
            *map.entry(fock).or_insert(C64::new(0.0, 0.0)) += amp;
        }
        map.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
        let state = Self {
            n_modes,
            photon_number,
            terms: map,
        };
        let norm = state.norm_sqr();
        if norm > 1.0 + NORM_SLACK {
            return Err(Error::InvalidState(format!("squared norm {norm} exceeds 1")));
        }
        Ok(state)
    }

    pub fn from_fock(fock: FockState) -> Self {
        let n_modes = fock.n_modes();
        let photon_number = fock.total();
        Self {
            n_modes,
            photon_number,
            terms: BTreeMap::from([(fock, C64::new(1.0, 0.0))]),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn photon_number(&self) -> usize {
        self.photon_number
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, fock: &FockState) -> C64 {
        self.terms.get(fock).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, &C64)> {
        self.terms.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(C64::norm_sqr).sum()
    }

    /// Largest amplitude difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let left = self
            .terms
            .iter()
            .map(|(f, a)| (a - other.amplitude(f)).norm());
        let right = other
            .terms
            .iter()
            .filter(|(f, _)| !self.terms.contains_key(*f))
            .map(|(_, a)| a.norm());
        left.chain(right).fold(0.0, f64::max)
    }
}

impl fmt::Debug for PhotonicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for (k, v) in &self.terms {
            list.entry(k, v);
        }
        list.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_small_cases() {
        let b = enumerate_fock_basis(2, 1);
        assert_eq!(b, vec![FockState::new(vec![1, 0]), FockState::new(vec![0, 1])]);
        assert_eq!(enumerate_fock_basis(6, 2).len(), 21);
        assert_eq!(enumerate_fock_basis(8, 3).len(), 120);
        assert_eq!(enumerate_fock_basis(3, 0), vec![FockState::vacuum(3)]);
    }

    #[test]
    fn basis_order_matches_ord() {
        let b = enumerate_fock_basis(4, 3);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn total_is_cached_sum() {
        let f = FockState::from_modes(4, &[0, 2, 2]).unwrap();
        assert_eq!(f.occupations(), &[1, 0, 2, 0]);
        assert_eq!(f.total(), 3);
        assert_eq!(f.mode_list(), vec![0, 2, 2]);
        assert_eq!(f.factorial_product(), 2.0);
    }

    #[test]
    fn out_of_range_mode_rejected() {
        assert!(FockState::from_modes(2, &[2]).is_err());
    }

    #[test]
    fn terms_merge_and_prune() {
        let a = FockState::new(vec![1, 0]);
        let b = FockState::new(vec![0, 1]);
        let s = PhotonicState::from_terms(
            2,
            1,
            [
                (a.clone(), C64::new(0.5, 0.0)),
                (a.clone(), C64::new(-0.5, 1e-17)),
                (b.clone(), C64::new(0.6, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.amplitude(&b), C64::new(0.6, 0.0));
        assert_eq!(s.amplitude(&a), C64::new(0.0, 0.0));
    }

    #[test]
    fn mixed_photon_numbers_rejected() {
        let r = PhotonicState::from_terms(
            2,
            1,
            [(FockState::new(vec![1, 1]), C64::new(1.0, 0.0))],
        );
        assert!(matches!(r, Err(Error::InvalidState(_))));
    }

    #[test]
    fn overnormalized_rejected() {
        let r = PhotonicState::from_terms(
            2,
            1,
            [
                (FockState::new(vec![1, 0]), C64::new(1.0, 0.0)),
                (FockState::new(vec![0, 1]), C64::new(0.5, 0.0)),
            ],
        );
        assert!(r.is_err());
    }
}
