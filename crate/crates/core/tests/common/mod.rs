#![allow(dead_code)]

use itertools::Itertools;
use metacz::fock::{ComplexMatrix, C64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Orthonormalizes the columns of `m` (modified Gram-Schmidt).
pub fn gram_schmidt(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
    for j in 0..n {
        for k in 0..j {
            let proj: C64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            let basis = cols[k].clone();
            for (z, b) in cols[j].iter_mut().zip(basis) {
                *z -= proj * b;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

pub fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = StdRng::seed_from_u64(seed);
    ComplexMatrix::from_fn(n, n, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    gram_schmidt(&random_matrix(n, seed))
}

/// Sum over all n! permutations.
pub fn naive_permanent(m: &ComplexMatrix) -> C64 {
    let n = m.rows();
    (0..n)
        .permutations(n)
        .map(|p| (0..n).map(|i| m[(i, p[i])]).product::<C64>())
        .sum()
}

/// The 6×6 transfer matrix exactly as printed for the single CZ gate,
/// over [R(+2), L(+1), R(+1), L(0), R(0), L(−1)].
pub fn printed_six_mode() -> ComplexMatrix {
    printed_blocks(3)
}

/// The 8×8 printed cascade matrix, over
/// [R(+2), L(+1), R(+1), L(0), R(0), L(−1), R(−1), L(−2)].
pub fn printed_eight_mode() -> ComplexMatrix {
    printed_blocks(4)
}

fn printed_blocks(blocks: usize) -> ComplexMatrix {
    let s3 = 3f64.sqrt();
    let d = c(1.0 / s3, 0.0);
    let o = c(0.0, 2f64.sqrt() / s3);
    ComplexMatrix::from_fn(2 * blocks, 2 * blocks, |i, j| {
        if i / 2 != j / 2 {
            c(0.0, 0.0)
        } else if i == j {
            d
        } else {
            o
        }
    })
}
