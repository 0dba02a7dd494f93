use num_complex::Complex64 as C64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

pub const MAX_PERMANENT_DIM: usize = 16;

/// Matrix permanent by Glynn's formula with Gray-code ordering of the sign
/// vectors, `O(2^(n-1) · n)`. The empty matrix has permanent 1.
pub fn permanent(m: &ComplexMatrix) -> Result<C64> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "permanent of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n > MAX_PERMANENT_DIM {
        return Err(Error::Bound {
            what: "permanent dimension",
            value: n,
            bound: MAX_PERMANENT_DIM,
        });
    }
    Ok(match n {
        0 => C64::new(1.0, 0.0),
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] + m[(0, 1)] * m[(1, 0)],
        _ => glynn(m, n),
    })
}

fn glynn(m: &ComplexMatrix, n: usize) -> C64 {
    // Column sums under sign vector δ (δ_0 fixed at +1).
    let mut sums: Vec<C64> = (0..n).map(|j| (0..n).map(|i| m[(i, j)]).sum()).collect();
    let mut delta = vec![true; n];
    let mut sign = 1.0;
    let mut total: C64 = sums.iter().product();

    for k in 1u64..(1u64 << (n - 1)) {
        let row = k.trailing_zeros() as usize + 1;
        let factor = if delta[row] { -2.0 } else { 2.0 };
        delta[row] = !delta[row];
        for (j, s) in sums.iter_mut().enumerate() {
            *s += m[(row, j)] * factor;
        }
        sign = -sign;
        total += sums.iter().product::<C64>() * sign;
    }
    total / (1u64 << (n - 1)) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn empty_matrix_is_one() {
        assert_eq!(permanent(&ComplexMatrix::zeros(0, 0)).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn identity_two() {
        assert_eq!(permanent(&ComplexMatrix::identity(2)).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn two_by_two_analytic() {
        assert_eq!(permanent(&real(&[&[1.0, 2.0], &[3.0, 4.0]])).unwrap().re, 10.0);
    }

    #[test]
    fn all_ones_is_factorial() {
        let ones = |n| ComplexMatrix::from_fn(n, n, |_, _| C64::new(1.0, 0.0));
        let mut fact = 1.0;
        for n in 1..=8 {
            fact *= n as f64;
            let p = permanent(&ones(n)).unwrap();
            assert!((p.re - fact).abs() < 1e-9 * fact, "n={n}: {p}");
        }
    }

    #[test]
    fn three_by_three_by_hand() {
        // 1·(5·9+6·8) + 2·(4·9+6·7) + 3·(4·8+5·7) = 93 + 156 + 201
        let m = real(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], &[7.0, 8.0, 9.0]]);
        assert!((permanent(&m).unwrap().re - 450.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_square_and_oversized() {
        assert!(matches!(
            permanent(&ComplexMatrix::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            permanent(&ComplexMatrix::identity(17)),
            Err(Error::Bound { .. })
        ));
    }

    #[test]
    fn sixteen_is_supported() {
        let p = permanent(&ComplexMatrix::identity(16)).unwrap();
        assert!((p.re - 1.0).abs() < 1e-12 && p.im.abs() < 1e-12);
    }
}
