//! Determinants of small Gram matrices, exact and floating.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::Rational;

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_f64(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(core::cmp::Ordering::Equal))
            .unwrap_or(col);
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// Exact determinant over ℚ.
pub fn det_exact(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn small_determinants() {
        assert_eq!(det_f64(&[vec![2.0, 1.0], vec![1.0, 3.0]]), 5.0);
        assert_eq!(det_f64(&[]), 1.0);
        let q = |n: i64| Rational::from_integer(n.into());
        assert_eq!(det_exact(&[vec![q(0), q(1)], vec![q(1), q(0)]]), q(-1));
        assert_eq!(det_exact(&[vec![q(1), q(2)], vec![q(2), q(4)]]), q(0));
    }
}
