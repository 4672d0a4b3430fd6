use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Closest continued-fraction convergent of `x` with denominator at most
/// `denom_bound`, returned only if it lies within `tol` of `x`.
///
/// `x` is expanded exactly (as the binary rational it represents), so the
/// convergents are those of the stored double, not of a rounded decimal.
pub fn rational_reconstruct(x: f64, denom_bound: u64, tol: f64) -> Option<Rational> {
    if !x.is_finite() || denom_bound == 0 || !(tol > 0.0) {
        return None;
    }
    let exact = Rational::from_float(x)?;
    let bound = BigInt::from(denom_bound);

    // p_{k-1}/q_{k-1}, p_k/q_k
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut best: Option<Rational> = None;
    let mut rest = exact.clone();
    loop {
        let a = rest.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > bound {
            break;
        }
        best = Some(Rational::new(p2.clone(), q2.clone()));
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let best = best?;
    let err = (&exact - &best).abs();
    (err.to_f64()? <= tol).then_some(best)
}

/// Least common multiple of small positive integers, saturating at `u64::MAX`.
pub(crate) fn lcm_u64(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(1u64, |acc, v| {
        if v == 0 {
            return acc;
        }
        let g = acc.gcd(&v);
        acc.saturating_mul(v / g)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn examples() {
        assert_eq!(rational_reconstruct(0.3333333, 10, 1e-4), Some(q(1, 3)));
        assert_eq!(rational_reconstruct(0.5, 10, 1e-9), Some(q(1, 2)));
        assert_eq!(rational_reconstruct(3.14159, 10, 1e-6), None);
        assert_eq!(rational_reconstruct(-1.25, 8, 1e-12), Some(q(-5, 4)));
        assert_eq!(rational_reconstruct(0.0, 1, 1e-12), Some(q(0, 1)));
    }

    #[test]
    fn lcm_of_component_counts() {
        assert_eq!(lcm_u64([1, 4, 3, 2, 1]), 12);
        assert_eq!(lcm_u64([]), 1);
    }

    proptest! {
        #[test]
        fn recovers_perturbed_fraction(p in -500i64..500, qd in 1i64..60, bound in 1u64..60, s in -0.9f64..0.9) {
            let qd = qd.min(bound as i64);
            let eps = s / (2.0 * qd as f64 * bound as f64) * 0.5;
            let x = p as f64 / qd as f64 + eps;
            let got = rational_reconstruct(x, bound, 2.0 * eps.abs() + 1e-13);
            prop_assert_eq!(got, Some(q(p, qd)));
        }
    }
}
