//! Reference computations used only to check the main algorithms: they share
//! no code path with the local-height decomposition.

use alloc::vec::Vec;

use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use crate::algebra::{Integer, Rational};
use crate::curve::WeierstrassCurve;
use crate::real::ln_int;

/// `log H(x(2ⁿP))/4ⁿ` for `n = 0..=depth`, by exact x-only doubling on the
/// model `aᵢ → Dⁱaᵢ` with integral coefficients. The last entry approximates
/// the canonical height with error `O(4^{−depth})`.
pub fn doubling_limit_q(curve: &WeierstrassCurve<Rational>, x: &Rational, depth: u32) -> Vec<f64> {
    // least D with Dⁱaᵢ integral, by search over divisors of the lcm of the denominators
    let l = curve.coeffs().iter().fold(Integer::from(1), |acc, c| acc.lcm(c.denom()));
    let mut d = l.clone();
    let mut k = Integer::from(1);
    while k < l {
        k += 1;
        if l.is_multiple_of(&k)
            && curve.coeffs().iter().zip([1u32, 2, 3, 4, 6]).all(|(c, e)| k.pow(e).is_multiple_of(c.denom()))
        {
            d = k.clone();
            break;
        }
    }
    let dq = Rational::from(d.clone());
    let a: Vec<Integer> =
        curve.coeffs().iter().zip([1i32, 2, 3, 4, 6]).map(|(c, k)| (c * dq.pow(k)).to_integer()).collect();
    let (a1, a2, a3, a4, a6) = (&a[0], &a[1], &a[2], &a[3], &a[4]);
    let k = |n: i64| Integer::from(n);
    let b2 = a1 * a1 + k(4) * a2;
    let b4 = k(2) * a4 + a1 * a3;
    let b6 = a3 * a3 + k(4) * a6;
    let b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let disc = -(&b2 * &b2 * &b8) - k(8) * &b4 * &b4 * &b4 - k(27) * &b6 * &b6 + k(9) * &b2 * &b4 * &b6;
    // gcd(F(a, d), G(a, d)) divides the resultant Δ² when gcd(a, d) = 1
    let res = &disc * &disc;

    let xi = x * &dq * &dq;
    let (mut num, mut den) = (xi.numer().clone(), xi.denom().clone());
    let mut out = Vec::with_capacity(depth as usize + 1);
    let mut scale = 1.0f64;
    for n in 0..=depth {
        let h = if num.is_zero() { ln_int(&den) } else { ln_int(&num.abs()).max(ln_int(&den)) };
        out.push(h / scale);
        if n == depth || den.is_zero() {
            break;
        }
        let (a2_, d2) = (&num * &num, &den * &den);
        let ad = &num * &den;
        let f = &a2_ * &a2_ - &b4 * &a2_ * &d2 - k(2) * &b6 * &ad * &d2 - &b8 * &d2 * &d2;
        let g = k(4) * &a2_ * &ad + &b2 * &a2_ * &d2 + k(2) * &b4 * &ad * &d2 + &b6 * &d2 * &d2;
        let mut common = f.mod_floor(&res).gcd(&res);
        common = common.gcd(&g);
        let (mut f, mut g) = (f / &common, g / &common);
        if g.is_negative() {
            f = -f;
            g = -g;
        }
        num = f;
        den = g;
        scale *= 4.0;
        if den.is_zero() {
            // 2ⁿP is 2-torsion, so every later multiple is the identity
            for _ in n + 1..=depth {
                out.push(0.0);
            }
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirty_seven_a_converges() {
        let q = |n: i64| Rational::from(Integer::from(n));
        let e = WeierstrassCurve::new(q(0), q(0), q(1), q(-1), q(0)).unwrap();
        let h = doubling_limit_q(&e, &q(0), 9);
        assert!((h[9] - 0.0511114082).abs() < 1e-7, "{:?}", h);
    }
}
