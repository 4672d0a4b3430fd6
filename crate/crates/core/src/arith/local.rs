//! Local Néron heights.
//!
//! Normalization: `λ_∞(P) = log max(|x|, 1) + O(1)` and, at a prime of good
//! reduction, `λ_p(P) = log max(|x|_p, 1)`. No `log|Δ|/12` term is included,
//! so the values depend on the model; their sum over all places on one model
//! is the canonical height `ĥ(P) = lim log H(x(2ⁿP))/4ⁿ`.

use astro_float::BigFloat;
use num_traits::{Signed, Zero};

use super::tate::ReductionData;
use crate::algebra::{valuation, Integer, Rational};
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::real::{consts, float_to_f64, ln_abs_rational, rational_to_float, RM};

/// Upper limit on series terms in [`local_height_arch`].
pub const ARCH_TERM_CAP: u32 = 200;

fn log_height(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    crate::real::ln_int(&q.numer().abs()).max(crate::real::ln_int(q.denom()))
}

/// Archimedean local height of an affine point, accurate to `tol` (at best
/// about 1e−15, the resolution of the returned `f64`).
///
/// Uses the series `Σ 4^{−(n+1)} log max(|F|, |G|)` over the doubling maps
/// `F = X⁴ − b4X²Z² − 2b6XZ³ − b8Z⁴`, `G = 4X³Z + b2X²Z² + 2b4XZ³ + b6Z⁴`
/// evaluated at the iterates of `x` scaled so that `max(|X|, |Z|) = 1`. The
/// number of terms is chosen from a bound on `|log max(|F|, |G|)|` and capped
/// at [`ARCH_TERM_CAP`].
pub fn local_height_arch(curve: &WeierstrassCurve<Rational>, p: &CurvePoint<Rational>, tol: f64) -> Result<f64> {
    let Some(x) = p.x() else {
        return Err(Error::Precondition("the archimedean local height needs an affine point".into()));
    };
    if !(tol > 0.0) {
        return Err(Error::Argument("tolerance must be positive".into()));
    }
    let inv = curve.invariants();
    let bs = [&inv.b2, &inv.b4, &inv.b6, &inv.b8];
    let hb = bs.iter().map(|b| log_height(b)).fold(0.0f64, f64::max);
    let k = 2.0 * hb + 2.0 * ln_abs_rational(&inv.disc).abs() + 10.0;
    // tail Σ_{n ≥ N} 4^{−(n+1)}·k = k·4^{−N}/3 must be below tol/4
    let terms = (libm::log(4.0 * k / (3.0 * tol)) / core::f64::consts::LN_2 / 2.0).ceil().max(1.0) as u32;
    let terms = terms.min(ARCH_TERM_CAP);
    let guard = bs.iter().map(|b| b.numer().bits().max(b.denom().bits())).max().unwrap_or(0) as usize;
    let bits = (-libm::log2(tol)).ceil().max(0.0) as usize + 64 + guard;

    let mut cc = consts();
    let f = |q: &Rational| rational_to_float(q, bits);
    let (b2, b4, b6, b8) = (f(&inv.b2), f(&inv.b4), f(&inv.b6), f(&inv.b8));
    let one = BigFloat::from_u64(1, bits);
    let two = BigFloat::from_u64(2, bits);
    let four = BigFloat::from_u64(4, bits);

    let xf = f(x);
    let (mut xx, mut zz) = if xf.abs().cmp(&one).unwrap_or(0) <= 0 {
        (xf.clone(), one.clone())
    } else {
        (one.clone(), one.div(&xf, bits, RM))
    };
    let mut total = if xf.abs().cmp(&one).unwrap_or(0) > 0 {
        xf.abs().ln(bits, RM, &mut cc)
    } else {
        BigFloat::from_u64(0, bits)
    };
    let mut weight = BigFloat::from_u64(1, bits);
    for _ in 0..terms {
        weight = weight.div(&four, bits, RM);
        let x2 = xx.mul(&xx, bits, RM);
        let z2 = zz.mul(&zz, bits, RM);
        let xz = xx.mul(&zz, bits, RM);
        let x2z2 = x2.mul(&z2, bits, RM);
        let xz3 = xz.mul(&z2, bits, RM);
        let z4 = z2.mul(&z2, bits, RM);
        // F = X⁴ − b4·X²Z² − 2b6·XZ³ − b8·Z⁴
        let ff = x2
            .mul(&x2, bits, RM)
            .sub(&b4.mul(&x2z2, bits, RM), bits, RM)
            .sub(&two.mul(&b6, bits, RM).mul(&xz3, bits, RM), bits, RM)
            .sub(&b8.mul(&z4, bits, RM), bits, RM);
        // G = 4X³Z + b2·X²Z² + 2b4·XZ³ + b6·Z⁴
        let gg = four
            .mul(&x2, bits, RM)
            .mul(&xz, bits, RM)
            .add(&b2.mul(&x2z2, bits, RM), bits, RM)
            .add(&two.mul(&b4, bits, RM).mul(&xz3, bits, RM), bits, RM)
            .add(&b6.mul(&z4, bits, RM), bits, RM);
        let (fa, ga) = (ff.abs(), gg.abs());
        let m = if fa.cmp(&ga).unwrap_or(0) >= 0 { fa.clone() } else { ga.clone() };
        if m.is_zero() {
            return Err(Error::Inconsistency("doubling map vanished; precision too low".into()));
        }
        total = total.add(&weight.mul(&m.ln(bits, RM, &mut cc), bits, RM), bits, RM);
        if fa.cmp(&ga).unwrap_or(0) <= 0 {
            xx = ff.div(&gg, bits, RM);
            zz = one.clone();
        } else {
            xx = one.clone();
            zz = gg.div(&ff, bits, RM);
        }
    }
    Ok(float_to_f64(&total))
}

/// `λ_p(P) = coefficient · log p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonArchHeight {
    pub prime: Integer,
    pub coefficient: Rational,
}

impl NonArchHeight {
    pub fn value(&self) -> f64 {
        let c = &self.coefficient;
        if c.is_zero() {
            return 0.0;
        }
        let cf = crate::real::float_to_f64(&rational_to_float(c, 64));
        cf * crate::real::ln_int(&self.prime)
    }
}

const INF: i64 = i64::MAX / 8;

fn v(x: &Rational, p: &Integer) -> i64 {
    valuation(x, p).unwrap_or(INF)
}

fn ri(n: i64) -> Rational {
    Rational::from(Integer::from(n))
}

/// Non-archimedean local height of an affine point on the same model that
/// `reduction` was computed from (`tate_at_prime(curve, p)`).
pub fn local_height_nonarch(
    curve: &WeierstrassCurve<Rational>,
    point: &CurvePoint<Rational>,
    p: &Integer,
    reduction: &ReductionData,
) -> Result<NonArchHeight> {
    if reduction.prime != *p {
        return Err(Error::Precondition(alloc::format!("reduction data is for {}, not {}", reduction.prime, p)));
    }
    if point.is_infinity() {
        return Err(Error::Precondition("the local height needs an affine point".into()));
    }
    let [u, r, s, t] = &reduction.transform;
    if curve.transform(u, r, s, t)? != reduction.local_model {
        return Err(Error::Precondition("reduction data belongs to a different model".into()));
    }
    let local = curve.transform_point(point, u, r, s, t)?;
    let (Some(x), Some(y)) = (local.x(), local.y()) else {
        return Err(Error::Precondition("the local height needs an affine point".into()));
    };
    let coefficient = minimal_model_coefficient(&reduction.local_model, x, y, p, reduction.v_min_disc)
        - ri(2) * ri(v(u, p));
    Ok(NonArchHeight { prime: p.clone(), coefficient })
}

/// Case analysis on a model minimal at `p` with `v_p(Δ) = n`.
fn minimal_model_coefficient(e: &WeierstrassCurve<Rational>, x: &Rational, y: &Rational, p: &Integer, n: u32) -> Rational {
    let vx = v(x, p);
    if vx < 0 {
        return ri(-vx);
    }
    let [a1, a2, a3, a4, _] = e.coeffs();
    let inv = e.invariants();
    let k = |n: i64| ri(n);
    let a = v(&(k(3) * x * x + k(2) * a2 * x + a4 - a1 * y), p);
    let b = v(&(k(2) * y + a1 * x + a3), p);
    if a <= 0 || b <= 0 {
        return Rational::zero();
    }
    let n = n as i64;
    if v(&inv.c4, p) == 0 {
        let m = ri(b).min(Rational::new(n.into(), 2.into()));
        return &m * (&m - ri(n)) / ri(n);
    }
    let x2 = x * x;
    let c = v(&(k(3) * &x2 * &x2 + &inv.b2 * &x2 * x + k(3) * &inv.b4 * &x2 + k(3) * &inv.b6 * x + &inv.b8), p);
    if c >= 3 * b {
        Rational::new((-2 * b).into(), 3.into())
    } else {
        Rational::new((-c).into(), 4.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::tate::tate_at_prime;

    fn curve(a: [i64; 5]) -> WeierstrassCurve<Rational> {
        WeierstrassCurve::new(ri(a[0]), ri(a[1]), ri(a[2]), ri(a[3]), ri(a[4])).unwrap()
    }

    fn pt(x: i64, y: i64) -> CurvePoint<Rational> {
        CurvePoint::affine(ri(x), ri(y))
    }

    #[test]
    fn arch_convergence_contract() {
        let e = curve([0, 0, 1, -1, 0]);
        let p = pt(0, 0);
        let a = local_height_arch(&e, &p, 1e-10).unwrap();
        let b = local_height_arch(&e, &p, 1e-11).unwrap();
        assert!((a - b).abs() < 1e-10);
        assert!(local_height_arch(&e, &CurvePoint::Infinity, 1e-10).is_err());
    }

    #[test]
    fn arch_doubling_identity() {
        // λ(2P) = 4λ(P) − log|G(x, 1)|, G(x, 1) = (2y + a1x + a3)²
        for (a, (x, y)) in [([0, 0, 1, -1, 0], (0, 0)), ([0, 0, 0, 0, -2], (3, 5)), ([1, 0, 0, -1, 0], (1, 0))] {
            let e = curve(a);
            let p = pt(x, y);
            let p2 = e.double(&p).unwrap();
            let l1 = local_height_arch(&e, &p, 1e-13).unwrap();
            let l2 = local_height_arch(&e, &p2, 1e-13).unwrap();
            let g = (2 * y + a[0] * x + a[2]) as f64;
            assert!((l2 - (4.0 * l1 - (g * g).ln())).abs() < 1e-12, "{:?}", a);
        }
    }

    #[test]
    fn nonarch_good_reduction_is_zero_on_integral_points() {
        let e = curve([0, 0, 1, -1, 0]);
        let p5 = Integer::from(5);
        let rd = tate_at_prime(&e, &p5).unwrap();
        let h = local_height_nonarch(&e, &pt(0, 0), &p5, &rd).unwrap();
        assert!(h.coefficient.is_zero());
        // a point with 2 in the denominator of x
        let q = CurvePoint::affine(Rational::new(1.into(), 4.into()), Rational::new((-5).into(), 8.into()));
        assert!(e.contains(&q));
        let p2 = Integer::from(2);
        let rd2 = tate_at_prime(&e, &p2).unwrap();
        let h = local_height_nonarch(&e, &q, &p2, &rd2).unwrap();
        assert_eq!(h.coefficient, ri(2));
        assert!((h.value() - 2.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn nonarch_rejects_foreign_reduction_data() {
        let e = curve([0, 0, 1, -1, 0]);
        let rd = tate_at_prime(&curve([0, 0, 0, 0, 1]), &Integer::from(5)).unwrap();
        assert!(local_height_nonarch(&e, &pt(0, 0), &Integer::from(5), &rd).is_err());
        assert!(local_height_nonarch(&e, &pt(0, 0), &Integer::from(7), &rd).is_err());
    }
}
