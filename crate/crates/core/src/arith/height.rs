//! The Néron–Tate height over ℚ as a sum of local heights, the height
//! pairing and Gram matrices.
//!
//! Normalization: `ĥ(P) = lim log H(x(2ⁿP))/4ⁿ`, so `ĥ(P) = log H(x(P)) + O(1)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::local::{local_height_arch, local_height_nonarch};
use super::tate::{integral_scale, tate_at_prime, ReductionData};
use crate::algebra::{int_factor, Integer, Rational};
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::linalg::det_f64;
use crate::real::{ln_int, Precision};

/// Default search bound for [`torsion_test_q`]; Mazur's bound is 12.
pub const DEFAULT_TORSION_BOUND: u32 = 16;

/// Heights below this are treated as zero.
pub const ZERO_HEIGHT: f64 = 1e-10;

/// Denominators of x below this many bits are factored so that each prime gets
/// its own entry in [`HeightRecordQ::local_terms`].
const FACTOR_BITS: u64 = 160;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(Integer),
    /// All primes dividing the value, each of good reduction, lumped together
    /// because the value was too large to factor.
    Cofactor(Integer),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{}", p),
            Place::Cofactor(n) => write!(f, "primes of {}", n),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeightRecordQ {
    pub point: CurvePoint<Rational>,
    pub naive: f64,
    pub canonical: f64,
    /// Local heights on the integral model `aᵢ → Dⁱaᵢ`; they sum to `canonical`.
    pub local_terms: BTreeMap<Place, f64>,
}

/// Per-curve data reused across points: the integral model and Tate's
/// algorithm at every prime dividing its discriminant.
#[derive(Clone, Debug)]
pub struct CurveData {
    curve: WeierstrassCurve<Rational>,
    scale: Rational,
    integral: WeierstrassCurve<Rational>,
    bad: Vec<ReductionData>,
}

impl CurveData {
    pub fn new(curve: &WeierstrassCurve<Rational>) -> Result<Self> {
        Self::with_factor_hints(curve, &[])
    }

    /// Like [`CurveData::new`], given integers whose prime factors are
    /// expected to cover the discriminant of the integral model (for example
    /// values of the factors of Δ(T) at a specialization). Only the part of
    /// the discriminant the hints miss is factored directly.
    pub fn with_factor_hints(curve: &WeierstrassCurve<Rational>, hints: &[Integer]) -> Result<Self> {
        let d = Rational::from(integral_scale(curve));
        let zero = Rational::zero();
        let integral = curve.transform(&d.recip(), &zero, &zero, &zero)?;
        let mut rest = integral.discriminant().to_integer().abs();
        let mut primes: Vec<Integer> = Vec::new();
        for h in hints.iter().filter(|h| !h.is_zero()) {
            for (p, _) in int_factor(h)? {
                if rest.is_multiple_of(&p) {
                    while rest.is_multiple_of(&p) {
                        rest /= &p;
                    }
                    primes.push(p);
                }
            }
        }
        if !rest.is_one() {
            primes.extend(int_factor(&rest)?.into_iter().map(|(p, _)| p));
        }
        primes.sort();
        let mut bad = Vec::new();
        for p in primes {
            bad.push(tate_at_prime(&integral, &p)?);
        }
        Ok(CurveData { curve: curve.clone(), scale: d, integral, bad })
    }

    pub fn curve(&self) -> &WeierstrassCurve<Rational> {
        &self.curve
    }

    pub fn bad_reduction(&self) -> &[ReductionData] {
        &self.bad
    }

    pub fn canonical_height(&self, p: &CurvePoint<Rational>, prec: Precision) -> Result<HeightRecordQ> {
        if !self.curve.contains(p) {
            return Err(Error::OffCurve);
        }
        let naive = naive_height_q(&self.curve, p);
        let zero = Rational::zero();
        let q = self.curve.transform_point(p, &self.scale.recip(), &zero, &zero, &zero)?;
        let Some(x) = q.x() else {
            return Ok(HeightRecordQ { point: p.clone(), naive, canonical: 0.0, local_terms: BTreeMap::new() });
        };
        let tol = libm::ldexp(1.0, -(prec.get().saturating_sub(10).min(1000) as i32));
        let mut terms = BTreeMap::new();
        terms.insert(Place::Infinity, local_height_arch(&self.integral, &q, tol)?);
        let mut den = x.denom().clone();
        for rd in &self.bad {
            let h = local_height_nonarch(&self.integral, &q, &rd.prime, rd)?;
            while den.is_multiple_of(&rd.prime) {
                den /= &rd.prime;
            }
            terms.insert(Place::Prime(rd.prime.clone()), h.value());
        }
        // remaining primes have good reduction and λ_p = log |x|_p
        if !den.is_one() {
            let e = den.sqrt();
            if &e * &e != den {
                return Err(Error::Inconsistency("denominator of x is not a square on an integral model".into()));
            }
            if e.bits() <= FACTOR_BITS {
                for (p, k) in int_factor(&e)? {
                    terms.insert(Place::Prime(p.clone()), 2.0 * k as f64 * ln_int(&p));
                }
            } else {
                terms.insert(Place::Cofactor(den.clone()), ln_int(&den));
            }
        }
        let canonical = terms.values().sum();
        Ok(HeightRecordQ { point: p.clone(), naive, canonical, local_terms: terms })
    }

    fn hhat(&self, p: &CurvePoint<Rational>, prec: Precision) -> Result<f64> {
        Ok(self.canonical_height(p, prec)?.canonical)
    }

    pub fn pairing(&self, p: &CurvePoint<Rational>, q: &CurvePoint<Rational>, prec: Precision) -> Result<f64> {
        let s = self.curve.add(p, q)?;
        Ok((self.hhat(&s, prec)? - self.hhat(p, prec)? - self.hhat(q, prec)?) / 2.0)
    }

    pub fn gram(&self, points: &[CurvePoint<Rational>], prec: Precision) -> Result<Gram> {
        let n = points.len();
        let diag: Vec<f64> = points.iter().map(|p| self.hhat(p, prec)).collect::<Result<_>>()?;
        let mut matrix = alloc::vec![alloc::vec![0.0; n]; n];
        for i in 0..n {
            matrix[i][i] = diag[i];
            for j in i + 1..n {
                let s = self.curve.add(&points[i], &points[j])?;
                let v = (self.hhat(&s, prec)? - diag[i] - diag[j]) / 2.0;
                matrix[i][j] = v;
                matrix[j][i] = v;
            }
        }
        let det = det_f64(&matrix);
        Ok(Gram { matrix, det })
    }

    pub fn torsion_test(&self, p: &CurvePoint<Rational>, bound: u32, prec: Precision) -> Result<bool> {
        let by_order = self.curve.order_up_to(p, bound)?.is_some();
        let by_height = self.hhat(p, prec)? < ZERO_HEIGHT;
        if by_order != by_height {
            return Err(Error::Inconsistency(alloc::format!(
                "point {} has order {} {} but canonical height {} zero",
                p,
                if by_order { "at most" } else { "above" },
                bound,
                if by_height { "is" } else { "is not" }
            )));
        }
        Ok(by_order)
    }
}

/// A symmetric Gram matrix of the height pairing and its determinant.
#[derive(Clone, Debug, PartialEq)]
pub struct Gram {
    pub matrix: Vec<Vec<f64>>,
    pub det: f64,
}

/// `log max(|num x|, |den x|)`, and 0 at infinity.
pub fn naive_height_q(_curve: &WeierstrassCurve<Rational>, p: &CurvePoint<Rational>) -> f64 {
    match p.x() {
        None => 0.0,
        Some(x) if x.is_zero() => 0.0,
        Some(x) => ln_int(&x.numer().abs()).max(ln_int(x.denom())),
    }
}

pub fn canonical_height_q(curve: &WeierstrassCurve<Rational>, p: &CurvePoint<Rational>) -> Result<HeightRecordQ> {
    canonical_height_q_with(curve, p, Precision::default())
}

pub fn canonical_height_q_with(
    curve: &WeierstrassCurve<Rational>,
    p: &CurvePoint<Rational>,
    prec: Precision,
) -> Result<HeightRecordQ> {
    CurveData::new(curve)?.canonical_height(p, prec)
}

/// `⟨P, Q⟩ = (ĥ(P+Q) − ĥ(P) − ĥ(Q))/2`.
pub fn height_pairing_q(
    curve: &WeierstrassCurve<Rational>,
    p: &CurvePoint<Rational>,
    q: &CurvePoint<Rational>,
) -> Result<f64> {
    CurveData::new(curve)?.pairing(p, q, Precision::default())
}

pub fn gram_q(curve: &WeierstrassCurve<Rational>, points: &[CurvePoint<Rational>]) -> Result<Gram> {
    CurveData::new(curve)?.gram(points, Precision::default())
}

/// True iff `nP = O` for some `1 ≤ n ≤ bound`; fails with
/// [`Error::Inconsistency`] when that disagrees with `ĥ(P) < 1e−10`.
pub fn torsion_test_q(curve: &WeierstrassCurve<Rational>, p: &CurvePoint<Rational>, bound: u32) -> Result<bool> {
    CurveData::new(curve)?.torsion_test(p, bound, Precision::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ri(n: i64) -> Rational {
        Rational::from(Integer::from(n))
    }

    fn curve(a: [i64; 5]) -> WeierstrassCurve<Rational> {
        WeierstrassCurve::new(ri(a[0]), ri(a[1]), ri(a[2]), ri(a[3]), ri(a[4])).unwrap()
    }

    fn pt(x: i64, y: i64) -> CurvePoint<Rational> {
        CurvePoint::affine(ri(x), ri(y))
    }

    #[test]
    fn naive_heights() {
        let e = curve([0, 0, 1, -1, 0]);
        let q = |n: i64, d: i64| CurvePoint::affine(Rational::new(n.into(), d.into()), ri(0));
        assert!((naive_height_q(&e, &q(2, 1)) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(naive_height_q(&e, &q(0, 1)), 0.0);
        assert!((naive_height_q(&e, &q(25, 4)) - 25f64.ln()).abs() < 1e-15);
        assert_eq!(naive_height_q(&e, &CurvePoint::Infinity), 0.0);
    }

    #[test]
    fn thirty_seven_a() {
        let e = curve([0, 0, 1, -1, 0]);
        let r = canonical_height_q(&e, &pt(0, 0)).unwrap();
        assert!((r.canonical - 0.0511114082).abs() < 1e-8, "{}", r.canonical);
        let sum: f64 = r.local_terms.values().sum();
        assert_eq!(sum, r.canonical);
        let p2 = e.double(&pt(0, 0)).unwrap();
        let r2 = canonical_height_q(&e, &p2).unwrap();
        assert!((r2.canonical - 4.0 * r.canonical).abs() < 1e-8);
    }

    #[test]
    fn torsion() {
        let e = curve([0, 0, 0, 1, 0]);
        let r = canonical_height_q(&e, &pt(0, 0)).unwrap();
        assert!(r.canonical.abs() < 1e-10);
        assert!(torsion_test_q(&e, &pt(0, 0), DEFAULT_TORSION_BOUND).unwrap());
        assert!(torsion_test_q(&e, &CurvePoint::Infinity, DEFAULT_TORSION_BOUND).unwrap());
        assert!(!torsion_test_q(&curve([0, 0, 1, -1, 0]), &pt(0, 0), DEFAULT_TORSION_BOUND).unwrap());
        // order 6 point with too small a bound
        let e6 = curve([0, 0, 0, 0, 1]);
        assert!(torsion_test_q(&e6, &pt(2, 3), 16).unwrap());
        assert!(matches!(torsion_test_q(&e6, &pt(2, 3), 3), Err(Error::Inconsistency(_))));
    }

    #[test]
    fn pairing_and_gram() {
        let e = curve([0, 0, 1, -1, 0]);
        let p = pt(0, 0);
        let h = canonical_height_q(&e, &p).unwrap().canonical;
        assert!((height_pairing_q(&e, &p, &p).unwrap() - h).abs() < 1e-10);
        let p2 = e.double(&p).unwrap();
        assert!(gram_q(&e, &[p.clone(), p2]).unwrap().det.abs() < 1e-8);
        assert!(gram_q(&e, &[p]).unwrap().det > 0.0);
    }

    #[test]
    fn non_integral_model() {
        // 37a with u = 2: aᵢ → aᵢ/2ⁱ, point (0, 0) is unchanged
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let e = WeierstrassCurve::new(q(0, 1), q(0, 1), q(1, 8), q(-1, 16), q(0, 1)).unwrap();
        let r = canonical_height_q(&e, &pt(0, 0)).unwrap();
        assert!((r.canonical - 0.0511114082).abs() < 1e-8, "{}", r.canonical);
    }
}
