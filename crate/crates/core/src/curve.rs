//! Long Weierstrass curves and the chord-tangent group law over any exact
//! [`Field`].

use core::fmt;

use crate::algebra::Field;
use crate::error::{Error, Result};

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` with nonzero discriminant.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassCurve<F> {
    a: [F; 5],
}

/// b2, b4, b6, b8, c4, c6 and Δ of a model.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariants<F> {
    pub b2: F,
    pub b4: F,
    pub b6: F,
    pub b8: F,
    pub c4: F,
    pub c6: F,
    pub disc: F,
}

fn k<F: Field>(n: i64) -> F {
    F::from_int(n)
}

/// Invariants of arbitrary coefficients, singular or not.
pub fn invariants<F: Field>(a: &[F; 5]) -> Invariants<F> {
    let [a1, a2, a3, a4, a6] = a.clone();
    let b2 = a1.square() + k::<F>(4) * a2.clone();
    let b4 = k::<F>(2) * a4.clone() + a1.clone() * a3.clone();
    let b6 = a3.square() + k::<F>(4) * a6.clone();
    let b8 = a1.square() * a6.clone() + k::<F>(4) * a2.clone() * a6.clone() - a1 * a3.clone() * a4.clone()
        + a2 * a3.square()
        - a4.square();
    let c4 = b2.square() - k::<F>(24) * b4.clone();
    let c6 = -(b2.square() * b2.clone()) + k::<F>(36) * b2.clone() * b4.clone() - k::<F>(216) * b6.clone();
    let disc = -(b2.square() * b8.clone()) - k::<F>(8) * b4.square() * b4.clone() - k::<F>(27) * b6.square()
        + k::<F>(9) * b2.clone() * b4.clone() * b6.clone();
    Invariants { b2, b4, b6, b8, c4, c6, disc }
}

impl<F: Field> WeierstrassCurve<F> {
    /// Fails with [`Error::Singular`] when Δ = 0.
    pub fn new(a1: F, a2: F, a3: F, a4: F, a6: F) -> Result<Self> {
        let a = [a1, a2, a3, a4, a6];
        if invariants(&a).disc.is_zero() {
            return Err(Error::Singular);
        }
        Ok(WeierstrassCurve { a })
    }

    /// `y² = x³ + a4·x + a6`.
    pub fn short(a4: F, a6: F) -> Result<Self> {
        Self::new(F::zero(), F::zero(), F::zero(), a4, a6)
    }

    pub fn coeffs(&self) -> &[F; 5] {
        &self.a
    }

    pub fn a1(&self) -> &F {
        &self.a[0]
    }
    pub fn a2(&self) -> &F {
        &self.a[1]
    }
    pub fn a3(&self) -> &F {
        &self.a[2]
    }
    pub fn a4(&self) -> &F {
        &self.a[3]
    }
    pub fn a6(&self) -> &F {
        &self.a[4]
    }

    pub fn invariants(&self) -> Invariants<F> {
        invariants(&self.a)
    }

    pub fn discriminant(&self) -> F {
        self.invariants().disc
    }

    pub fn j_invariant(&self) -> Result<F> {
        let inv = self.invariants();
        let c4 = inv.c4;
        (c4.square() * c4).checked_div(&inv.disc).ok_or(Error::Singular)
    }

    /// Applies `x = u²x' + r`, `y = u³y' + s·u²x' + t` and returns the model
    /// in the primed coordinates.
    pub fn transform(&self, u: &F, r: &F, s: &F, t: &F) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = self.a.clone();
        let ui = u.inv().ok_or(Error::DivisionByZero)?;
        let u2 = ui.square();
        let u3 = u2.clone() * ui.clone();
        let u4 = u2.square();
        let u6 = u3.square();
        let two = k::<F>(2);
        let three = k::<F>(3);
        let na1 = (a1.clone() + two.clone() * s.clone()) * ui;
        let na2 = (a2.clone() - s.clone() * a1.clone() + three.clone() * r.clone() - s.square()) * u2;
        let na3 = (a3.clone() + r.clone() * a1.clone() + two.clone() * t.clone()) * u3;
        let na4 = (a4.clone() - s.clone() * a3.clone() + two.clone() * r.clone() * a2.clone()
            - (t.clone() + r.clone() * s.clone()) * a1.clone()
            + three * r.square()
            - two * s.clone() * t.clone())
            * u4;
        let na6 = (a6 + r.clone() * a4 + r.square() * a2 + r.square() * r.clone()
            - t.clone() * a3
            - t.square()
            - r.clone() * t.clone() * a1)
            * u6;
        Self::new(na1, na2, na3, na4, na6)
    }

    /// Image of a point of `self` on `self.transform(u, r, s, t)`.
    pub fn transform_point(&self, p: &CurvePoint<F>, u: &F, r: &F, s: &F, t: &F) -> Result<CurvePoint<F>> {
        match p {
            CurvePoint::Infinity => Ok(CurvePoint::Infinity),
            CurvePoint::Affine { x, y } => {
                let ui = u.inv().ok_or(Error::DivisionByZero)?;
                let u2 = ui.square();
                let u3 = u2.clone() * ui;
                let xr = x.clone() - r.clone();
                let nx = xr.clone() * u2;
                let ny = (y.clone() - s.clone() * xr - t.clone()) * u3;
                Ok(CurvePoint::Affine { x: nx, y: ny })
            }
        }
    }

    pub fn contains(&self, p: &CurvePoint<F>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                let [a1, a2, a3, a4, a6] = self.a.clone();
                let lhs = y.square() + a1 * x.clone() * y.clone() + a3 * y.clone();
                let rhs = x.square() * x.clone() + a2 * x.square() + a4 * x.clone() + a6;
                lhs == rhs
            }
        }
    }

    fn check(&self, p: &CurvePoint<F>) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OffCurve)
        }
    }

    pub fn neg(&self, p: &CurvePoint<F>) -> Result<CurvePoint<F>> {
        self.check(p)?;
        Ok(self.neg_unchecked(p))
    }

    pub fn add(&self, p: &CurvePoint<F>, q: &CurvePoint<F>) -> Result<CurvePoint<F>> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub fn double(&self, p: &CurvePoint<F>) -> Result<CurvePoint<F>> {
        self.add(p, p)
    }

    /// `n·P` by double-and-add; negative `n` uses −P.
    pub fn mul_scalar(&self, n: i64, p: &CurvePoint<F>) -> Result<CurvePoint<F>> {
        self.check(p)?;
        Ok(self.mul_unchecked(n, p))
    }

    pub(crate) fn neg_unchecked(&self, p: &CurvePoint<F>) -> CurvePoint<F> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: -y.clone() - self.a[0].clone() * x.clone() - self.a[2].clone(),
            },
        }
    }

    pub(crate) fn add_unchecked(&self, p: &CurvePoint<F>, q: &CurvePoint<F>) -> CurvePoint<F> {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, _] = self.a.clone();
        let lambda = if x1 == x2 {
            let denom = k::<F>(2) * y1.clone() + a1.clone() * x1.clone() + a3.clone();
            if y1 != y2 || denom.is_zero() {
                return CurvePoint::Infinity;
            }
            let num = k::<F>(3) * x1.square() + k::<F>(2) * a2.clone() * x1.clone() + a4 - a1.clone() * y1.clone();
            num.checked_div(&denom).expect("nonzero denominator")
        } else {
            (y2.clone() - y1.clone()).checked_div(&(x2.clone() - x1.clone())).expect("distinct x")
        };
        let nu = y1.clone() - lambda.clone() * x1.clone();
        let x3 = lambda.square() + a1.clone() * lambda.clone() - a2 - x1.clone() - x2.clone();
        let y3 = -(lambda + a1) * x3.clone() - nu - a3;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    pub(crate) fn mul_unchecked(&self, n: i64, p: &CurvePoint<F>) -> CurvePoint<F> {
        let base = if n < 0 { self.neg_unchecked(p) } else { p.clone() };
        let mut m = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut b = base;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add_unchecked(&acc, &b);
            }
            m >>= 1;
            if m > 0 {
                b = self.add_unchecked(&b, &b);
            }
        }
        acc
    }

    /// Smallest `1 ≤ n ≤ bound` with `n·P = O`, if any.
    pub fn order_up_to(&self, p: &CurvePoint<F>, bound: u32) -> Result<Option<u32>> {
        self.check(p)?;
        let mut q = p.clone();
        for n in 1..=bound {
            if q.is_infinity() {
                return Ok(Some(n));
            }
            q = self.add_unchecked(&q, p);
        }
        Ok(None)
    }
}

impl<F: Field> fmt::Display for WeierstrassCurve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}, {}]", self.a[0], self.a[1], self.a[2], self.a[3], self.a[4])
    }
}

/// A point of a Weierstrass model: the point at infinity or an affine point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint<F> {
    Infinity,
    Affine { x: F, y: F },
}

impl<F> CurvePoint<F> {
    pub fn affine(x: F, y: F) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&F> {
        match self {
            CurvePoint::Affine { x, .. } => Some(x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&F> {
        match self {
            CurvePoint::Affine { y, .. } => Some(y),
            CurvePoint::Infinity => None,
        }
    }
}

impl<F: fmt::Display> fmt::Display for CurvePoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { x, y } => write!(f, "({}, {})", x, y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_ratfunc, Rational, RationalFunction};
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn qc(c: [i64; 5]) -> WeierstrassCurve<Rational> {
        WeierstrassCurve::new(q(c[0]), q(c[1]), q(c[2]), q(c[3]), q(c[4])).unwrap()
    }

    #[test]
    fn discriminants_and_j() {
        assert_eq!(qc([0, 0, 0, 1, 0]).discriminant(), q(-64));
        assert_eq!(qc([0, 0, 0, 0, 1]).j_invariant().unwrap(), q(0));
        assert_eq!(qc([0, 0, 1, -1, 0]).discriminant(), q(37));
        assert_eq!(WeierstrassCurve::short(q(0), q(0)), Err(Error::Singular));
    }

    #[test]
    fn group_law_examples() {
        let e = qc([0, 0, 0, 0, 1]);
        let p = CurvePoint::affine(q(2), q(3));
        assert_eq!(e.double(&p).unwrap(), CurvePoint::affine(q(0), q(1)));
        assert_eq!(e.add(&p, &CurvePoint::Infinity).unwrap(), p);
        assert_eq!(e.add(&p, &e.neg(&p).unwrap()).unwrap(), CurvePoint::Infinity);
        assert_eq!(e.order_up_to(&p, 16).unwrap(), Some(6));
        assert_eq!(e.add(&p, &CurvePoint::affine(q(1), q(1))), Err(Error::OffCurve));
    }

    #[test]
    fn weierstrass_identities_over_function_field() {
        let t = |s: &str| parse_ratfunc(s, "T").unwrap();
        let e = WeierstrassCurve::new(t("T"), t("1"), t("T^2"), t("-T^2"), t("T^2 + 1")).unwrap();
        let i = e.invariants();
        let c = |n| RationalFunction::from_int(n);
        assert_eq!(c(4) * i.b8.clone(), i.b2.clone() * i.b6.clone() - i.b4.square());
        assert_eq!(c(1728) * i.disc.clone(), i.c4.square() * i.c4.clone() - i.c6.square());
        let s = WeierstrassCurve::short(t("-T^2"), t("T^2")).unwrap();
        let p = CurvePoint::affine(t("T"), t("T"));
        let p2 = s.double(&p).unwrap();
        assert_eq!(p2.x().unwrap(), &t("T^2 - 2T"));
        assert!(s.contains(&p2));
    }

    #[test]
    fn coordinate_change_preserves_points() {
        let e = qc([1, -1, 1, -3, 6]);
        let p = CurvePoint::affine(q(1), q(1));
        assert!(e.contains(&p));
        let (u, r, s, t) = (q(2), q(-1), q(3), Rational::new(1.into(), 2.into()));
        let e2 = e.transform(&u, &r, &s, &t).unwrap();
        let p2 = e.transform_point(&p, &u, &r, &s, &t).unwrap();
        assert!(e2.contains(&p2));
        let u12 = q(4096);
        assert_eq!(e2.discriminant() * u12, e.discriminant());
    }

    // Random points: pick a curve through two given points by solving for a4, a6.
    fn curve_through(x1: i64, y1: i64, x2: i64, y2: i64, a1: i64, a3: i64) -> Option<WeierstrassCurve<Rational>> {
        if x1 == x2 {
            return None;
        }
        let lhs = |x: i64, y: i64| q(y * y + a1 * x * y + a3 * y - x * x * x);
        // a4 x + a6 = lhs
        let (l1, l2) = (lhs(x1, y1), lhs(x2, y2));
        let a4 = (l2.clone() - l1.clone()) / q(x2 - x1);
        let a6 = l1 - a4.clone() * q(x1);
        WeierstrassCurve::new(q(a1), q(0), q(a3), a4, a6).ok()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn group_axioms(x1 in -5i64..5, y1 in -5i64..5, x2 in -5i64..5, y2 in -5i64..5, a1 in 0i64..2, a3 in 0i64..2, m in -4i64..5, n in -4i64..5) {
            let Some(e) = curve_through(x1, y1, x2, y2, a1, a3) else { return Ok(()) };
            let p = CurvePoint::affine(q(x1), q(y1));
            let r = CurvePoint::affine(q(x2), q(y2));
            let s = e.add(&p, &r).unwrap();
            prop_assert!(e.contains(&s));
            let lhs = e.add(&e.add(&p, &r).unwrap(), &s).unwrap();
            let rhs = e.add(&p, &e.add(&r, &s).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let sum = e.add(&e.mul_scalar(m, &p).unwrap(), &e.mul_scalar(n, &p).unwrap()).unwrap();
            prop_assert_eq!(e.mul_scalar(m + n, &p).unwrap(), sum);
            let inv = e.invariants();
            prop_assert_eq!(q(1728) * inv.disc, inv.c4.clone() * inv.c4.clone() * inv.c4 - inv.c6.clone() * inv.c6);
        }
    }
}
