use alloc::string::String;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{poly_gcd, Field, Polynomial, Rational};
use crate::error::{Error, Result};

/// Element of ℚ(T) in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = poly_gcd(&num, &den)?;
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let lc = d.leading().cloned().unwrap_or_else(Rational::one);
        if !lc.is_one() {
            let inv = lc.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RationalFunction { num: n, den: d })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn var() -> Self {
        Self::from_poly(Polynomial::var())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The constant value if this function does not depend on `T`.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Degree as a morphism P¹ → P¹: max(deg num, deg den).
    pub fn morphism_degree(&self) -> usize {
        self.num.deg().unwrap_or(0).max(self.den.deg().unwrap_or(0))
    }

    /// Order of vanishing at the place T = ∞ (deg den − deg num); `None` for 0.
    pub fn valuation_at_infinity(&self) -> Option<i64> {
        let dn = self.num.deg()? as i64;
        Some(self.den.deg().unwrap_or(0) as i64 - dn)
    }

    /// Order of vanishing along the irreducible polynomial `place`; `None` for 0.
    pub fn valuation_at(&self, place: &Polynomial) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        Some(self.num.valuation_at(place) as i64 - self.den.valuation_at(place) as i64)
    }

    /// Value at `t`; a pole is reported with its location.
    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::Pole { place: t.clone() });
        }
        Ok(self.num.eval(t) / d)
    }

    /// `f(1/S)` as an element of ℚ(S).
    pub fn invert_variable(&self) -> Self {
        let n = self.num.deg().unwrap_or(0).max(self.den.deg().unwrap_or(0));
        RationalFunction::new(self.num.reverse(n), self.den.reverse(n)).expect("nonzero denominator")
    }

    pub fn pow(&self, n: u32) -> Self {
        RationalFunction { num: self.num.pow(n), den: self.den.pow(n) }
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.display_with(var);
        }
        let n = self.num.display_with(var);
        let d = self.den.display_with(var);
        let wrap = |s: String, p: &Polynomial| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                alloc::format!("({})", s)
            } else {
                s
            }
        };
        alloc::format!("{}/{}", wrap(n, &self.num), wrap(d, &self.den))
    }
}

/// Evaluates `f` at `t`, reporting a pole as an error.
pub fn ratfunc_eval(f: &RationalFunction, t: &Rational) -> Result<Rational> {
    f.eval(t)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("T"))
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Polynomial::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }
}

impl Add for RationalFunction {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den).expect("nonzero");
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(n, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Sub for RationalFunction {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for RationalFunction {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Neg for RationalFunction {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunction { num: -self.num, den: self.den }
    }
}

impl Field for RationalFunction {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RationalFunction::new(self.den.clone(), self.num.clone()).expect("nonzero"))
        }
    }

    fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn f() -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(&[1, 0, 1]), Polynomial::from_ints(&[-1, 1])).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ratfunc_eval(&f(), &q(2)).unwrap(), q(5));
        assert_eq!(ratfunc_eval(&f(), &q(0)).unwrap(), q(-1));
        assert_eq!(ratfunc_eval(&f(), &q(1)), Err(Error::Pole { place: q(1) }));
    }

    #[test]
    fn reduces_and_normalizes() {
        let g = RationalFunction::new(Polynomial::from_ints(&[-2, 0, 2]), Polynomial::from_ints(&[-3, 3])).unwrap();
        assert_eq!(g.num(), &Polynomial::from_ints(&[1, 1]).scale(&Rational::new(2.into(), 3.into())));
        assert_eq!(g.den(), &Polynomial::one());
        assert_eq!(g.to_string(), "(2/3)*T + 2/3");
    }

    fn small_rf() -> impl Strategy<Value = RationalFunction> {
        (proptest::collection::vec(-4i64..5, 1..4), proptest::collection::vec(-4i64..5, 1..3)).prop_filter_map(
            "nonzero den",
            |(n, d)| RationalFunction::new(Polynomial::from_ints(&n), Polynomial::from_ints(&d)).ok(),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn evaluation_is_a_ring_homomorphism(a in small_rf(), b in small_rf(), t in -5i64..6) {
            let t = q(t);
            if let (Ok(x), Ok(y)) = (a.eval(&t), b.eval(&t)) {
                prop_assert_eq!((a.clone() + b.clone()).eval(&t).unwrap(), &x + &y);
                prop_assert_eq!((a * b).eval(&t).unwrap(), x * y);
            }
        }
    }
}
