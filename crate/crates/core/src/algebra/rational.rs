use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;

/// Exact rational in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Builds `n/d` in lowest terms with a positive denominator.
pub fn normalize_rational(n: Integer, d: Integer) -> Result<Rational> {
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn int_valuation(n: &Integer, p: &Integer) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational; `None` for zero.
pub fn valuation(x: &Rational, p: &Integer) -> Option<i64> {
    let vn = int_valuation(x.numer(), p)? as i64;
    let vd = int_valuation(x.denom(), p).unwrap_or(0) as i64;
    Some(vn - vd)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        normalize_rational(n.into(), d.into()).unwrap()
    }

    #[test]
    fn normalizes() {
        assert_eq!(q(2, 4), Rational::new(1.into(), 2.into()));
        let r = q(3, -6);
        assert_eq!(r.numer(), &BigInt::from(-1));
        assert_eq!(r.denom(), &BigInt::from(2));
        let z = q(0, 5);
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(normalize_rational(1.into(), 0.into()), Err(Error::DivisionByZero));
    }

    #[test]
    fn valuations() {
        let p = BigInt::from(2);
        assert_eq!(valuation(&q(48, 1), &p), Some(4));
        assert_eq!(valuation(&q(3, 8), &p), Some(-3));
        assert_eq!(valuation(&q(0, 1), &p), None);
    }
}
