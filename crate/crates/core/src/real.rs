//! Radix-2 multiprecision helpers on top of `astro-float`, plus cheap `f64`
//! logarithms of big integers for naive heights.

use alloc::vec::Vec;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::Rational;

pub const RM: RoundingMode = RoundingMode::ToEven;

/// Significand precision in bits for approximate computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision(usize);

impl Precision {
    pub const DEFAULT_BITS: usize = 64;

    /// At least 53 bits; rounded up to whole words by the float backend.
    pub fn bits(bits: usize) -> Self {
        Precision(bits.max(53))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Relative accuracy 2^(−bits) as an `f64` (floored at 1e−300).
    pub fn epsilon(self) -> f64 {
        libm::ldexp(1.0, -(self.0.min(990) as i32))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(Self::DEFAULT_BITS)
    }
}

/// Exact conversion of an integer (the float carries as many bits as needed).
pub fn int_to_float(n: &BigInt) -> BigFloat {
    if n.is_zero() {
        return BigFloat::from_u64(0, 64);
    }
    let bits = n.bits();
    let words = bits.div_ceil(64);
    let shifted = n.magnitude() << (words * 64 - bits);
    let digits: Vec<u64> = shifted.to_u64_digits();
    let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
    BigFloat::from_words(&digits, sign, bits as i32)
}

pub fn rational_to_float(q: &Rational, p: usize) -> BigFloat {
    int_to_float(q.numer()).div(&int_to_float(q.denom()), p, RM)
}

/// Nearest `f64` (truncating below 64 significant bits).
pub fn float_to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf() {
        return if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    match x.as_raw_parts() {
        None => f64::NAN,
        Some((words, _, sign, e, _)) => {
            let top = match words.last() {
                Some(&w) if w != 0 => w,
                _ => return 0.0,
            };
            let v = libm::ldexp(top as f64, e - 64);
            if sign == Sign::Neg {
                -v
            } else {
                v
            }
        }
    }
}

pub fn consts() -> Consts {
    Consts::new().expect("constant cache allocation")
}

/// Natural log of a positive integer, to about 1e−16 relative accuracy.
pub fn ln_int(n: &BigInt) -> f64 {
    debug_assert!(n.is_positive());
    let bits = n.bits();
    if bits <= 64 {
        return libm::log(n.to_u64().unwrap_or(1) as f64);
    }
    let shift = bits - 64;
    let top = (n.magnitude() >> shift).to_u64().unwrap_or(u64::MAX);
    libm::log(top as f64) + shift as f64 * core::f64::consts::LN_2
}

/// `ln |q|` for a nonzero rational.
pub fn ln_abs_rational(q: &Rational) -> f64 {
    ln_int(&q.numer().abs()) - ln_int(q.denom())
}
