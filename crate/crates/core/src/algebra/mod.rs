//! Exact arithmetic kernel.
//!
//! Integers and rationals come from `num-bigint`/`num-rational`; on top of them
//! this module provides univariate polynomials and rational functions over ℚ,
//! integer factorization, factorization of polynomials over ℚ, rational
//! reconstruction and the small expression grammar used by curve files.

mod intfactor;
pub mod modp;
mod parse;
mod poly;
mod polyfactor;
mod ratfunc;
mod rational;
mod reconstruct;
pub(crate) mod zpoly;

use core::fmt::{Debug, Display};
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

pub use intfactor::{int_factor, is_probable_prime};
pub use parse::{parse_expr, parse_form, parse_rational, parse_ratfunc, BinaryForm, Expr};
pub use poly::{poly_gcd, Degree, Polynomial};
pub use polyfactor::{factor_over_q, squarefree_decomposition};
pub use ratfunc::{ratfunc_eval, RationalFunction};
pub use rational::{int_valuation, normalize_rational, valuation, Integer, Rational};
pub use reconstruct::rational_reconstruct;
pub(crate) use reconstruct::lcm_u64;

/// An exact field: the coefficient domain of a Weierstrass model.
///
/// Implemented for [`Rational`] (ℚ) and [`RationalFunction`] (ℚ(T)). The group
/// law is written once against this trait.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_int(n: i64) -> Self;

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.clone() * r)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_int(n: i64) -> Self {
        Rational::from_integer(Integer::from(n))
    }
}
