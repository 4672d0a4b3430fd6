use alloc::string::String;
use core::fmt;

use crate::algebra::Rational;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the height machinery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by an exact zero.
    DivisionByZero,
    /// gcd of two zero polynomials.
    UndefinedGcd,
    /// A rational function was evaluated at one of its poles.
    Pole { place: Rational },
    /// Malformed input text; `column` is a 1-based character offset.
    Parse { column: usize, message: String },
    /// Every form of a system vanishes at the point.
    BasePoint,
    /// An argument is outside the operation's domain.
    Argument(String),
    /// The Weierstrass model has zero discriminant.
    Singular,
    /// A point does not satisfy the curve equation.
    OffCurve,
    /// The fiber over a parameter value is singular or has a coefficient pole.
    BadFiber { t: Rational },
    /// Two independent criteria disagree (usually a precision problem).
    Inconsistency(String),
    /// Input that is well formed but outside what is implemented.
    Unsupported(String),
    /// A documented precondition of the operation does not hold.
    Precondition(String),
    /// A computation budget (depth, degree, node count) was exhausted.
    Resource(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::UndefinedGcd => write!(f, "gcd of two zero polynomials is undefined"),
            Error::Pole { place } => write!(f, "pole at {}", place),
            Error::Parse { column, message } => write!(f, "parse error at column {}: {}", column, message),
            Error::BasePoint => write!(f, "all forms vanish at the point (base point)"),
            Error::Argument(m) => write!(f, "invalid argument: {}", m),
            Error::Singular => write!(f, "singular Weierstrass model (discriminant is zero)"),
            Error::OffCurve => write!(f, "point is not on the curve"),
            Error::BadFiber { t } => write!(f, "bad fiber at t = {}", t),
            Error::Inconsistency(m) => write!(f, "inconsistent results: {}", m),
            Error::Unsupported(m) => write!(f, "unsupported input: {}", m),
            Error::Precondition(m) => write!(f, "precondition failed: {}", m),
            Error::Resource(m) => write!(f, "resource budget exceeded: {}", m),
        }
    }
}

impl core::error::Error for Error {}
