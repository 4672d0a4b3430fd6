//! Text grammar for coefficients, sections and forms:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := integer | name | '(' expr ')'
//! ```
//!
//! Juxtaposition is implicit multiplication (`2T`, `T(T+1)`). Errors carry a
//! 1-based column.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Field, Integer, Polynomial, Rational, RationalFunction};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(Integer),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Divisor column is kept for error reporting on division by zero.
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(Integer),
    Name(String),
    Op(char),
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse { column, message: message.into() }
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Int(text.parse().map_err(|_| err(col, "bad integer"))?), col));
        } else if c.is_alphabetic() {
            // variable names are single letters, so `xy` reads as `x*y`
            out.push((Tok::Name(c.to_string()), col));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(err(col, alloc::format!("unexpected character '{}'", c)));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [&'a str],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                self.pos += 1;
                let col = self.col();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), col);
            } else if matches!(self.peek(), Some(Tok::Int(_) | Tok::Name(_) | Tok::Op('('))) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let col = self.col();
        match self.toks.get(self.pos) {
            Some((Tok::Int(n), _)) => {
                let e = n.to_i64().filter(|e| *e <= 4096).ok_or_else(|| err(col, "exponent too large"))?;
                self.pos += 1;
                Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
            }
            _ => Err(err(col, "expected an integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Int(n), _)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some((Tok::Name(name), _)) => {
                if !self.vars.contains(&name.as_str()) {
                    return Err(err(col, alloc::format!("unknown variable '{}'", name)));
                }
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            Some((Tok::Op('('), _)) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(err(self.col(), "expected ')'"));
                }
                Ok(e)
            }
            Some((Tok::Op(c), _)) => Err(err(col, alloc::format!("unexpected '{}'", c))),
            None => Err(err(col, "unexpected end of input")),
        }
    }
}

/// Parses `s` allowing the variable names in `vars`.
pub fn parse_expr(s: &str, vars: &[&str]) -> Result<Expr> {
    let toks = lex(s)?;
    let end = s.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, vars, end };
    if p.toks.is_empty() {
        return Err(err(1, "empty expression"));
    }
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(err(p.col(), "unexpected trailing input"));
    }
    Ok(e)
}

fn eval_field<F: Field>(e: &Expr, var: &dyn Fn(&str) -> F) -> Result<F> {
    Ok(match e {
        Expr::Int(n) => {
            let mut acc = F::zero();
            // integers of any size: build from base 2^32 limbs
            let base = F::from_int(1 << 32);
            let (sign, digits) = n.to_u32_digits();
            for d in digits.iter().rev() {
                acc = acc * base.clone() + F::from_int(*d as i64);
            }
            if sign == num_bigint::Sign::Minus {
                -acc
            } else {
                acc
            }
        }
        Expr::Var(name) => var(name),
        Expr::Neg(a) => -eval_field(a, var)?,
        Expr::Add(a, b) => eval_field(a, var)? + eval_field(b, var)?,
        Expr::Sub(a, b) => eval_field(a, var)? - eval_field(b, var)?,
        Expr::Mul(a, b) => eval_field(a, var)? * eval_field(b, var)?,
        Expr::Div(a, b, col) => {
            let d = eval_field(b, var)?;
            eval_field(a, var)?.checked_div(&d).ok_or_else(|| err(*col, "division by zero"))?
        }
        Expr::Pow(a, k) => {
            let b = eval_field(a, var)?;
            let b = if *k < 0 { b.inv().ok_or_else(|| err(1, "zero to a negative power"))? } else { b };
            let mut acc = F::one();
            for _ in 0..k.unsigned_abs() {
                acc = acc * b.clone();
            }
            acc
        }
    })
}

/// Parses a constant rational such as `-3/4`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let e = parse_expr(s, &[])?;
    eval_field::<Rational>(&e, &|_| unreachable!("no variables allowed"))
}

/// Parses an element of ℚ(var).
pub fn parse_ratfunc(s: &str, var: &str) -> Result<RationalFunction> {
    let e = parse_expr(s, &[var])?;
    eval_field::<RationalFunction>(&e, &|_| RationalFunction::var())
}

/// Homogeneous integer form in `(x, y)`; `coeffs[i]` multiplies `x^i y^(d-i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    degree: u32,
    coeffs: Vec<Integer>,
}

impl BinaryForm {
    pub fn new(degree: u32, coeffs: Vec<Integer>) -> Result<Self> {
        if coeffs.len() != degree as usize + 1 {
            return Err(Error::Argument("form needs degree + 1 coefficients".into()));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::Argument("zero form".into()));
        }
        Ok(BinaryForm { degree, coeffs })
    }

    /// `x^i · y^(d-i)`.
    pub fn monomial(i: u32, d: u32) -> Self {
        let mut c = alloc::vec![Integer::zero(); d as usize + 1];
        c[i as usize] = Integer::one();
        BinaryForm { degree: d, coeffs: c }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Integer, y: &Integer) -> Integer {
        let d = self.degree as usize;
        let mut acc = Integer::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * num_traits::pow(x.clone(), i) * num_traits::pow(y.clone(), d - i);
            }
        }
        acc
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut c = alloc::vec![Integer::zero(); (self.degree + other.degree) as usize + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        BinaryForm { degree: self.degree + other.degree, coeffs: c }
    }

    /// Dehomogenization `f(T, 1)`.
    pub fn dehomogenize(&self) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    /// Maximum absolute coefficient.
    pub fn max_coeff(&self) -> Integer {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let i = i as u32;
            let mut s = String::new();
            let var = |name: &str, k: u32| match k {
                0 => String::new(),
                1 => name.to_string(),
                k => alloc::format!("{}^{}", name, k),
            };
            let mono: Vec<String> = [var("x", i), var("y", d - i)].into_iter().filter(|m| !m.is_empty()).collect();
            let a = c.abs();
            if mono.is_empty() || !a.is_one() {
                s.push_str(&a.to_string());
            }
            for m in mono {
                if !s.is_empty() {
                    s.push('*');
                }
                s.push_str(&m);
            }
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{}", s)?,
                (true, false) => write!(f, "{}", s)?,
                (false, true) => write!(f, " - {}", s)?,
                (false, false) => write!(f, " + {}", s)?,
            }
            first = false;
        }
        Ok(())
    }
}

type Bivariate = BTreeMap<(u32, u32), Rational>;

fn bv_clean(mut m: Bivariate) -> Bivariate {
    m.retain(|_, c| !c.is_zero());
    m
}

fn bv_mul(a: &Bivariate, b: &Bivariate) -> Bivariate {
    let mut out = Bivariate::new();
    for ((i, j), x) in a {
        for ((k, l), y) in b {
            *out.entry((i + k, j + l)).or_insert_with(Rational::zero) += x * y;
        }
    }
    bv_clean(out)
}

fn bv_add(a: &Bivariate, b: &Bivariate, sign: i32) -> Bivariate {
    let mut out = a.clone();
    for (k, v) in b {
        let e = out.entry(*k).or_insert_with(Rational::zero);
        if sign < 0 {
            *e -= v;
        } else {
            *e += v;
        }
    }
    bv_clean(out)
}

fn eval_bivariate(e: &Expr) -> Result<Bivariate> {
    let constant = |c: Rational| bv_clean(Bivariate::from([((0, 0), c)]));
    Ok(match e {
        Expr::Int(n) => constant(Rational::from_integer(n.clone())),
        Expr::Var(v) => Bivariate::from([(if v == "x" { (1, 0) } else { (0, 1) }, Rational::one())]),
        Expr::Neg(a) => bv_add(&Bivariate::new(), &eval_bivariate(a)?, -1),
        Expr::Add(a, b) => bv_add(&eval_bivariate(a)?, &eval_bivariate(b)?, 1),
        Expr::Sub(a, b) => bv_add(&eval_bivariate(a)?, &eval_bivariate(b)?, -1),
        Expr::Mul(a, b) => bv_mul(&eval_bivariate(a)?, &eval_bivariate(b)?),
        Expr::Div(a, b, col) => {
            let d = eval_bivariate(b)?;
            let c = match d.iter().next() {
                Some(((0, 0), c)) if d.len() == 1 => c.clone(),
                _ => return Err(err(*col, "forms may only be divided by nonzero constants")),
            };
            let inv = constant(c.recip());
            bv_mul(&eval_bivariate(a)?, &inv)
        }
        Expr::Pow(a, k) => {
            if *k < 0 {
                return Err(err(1, "negative exponent in a form"));
            }
            let b = eval_bivariate(a)?;
            let mut acc = constant(Rational::one());
            for _ in 0..*k {
                acc = bv_mul(&acc, &b);
            }
            acc
        }
    })
}

/// Parses a homogeneous form in `x, y` with integer coefficients.
pub fn parse_form(s: &str) -> Result<BinaryForm> {
    let e = parse_expr(s, &["x", "y"])?;
    let m = eval_bivariate(&e)?;
    let degree = match m.keys().next() {
        Some((i, j)) => i + j,
        None => return Err(err(1, "zero form")),
    };
    let mut coeffs = alloc::vec![Integer::zero(); degree as usize + 1];
    for ((i, j), c) in &m {
        if i + j != degree {
            return Err(err(1, "form is not homogeneous"));
        }
        if !c.is_integer() {
            return Err(err(1, "form coefficients must be integers"));
        }
        coeffs[*i as usize] = c.to_integer();
    }
    BinaryForm::new(degree, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn constants() {
        assert_eq!(parse_rational("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_rational("-(1/2)^2 + 1").unwrap(), q(3, 4));
        assert_eq!(parse_rational("2^-2").unwrap(), q(1, 4));
        assert_eq!(parse_rational("123456789012345678901234567890").unwrap().to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn rational_functions() {
        let f = parse_ratfunc("(-1)*T^2 + 3/4", "T").unwrap();
        assert_eq!(f.num(), &Polynomial::from_coeffs(alloc::vec![q(3, 4), q(0, 1), q(-1, 1)]));
        let g = parse_ratfunc("(T^2+1)/(T-1)", "T").unwrap();
        assert_eq!(g.eval(&q(2, 1)).unwrap(), q(5, 1));
        let h = parse_ratfunc("2T(T+1) - T^2", "T").unwrap();
        assert_eq!(h.num(), &Polynomial::from_ints(&[0, 2, 1]));
        let u = parse_ratfunc("u^2 - 1", "u").unwrap();
        assert_eq!(u.num().deg(), Some(2));
        assert_eq!(parse_ratfunc("-T^2", "T").unwrap().num(), &Polynomial::from_ints(&[0, 0, -1]));
    }

    #[test]
    fn errors_carry_columns() {
        assert_eq!(parse_ratfunc("T + * 2", "T").unwrap_err(), err(5, "unexpected '*'"));
        assert!(matches!(parse_ratfunc("T + x", "T"), Err(Error::Parse { column: 5, .. })));
        assert!(matches!(parse_ratfunc("(T + 1", "T"), Err(Error::Parse { column: 7, .. })));
        assert!(matches!(parse_ratfunc("1/(T-T)", "T"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(parse_rational("3 $"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(parse_rational(""), Err(Error::Parse { column: 1, .. })));
    }

    #[test]
    fn forms() {
        let f = parse_form("x^2 - y^2").unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.eval(&2.into(), &1.into()), 3.into());
        assert_eq!(parse_form("x*y").unwrap().coeffs(), &[0.into(), 1.into(), 0.into()]);
        assert!(parse_form("x^2 + y").is_err());
        assert!(parse_form("x/2").is_err());
        assert_eq!(f.to_string(), "x^2 - y^2");
        assert_eq!(parse_form("2xy").unwrap().to_string(), "2*x*y");
    }
}
