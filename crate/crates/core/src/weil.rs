//! Weil heights on P¹(ℚ): the logarithmic height of a point, heights
//! attached to systems of binary forms, Northcott enumeration and the
//! degree-ratio table.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::algebra::{poly_gcd, BinaryForm, Integer, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::real::ln_int;

/// A point `[p : q]` of P¹(ℚ) with coprime integer coordinates, `q > 0` or
/// `[1 : 0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPointQ {
    p: Integer,
    q: Integer,
}

impl ProjPointQ {
    pub fn new(p: Integer, q: Integer) -> Result<Self> {
        if p.is_zero() && q.is_zero() {
            return Err(Error::Argument("[0 : 0] is not a point".into()));
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / &g, q / &g);
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Ok(ProjPointQ { p, q })
    }

    pub fn from_rational(t: &Rational) -> Self {
        ProjPointQ { p: t.numer().clone(), q: t.denom().clone() }
    }

    pub fn infinity() -> Self {
        ProjPointQ { p: Integer::one(), q: Integer::zero() }
    }

    pub fn p(&self) -> &Integer {
        &self.p
    }

    pub fn q(&self) -> &Integer {
        &self.q
    }

    /// The affine coordinate `p/q`, `None` at infinity.
    pub fn to_rational(&self) -> Option<Rational> {
        (!self.q.is_zero()).then(|| Rational::new(self.p.clone(), self.q.clone()))
    }

    /// `max(|p|, |q|)`.
    pub fn naive_size(&self) -> Integer {
        self.p.abs().max(self.q.clone())
    }
}

impl fmt::Display for ProjPointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.p, self.q)
    }
}

/// `log max(|p|, |q|)`.
pub fn weil_height_p1(t: &ProjPointQ) -> f64 {
    ln_int(&t.naive_size())
}

/// Forms of a common degree without a common zero on P¹ over ℚ̄.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSystem {
    degree: u32,
    forms: Vec<BinaryForm>,
}

impl FormSystem {
    /// Checks that there are at least two forms, all of the same degree ≥ 1,
    /// and that they have no common root: no common factor of the
    /// dehomogenized forms, and not all vanishing at `[1 : 0]`.
    pub fn new(forms: Vec<BinaryForm>) -> Result<Self> {
        if forms.len() < 2 {
            return Err(Error::Argument("a form system needs at least two forms".into()));
        }
        let degree = forms[0].degree();
        if degree == 0 || forms.iter().any(|f| f.degree() != degree) {
            return Err(Error::Argument("forms must share a positive degree".into()));
        }
        let at_infinity = forms.iter().all(|f| f.coeffs()[degree as usize].is_zero());
        let mut g = Polynomial::zero();
        for f in &forms {
            g = poly_gcd(&g, &f.dehomogenize()).unwrap_or_else(|_| Polynomial::zero());
        }
        if at_infinity || !g.is_constant() {
            return Err(Error::BasePoint);
        }
        Ok(FormSystem { degree, forms })
    }

    /// The system `{xᵉ, yᵉ}`.
    pub fn powers(e: u32) -> Self {
        FormSystem { degree: e, forms: alloc::vec![BinaryForm::monomial(e, e), BinaryForm::monomial(0, e)] }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn forms(&self) -> &[BinaryForm] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// All pairwise products `Fᵢ·Gⱼ`; a system for the tensor product bundle.
    pub fn product(&self, other: &FormSystem) -> FormSystem {
        let mut forms = Vec::with_capacity(self.len() * other.len());
        for f in &self.forms {
            for g in &other.forms {
                forms.push(f.mul(g));
            }
        }
        FormSystem { degree: self.degree + other.degree, forms }
    }
}

/// `log max |Fᵢ(p, q)|` on the coprime representative of `t`.
pub fn weil_height_forms(t: &ProjPointQ, system: &FormSystem) -> Result<f64> {
    let m = system.forms.iter().map(|f| f.eval(&t.p, &t.q).abs()).max().unwrap_or_default();
    if m.is_zero() {
        return Err(Error::BasePoint);
    }
    Ok(ln_int(&m))
}

/// Every point with `max(|p|, |q|) ≤ bound`, once each, sorted by
/// (`max(|p|, |q|)`, p, q).
pub fn points_of_bounded_height(bound: u64) -> Result<Vec<ProjPointQ>> {
    if bound < 1 {
        return Err(Error::Argument("height bound must be at least 1".into()));
    }
    let b = bound as i64;
    let mut out: Vec<(i64, i64, i64)> = Vec::new();
    out.push((1, 1, 0));
    for q in 1..=b {
        for p in -b..=b {
            if p.gcd(&q) == 1 {
                out.push((p.abs().max(q), p, q));
            }
        }
    }
    out.sort_unstable();
    Ok(out.into_iter().map(|(_, p, q)| ProjPointQ { p: p.into(), q: q.into() }).collect())
}

/// Sample points of exact height `log h`: for a grid of `q` spread over
/// `[1, h]` (each moved to the nearest value coprime to `h`), the four
/// points `±h/q` and `±q/h`.
pub fn height_samples(h: u64, grid: u64) -> Vec<ProjPointQ> {
    let mut qs: Vec<u64> = Vec::new();
    for k in 1..=grid {
        let target = ((h as u128 * k as u128) / grid as u128).max(1) as u64;
        let mut q = target;
        while q > 1 && q.gcd(&h) != 1 {
            q -= 1;
        }
        if q.gcd(&h) == 1 && !qs.contains(&q) {
            qs.push(q);
        }
    }
    let mut out = Vec::new();
    for q in qs {
        for (a, b) in [(h, q), (q, h)] {
            for s in [1i64, -1] {
                let t = ProjPointQ::new(Integer::from(s) * Integer::from(a), Integer::from(b)).expect("nonzero");
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Number of `q` values per height in [`ratio_limit_table`].
pub const RATIO_GRID: u64 = 64;

/// For each `H`, the largest `|h_E(t)/h_D(t) − e/d|` over
/// [`height_samples`]`(H)`.
pub fn ratio_limit_table(d: &FormSystem, e: &FormSystem, heights: &[u64]) -> Result<Vec<(u64, f64)>> {
    let target = e.degree() as f64 / d.degree() as f64;
    let mut out = Vec::with_capacity(heights.len());
    for &h in heights {
        if h < 2 {
            return Err(Error::Argument("ratio table heights must be at least 2".into()));
        }
        let mut worst: f64 = 0.0;
        for t in height_samples(h, RATIO_GRID) {
            let hd = weil_height_forms(&t, d)?;
            let he = weil_height_forms(&t, e)?;
            if hd > 0.0 {
                worst = worst.max((he / hd - target).abs());
            }
        }
        out.push((h, worst));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_form;

    fn pt(p: i64, q: i64) -> ProjPointQ {
        ProjPointQ::new(p.into(), q.into()).unwrap()
    }

    fn sys(forms: &[&str]) -> FormSystem {
        FormSystem::new(forms.iter().map(|f| parse_form(f).unwrap()).collect()).unwrap()
    }

    #[test]
    fn canonical_points() {
        assert_eq!(pt(4, -6), pt(-2, 3));
        assert_eq!(pt(-5, 0), ProjPointQ::infinity());
        assert!(ProjPointQ::new(0.into(), 0.into()).is_err());
    }

    #[test]
    fn heights_of_points() {
        assert!((weil_height_p1(&pt(2, 3)) - 3f64.ln()).abs() < 1e-15);
        assert_eq!(weil_height_p1(&pt(0, 1)), 0.0);
        assert!((weil_height_p1(&pt(7, 1)) - 7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn heights_of_form_systems() {
        let lin = sys(&["x", "y"]);
        let sq = sys(&["x^2", "y^2"]);
        let quad = sys(&["x^2 - y^2", "x*y"]);
        assert!((weil_height_forms(&pt(2, 3), &lin).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!((weil_height_forms(&pt(2, 3), &sq).unwrap() - 9f64.ln()).abs() < 1e-15);
        assert!((weil_height_forms(&pt(2, 1), &quad).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert_eq!(sq, FormSystem::powers(2));
    }

    #[test]
    fn systems_with_common_roots_are_rejected() {
        let f = |s: &str| parse_form(s).unwrap();
        assert_eq!(FormSystem::new(alloc::vec![f("x^2"), f("x*y")]), Err(Error::BasePoint));
        assert_eq!(FormSystem::new(alloc::vec![f("x*y"), f("y^2")]), Err(Error::BasePoint));
        // pairwise common factors, yet no common root
        assert!(FormSystem::new(alloc::vec![f("x*y"), f("x*(x+y)"), f("y*(x+y)")]).is_ok());
        assert!(FormSystem::new(alloc::vec![f("x")]).is_err());
    }

    #[test]
    fn bounded_height_enumeration() {
        let one = points_of_bounded_height(1).unwrap();
        assert_eq!(one, [pt(-1, 1), pt(0, 1), pt(1, 0), pt(1, 1)]);
        assert_eq!(points_of_bounded_height(2).unwrap().len(), 8);
        assert!(points_of_bounded_height(0).is_err());
    }

    #[test]
    fn ratio_table_trivial_cases() {
        let lin = sys(&["x", "y"]);
        let table = ratio_limit_table(&lin, &FormSystem::powers(2), &[100, 1000]).unwrap();
        assert!(table.iter().all(|(_, d)| *d < 1e-15));
        let same = ratio_limit_table(&lin, &lin, &[100]).unwrap();
        assert_eq!(same[0].1, 0.0);
    }
}
