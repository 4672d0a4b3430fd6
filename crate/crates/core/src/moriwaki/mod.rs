//! Heights of points of P^N over K = ℚ(u), for the polarization of K given by
//! P¹_ℤ with the Fubini–Study metrized O(1).
//!
//! For a point `[f₀ : … : f_N]` with coprime polynomial coordinates in ℤ[u]
//! the height is the arithmetic intersection of the pulled-back O(1) with
//! O(1) on the base, computed with the section vanishing at `u = ∞`:
//! `log ‖v‖₂ + ∫_ℂ log √(1 + |u|²) φ*ω_FS`, where `v` is the vector of
//! coefficients of `u^n` (n the largest degree) and `φ*ω_FS` the pulled-back
//! unit-mass Fubini–Study form.

mod quad;

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{poly_gcd, Integer, Polynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::real::ln_int;

/// Quadrature settings for the archimedean term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoriwakiConfig {
    /// Target absolute error of the archimedean integral.
    pub tol: f64,
    /// Budget of quadrature cells (225 nodes each).
    pub max_cells: usize,
}

impl Default for MoriwakiConfig {
    fn default() -> Self {
        MoriwakiConfig { tol: 1e-6, max_cells: 20_000 }
    }
}

/// A point of P^N(ℚ(u)) as integer polynomial coordinates with no common
/// polynomial factor and no common integer factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyPoint {
    /// Coefficient lists, lowest degree first, all padded to `degree + 1`.
    coords: Vec<Vec<Integer>>,
    degree: usize,
}

impl PolyPoint {
    /// Normalizes arbitrary coordinates over ℚ.
    pub fn new(coords: &[Polynomial]) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Argument("a projective point needs at least two coordinates".into()));
        }
        let mut g = Polynomial::zero();
        for c in coords {
            if !c.is_zero() {
                g = if g.is_zero() { c.clone() } else { poly_gcd(&g, c)? };
            }
        }
        if g.is_zero() {
            return Err(Error::Argument("all coordinates are zero".into()));
        }
        let reduced: Vec<Polynomial> = coords.iter().map(|c| c.exact_div(&g)).collect::<Result<_>>()?;
        let mut den = Integer::one();
        for c in &reduced {
            for a in c.coeffs() {
                den = den.lcm(a.denom());
            }
        }
        let degree = reduced.iter().filter_map(|c| c.deg()).max().unwrap_or(0);
        let mut ints: Vec<Vec<Integer>> = reduced
            .iter()
            .map(|c| {
                (0..=degree).map(|k| {
                    let a = c.coeff(k);
                    a.numer() * (&den / a.denom())
                })
                .collect()
            })
            .collect();
        let mut content = Integer::zero();
        for a in ints.iter().flatten() {
            content = content.gcd(a);
        }
        for a in ints.iter_mut().flatten() {
            *a = &*a / &content;
        }
        Ok(PolyPoint { coords: ints, degree })
    }

    /// `[num : den]`.
    pub fn from_ratfunc(x: &RationalFunction) -> Self {
        PolyPoint::new(&[x.num().clone(), x.den().clone()]).expect("denominator is nonzero")
    }

    pub fn coords(&self) -> &[Vec<Integer>] {
        &self.coords
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_constant(&self) -> bool {
        self.degree == 0
    }

    /// Coefficients of `u^degree`.
    pub fn leading_vector(&self) -> Vec<Integer> {
        self.coords.iter().map(|c| c[self.degree].clone()).collect()
    }

    /// The same point in the coordinate `1/u`: `u^n·f(1/u)` for each
    /// coordinate.
    pub fn reversed(&self) -> Self {
        let coords = self.coords.iter().map(|c| c.iter().rev().cloned().collect()).collect();
        PolyPoint { coords, degree: self.degree }
    }
}

/// `log ‖v‖₂` of the leading vector. The vector is not divided by its
/// content; that is what makes the total independent of the section used.
pub fn moriwaki_finite_term(p: &PolyPoint) -> f64 {
    let sq: Integer = p.leading_vector().iter().map(|a| a * a).sum();
    ln_int(&sq) / 2.0
}

/// Coordinates as `f64` polynomials scaled so the largest coefficient is 1;
/// the pulled-back form does not see a common scalar.
fn float_coords(p: &PolyPoint) -> Vec<Vec<f64>> {
    let max = p.coords.iter().flatten().map(|a| a.abs()).max().unwrap_or_else(Integer::one);
    let shift = max.bits().saturating_sub(60);
    let scale = libm::ldexp(1.0, -((max.bits() - shift) as i32));
    p.coords
        .iter()
        .map(|c| c.iter().map(|a| (a >> shift).to_f64().unwrap_or(0.0) * scale).collect())
        .collect()
}

/// Density of `φ*ω_FS` against Lebesgue measure at `u`:
/// `(1/π) Σ_{i<j} |fᵢf′ⱼ − fⱼf′ᵢ|² / (Σ|fᵢ|²)²`.
fn density(fs: &[Vec<f64>], u: Complex64) -> f64 {
    let mut vals = Vec::with_capacity(fs.len());
    for f in fs {
        let (mut v, mut d) = (Complex64::zero(), Complex64::zero());
        for &a in f.iter().rev() {
            d = d * u + v;
            v = v * u + a;
        }
        vals.push((v, d));
    }
    let s: f64 = vals.iter().map(|(v, _)| v.norm_sqr()).sum();
    let mut w = 0.0;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            w += (vals[i].0 * vals[j].1 - vals[j].0 * vals[i].1).norm_sqr();
        }
    }
    w / (s * s) / PI
}

/// `∫_ℂ log √(1 + |u|²) φ*ω_FS`, with its quadrature error estimate.
///
/// Integrated in polar coordinates with `s = |u|²/(1 + |u|²)`; for `s > 1/2`
/// the density is evaluated through the reversed coordinates at `v = 1/u`.
/// A constant map gives exactly 0.
pub fn moriwaki_arch_term(p: &PolyPoint, cfg: &MoriwakiConfig) -> Result<(f64, f64)> {
    if !(cfg.tol > 0.0) {
        return Err(Error::Argument("quadrature tolerance must be positive".into()));
    }
    if p.is_constant() {
        return Ok((0.0, 0.0));
    }
    let near = float_coords(p);
    let far = float_coords(&p.reversed());
    let f = |s: f64, theta: f64| -> f64 {
        let (sin, cos) = libm::sincos(theta);
        let weight = -0.5 * libm::log1p(-s);
        if s <= 0.5 {
            let r = libm::sqrt(s / (1.0 - s));
            let jac = 0.5 / ((1.0 - s) * (1.0 - s));
            weight * density(&near, Complex64::new(r * cos, r * sin)) * jac
        } else {
            let r = libm::sqrt((1.0 - s) / s);
            let jac = 0.5 / (s * s);
            weight * density(&far, Complex64::new(r * cos, r * sin)) * jac
        }
    };
    let thetas: Vec<f64> = (0..=4).map(|k| k as f64 * PI / 2.0).collect();
    quad::integrate_2d(f, &[0.0, 0.5, 1.0], &thetas, cfg.tol, cfg.max_cells)
}

/// Both terms of the height and the quadrature error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoriwakiHeight {
    pub finite: f64,
    pub arch: f64,
    pub error: f64,
}

impl MoriwakiHeight {
    pub fn total(&self) -> f64 {
        self.finite + self.arch
    }
}

pub fn moriwaki_height(p: &PolyPoint, cfg: &MoriwakiConfig) -> Result<MoriwakiHeight> {
    let (arch, error) = moriwaki_arch_term(p, cfg)?;
    Ok(MoriwakiHeight { finite: moriwaki_finite_term(p), arch, error })
}

/// Height of `[x : 1]` for `x ∈ ℚ(u)`.
pub fn moriwaki_height_ratfunc(x: &RationalFunction, cfg: &MoriwakiConfig) -> Result<MoriwakiHeight> {
    moriwaki_height(&PolyPoint::from_ratfunc(x), cfg)
}

/// The height computed with the section of O(1) vanishing at `u = 0`
/// instead of `u = ∞`; it agrees with [`moriwaki_height`].
pub fn moriwaki_height_at_zero(p: &PolyPoint, cfg: &MoriwakiConfig) -> Result<MoriwakiHeight> {
    moriwaki_height(&p.reversed(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_ratfunc;

    fn point(x: &str) -> PolyPoint {
        PolyPoint::from_ratfunc(&parse_ratfunc(x, "u").unwrap())
    }

    #[test]
    fn normalization() {
        let p = PolyPoint::new(&[Polynomial::from_ints(&[0, 2]), Polynomial::from_ints(&[4, 6])]).unwrap();
        // [2u : 6u + 4] = [u : 3u + 2]
        assert_eq!(p.coords(), [alloc::vec![0.into(), 1.into()], alloc::vec![2.into(), 3.into()]]);
        let q = PolyPoint::new(&[Polynomial::from_ints(&[-1, 0, 1]), Polynomial::from_ints(&[1, 1])]).unwrap();
        assert_eq!(q.degree(), 1);
        assert!(PolyPoint::new(&[Polynomial::zero(), Polynomial::zero()]).is_err());
        assert_eq!(point("u").reversed(), PolyPoint::new(&[Polynomial::one(), Polynomial::var()]).unwrap());
    }

    #[test]
    fn finite_terms() {
        assert!((moriwaki_finite_term(&point("2")) - 5f64.ln() / 2.0).abs() < 1e-15);
        assert!((moriwaki_finite_term(&point("1")) - 2f64.ln() / 2.0).abs() < 1e-15);
        assert_eq!(moriwaki_finite_term(&point("u")), 0.0);
        // leading vector (2, 0) keeps its content
        assert!((moriwaki_finite_term(&point("2u")) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn arch_terms_against_closed_forms() {
        let cfg = MoriwakiConfig::default();
        assert_eq!(moriwaki_arch_term(&point("7/3"), &cfg).unwrap(), (0.0, 0.0));
        // (1/2)∫₀^∞ ln(1 + s)/(1 + s)² ds = 1/2
        let (a, _) = moriwaki_arch_term(&point("u"), &cfg).unwrap();
        assert!((a - 0.5).abs() < 1e-6, "{}", a);
        // ∫₀^∞ 2x ln(1 + x)/(1 + x²)² dx = ∫₀^∞ dx/((1 + x)(1 + x²)) = π/4
        let (a, _) = moriwaki_arch_term(&point("u^2"), &cfg).unwrap();
        assert!((a - PI / 4.0).abs() < 1e-6, "{}", a);
    }

    #[test]
    fn heights_and_section_independence() {
        let cfg = MoriwakiConfig::default();
        let h = moriwaki_height(&point("u"), &cfg).unwrap();
        assert!((h.total() - 0.5).abs() < 1e-6);
        for x in ["2u", "u/2", "(u^2 + 1)/(u - 3)", "3u^3 - u + 5"] {
            let p = point(x);
            let a = moriwaki_height(&p, &cfg).unwrap().total();
            let b = moriwaki_height_at_zero(&p, &cfg).unwrap().total();
            assert!((a - b).abs() < 2.0 * cfg.tol, "{}: {} vs {}", x, a, b);
        }
    }
}
