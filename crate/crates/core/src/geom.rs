//! Elliptic surfaces over P¹: curves over ℚ(T), their bad fibers, and the
//! geometric naive and canonical heights of sections.
//!
//! The geometric canonical height is `lim deg x(2ⁿP)/4ⁿ`. The degrees are
//! computed by x-only doubling over F_p for several 61–62 bit primes (the
//! degree over ℚ is the largest degree seen), and the limit is recovered
//! exactly by rational reconstruction with a denominator bound read off the
//! Kodaira types of the bad fibers.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::algebra::modp::{self, PolyP, LARGE_PRIMES};
use crate::algebra::{factor_over_q, poly_gcd, rational_reconstruct, Polynomial, Rational, RationalFunction};
use crate::arith::Kodaira;
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::linalg::det_exact;

/// Depth limit for the doubling sequence.
pub const MAX_DEPTH: u32 = 8;
/// Doubling stops once `deg x(2ⁿP)` exceeds this.
pub const MAX_DEGREE: usize = 4096;

/// A closed point of P¹ over ℚ: a monic irreducible polynomial or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasePlace {
    Finite(Polynomial),
    Infinity,
}

impl BasePlace {
    /// Degree of the residue field over ℚ.
    pub fn degree(&self) -> usize {
        match self {
            BasePlace::Finite(p) => p.deg().unwrap_or(0),
            BasePlace::Infinity => 1,
        }
    }

    fn valuation(&self, f: &RationalFunction) -> Option<i64> {
        match self {
            BasePlace::Finite(p) => f.valuation_at(p),
            BasePlace::Infinity => f.valuation_at_infinity(),
        }
    }
}

impl fmt::Display for BasePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePlace::Finite(p) => f.write_str(&p.display_with("T")),
            BasePlace::Infinity => f.write_str("inf"),
        }
    }
}

/// A singular fiber of the minimal model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadFiber {
    pub place: BasePlace,
    pub kodaira: Kodaira,
    /// Valuation of the minimal discriminant at the place.
    pub v_min_disc: u32,
}

/// Kodaira symbol from the valuations of c4, c6 and Δ on a minimal model over
/// a residue field of characteristic 0 (`None` stands for a zero invariant).
pub fn kodaira_from_valuations(c4: Option<i64>, c6: Option<i64>, disc: i64) -> Result<Kodaira> {
    let a = c4.unwrap_or(i64::MAX);
    let b = c6.unwrap_or(i64::MAX);
    let k = match (a, b, disc) {
        (_, _, 0) => Kodaira::I(0),
        (0, _, n) if n > 0 => Kodaira::I(n as u32),
        (a, 1, 2) if a >= 1 => Kodaira::II,
        (1, b, 3) if b >= 2 => Kodaira::III,
        (a, 2, 4) if a >= 2 => Kodaira::IV,
        (a, b, 6) if a >= 2 && b >= 3 => Kodaira::IStar(0),
        (2, 3, n) if n > 6 => Kodaira::IStar((n - 6) as u32),
        (a, 4, 8) if a >= 3 => Kodaira::IVStar,
        (3, b, 9) if b >= 5 => Kodaira::IIIStar,
        (a, 5, 10) if a >= 4 => Kodaira::IIStar,
        _ => {
            return Err(Error::Inconsistency(alloc::format!(
                "no Kodaira type for valuations ({:?}, {:?}, {})",
                c4,
                c6,
                disc
            )))
        }
    };
    Ok(k)
}

/// Denominator of the local height correction of a fiber of type `k`.
fn correction_denominator(k: Kodaira) -> u64 {
    match k {
        Kodaira::I(0) => 1,
        Kodaira::I(n) => n as u64,
        Kodaira::IStar(_) => 4,
        Kodaira::II | Kodaira::IIStar => 1,
        Kodaira::III | Kodaira::IIIStar => 2,
        Kodaira::IV | Kodaira::IVStar => 3,
    }
}

/// Reduction type at one place, computed from the valuations of the
/// invariants after the best scaling `u = π^k`.
fn fiber_at(curve: &WeierstrassCurve<RationalFunction>, place: &BasePlace) -> Result<BadFiber> {
    let inv = curve.invariants();
    let a = place.valuation(&inv.c4);
    let b = place.valuation(&inv.c6);
    let d = place.valuation(&inv.disc).ok_or(Error::Singular)?;
    let mut k = d.div_euclid(12);
    if let Some(a) = a {
        k = k.min(a.div_euclid(4));
    }
    if let Some(b) = b {
        k = k.min(b.div_euclid(6));
    }
    let dm = d - 12 * k;
    let kodaira = kodaira_from_valuations(a.map(|a| a - 4 * k), b.map(|b| b - 6 * k), dm)?;
    Ok(BadFiber { place: place.clone(), kodaira, v_min_disc: dm as u32 })
}

/// An elliptic curve over ℚ(T) with named sections.
#[derive(Clone, Debug)]
pub struct EllipticSurface {
    curve: WeierstrassCurve<RationalFunction>,
    sections: Vec<(String, CurvePoint<RationalFunction>)>,
    bad: Vec<BadFiber>,
    /// Irreducible factors of Δ and of the coefficient denominators.
    factors: Vec<Polynomial>,
}

impl EllipticSurface {
    /// Checks every section against the curve equation and classifies the bad
    /// fibers.
    pub fn new(
        curve: WeierstrassCurve<RationalFunction>,
        sections: Vec<(String, CurvePoint<RationalFunction>)>,
    ) -> Result<Self> {
        for (name, s) in &sections {
            if !curve.contains(s) {
                return Err(Error::Argument(alloc::format!("section {} is not on the curve", name)));
            }
        }
        let factors = candidate_factors(&curve)?;
        let mut bad = Vec::new();
        for place in factors.iter().cloned().map(BasePlace::Finite).chain(core::iter::once(BasePlace::Infinity)) {
            let fiber = fiber_at(&curve, &place)?;
            if fiber.kodaira != Kodaira::I(0) {
                bad.push(fiber);
            }
        }
        Ok(EllipticSurface { curve, sections, bad, factors })
    }

    pub fn curve(&self) -> &WeierstrassCurve<RationalFunction> {
        &self.curve
    }

    pub fn sections(&self) -> &[(String, CurvePoint<RationalFunction>)] {
        &self.sections
    }

    pub fn section(&self, name: &str) -> Option<&CurvePoint<RationalFunction>> {
        self.sections.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn bad_fibers(&self) -> &[BadFiber] {
        &self.bad
    }

    /// Irreducible factors of the numerator and denominator of Δ and of the
    /// coefficient denominators: every finite place where the model can fail
    /// to be smooth.
    pub fn factor_polynomials(&self) -> &[Polynomial] {
        &self.factors
    }

    /// lcm of the correction denominators over all bad fibers; the geometric
    /// canonical height of every section lies in `(1/B)·ℤ`.
    pub fn denominator_bound(&self) -> u64 {
        crate::algebra::lcm_u64(self.bad.iter().map(|f| correction_denominator(f.kodaira)))
    }
}

fn candidate_factors(curve: &WeierstrassCurve<RationalFunction>) -> Result<Vec<Polynomial>> {
    let inv = curve.invariants();
    let mut candidates: Vec<Polynomial> = Vec::new();
    let dens = curve.coeffs().iter().map(|a| a.den());
    for f in [inv.disc.num(), inv.disc.den(), inv.c4.den(), inv.c6.den()].into_iter().chain(dens) {
        if f.is_constant() {
            continue;
        }
        for (g, _) in factor_over_q(f)?.1 {
            if !candidates.contains(&g) {
                candidates.push(g);
            }
        }
    }
    candidates.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs())));
    Ok(candidates)
}

/// The places of bad reduction, finite ones first (by degree), then infinity.
pub fn bad_places(surface: &EllipticSurface) -> Vec<BasePlace> {
    surface.bad.iter().map(|f| f.place.clone()).collect()
}

/// True iff the j-invariant is constant.
pub fn is_isotrivial(surface: &EllipticSurface) -> bool {
    surface.curve.j_invariant().map(|j| j.as_constant().is_some()).unwrap_or(false)
}

/// Degree of `x(P)` as a map P¹ → P¹; 0 at infinity.
pub fn geom_naive_height(_surface: &EllipticSurface, section: &CurvePoint<RationalFunction>) -> u64 {
    section.x().map(|x| x.morphism_degree() as u64).unwrap_or(0)
}

/// Scaling `aᵢ → Dⁱaᵢ` making every coefficient a polynomial, with `D` monic.
fn polynomial_scale(curve: &WeierstrassCurve<RationalFunction>) -> Result<Polynomial> {
    let mut d = Polynomial::one();
    for a in curve.coeffs() {
        let den = a.den();
        if den.is_constant() {
            continue;
        }
        let g = poly_gcd(&d, den)?;
        d = (&d * den).exact_div(&g)?;
    }
    Ok(d)
}

/// `deg x(2ⁿP)` for `n = 0, 1, …` on the model with polynomial coefficients,
/// until depth `max_depth` or until the degree exceeds `max_degree` (that
/// entry is still included). A torsion point reaching infinity stays at 0.
pub fn doubling_degrees(
    surface: &EllipticSurface,
    section: &CurvePoint<RationalFunction>,
    max_depth: u32,
    max_degree: usize,
) -> Result<Vec<u64>> {
    let Some(x) = section.x() else {
        return Ok(alloc::vec![0; max_depth as usize + 1]);
    };
    let d = polynomial_scale(&surface.curve)?;
    let dd = RationalFunction::from_poly(d.clone());
    let inv = surface.curve.invariants();
    let scaled = |f: &RationalFunction, k: u32| -> Result<Polynomial> {
        let g = f.clone() * dd.pow(k);
        if !g.is_polynomial() {
            return Err(Error::Inconsistency("scaled coefficient is not a polynomial".into()));
        }
        Ok(g.num().clone())
    };
    let bs = [scaled(&inv.b2, 2)?, scaled(&inv.b4, 4)?, scaled(&inv.b6, 6)?, scaled(&inv.b8, 8)?];
    let disc = scaled(&inv.disc, 12)?;
    let xs = x.clone() * dd.pow(2);

    let mut runs: Vec<Vec<u64>> = Vec::new();
    for &p in LARGE_PRIMES.iter() {
        if let Some(run) = degrees_mod_p(&bs, &disc, xs.num(), xs.den(), p, max_depth, max_degree) {
            runs.push(run);
        }
    }
    if runs.len() < 2 {
        return Err(Error::Inconsistency("too few primes of good reduction for the degree computation".into()));
    }
    let len = runs.iter().map(|r| r.len()).min().unwrap_or(0);
    let mut out = Vec::with_capacity(len);
    for n in 0..len {
        let best = runs.iter().map(|r| r[n]).max().unwrap_or(0);
        if runs.iter().filter(|r| r[n] == best).count() < 2 {
            return Err(Error::Inconsistency(alloc::format!("degree of x(2^{}P) differs between primes", n)));
        }
        out.push(best);
    }
    Ok(out)
}

fn reduce_poly(f: &Polynomial, p: u64) -> Option<PolyP> {
    let mut v = Vec::with_capacity(f.coeffs().len());
    for c in f.coeffs() {
        v.push(modp::reduce_rational(c, p)?);
    }
    modp::trim(&mut v);
    Some(v)
}

fn degrees_mod_p(
    bs: &[Polynomial; 4],
    disc: &Polynomial,
    num: &Polynomial,
    den: &Polynomial,
    p: u64,
    max_depth: u32,
    max_degree: usize,
) -> Option<Vec<u64>> {
    let b2 = reduce_poly(&bs[0], p)?;
    let b4 = reduce_poly(&bs[1], p)?;
    let b6 = reduce_poly(&bs[2], p)?;
    let b8 = reduce_poly(&bs[3], p)?;
    let delta = reduce_poly(disc, p)?;
    if delta.is_empty() {
        return None;
    }
    // gcd(F(N, D), G(N, D)) divides Res(F, G) = Δ² when gcd(N, D) = 1
    let res = modp::pmul(&delta, &delta, p);
    let mut n = reduce_poly(num, p)?;
    let mut d = reduce_poly(den, p)?;
    if d.is_empty() {
        return None;
    }
    let g0 = modp::pgcd(&n, &d, p);
    if g0.len() > 1 {
        n = modp::pdivrem(&n, &g0, p).0;
        d = modp::pdivrem(&d, &g0, p).0;
    }
    let two = 2 % p;
    let four = 4 % p;
    let mut out = Vec::new();
    for depth in 0..=max_depth {
        let degree = modp::deg(&n).unwrap_or(0).max(modp::deg(&d).unwrap_or(0));
        out.push(degree as u64);
        if depth == max_depth || degree > max_degree {
            break;
        }
        if d.is_empty() {
            // the point is at infinity from here on
            out.extend(core::iter::repeat_n(0, (max_depth - depth) as usize));
            break;
        }
        let n2 = modp::pmul(&n, &n, p);
        let d2 = modp::pmul(&d, &d, p);
        let nd = modp::pmul(&n, &d, p);
        let n2d2 = modp::pmul(&n2, &d2, p);
        let nd3 = modp::pmul(&nd, &d2, p);
        let d4 = modp::pmul(&d2, &d2, p);
        let n4 = modp::pmul(&n2, &n2, p);
        let n3d = modp::pmul(&n2, &nd, p);
        let f = modp::psub(
            &modp::psub(&modp::psub(&n4, &modp::pmul(&b4, &n2d2, p), p), &modp::pscale(&modp::pmul(&b6, &nd3, p), two, p), p),
            &modp::pmul(&b8, &d4, p),
            p,
        );
        let g = modp::padd(
            &modp::padd(&modp::pscale(&n3d, four, p), &modp::pmul(&b2, &n2d2, p), p),
            &modp::padd(&modp::pscale(&modp::pmul(&b4, &nd3, p), two, p), &modp::pmul(&b6, &d4, p), p),
            p,
        );
        let mut common = modp::pgcd(&modp::prem(&f, &res, p), &res, p);
        if common.len() > 1 {
            common = modp::pgcd(&common, &g, p);
        }
        if common.len() > 1 {
            n = modp::pdivrem(&f, &common, p).0;
            d = modp::pdivrem(&g, &common, p).0;
        } else {
            n = f;
            d = g;
        }
    }
    Some(out)
}

/// Result of [`geom_canonical_height`].
#[derive(Clone, Debug, PartialEq)]
pub struct GeomHeightRecord {
    pub name: String,
    /// `deg x(P)` on the input model.
    pub naive: u64,
    pub canonical: Rational,
    /// Extrapolated limit `(d_n − d_{n−1})/(3·4^{n−1})` at the accepted depth.
    pub approx: f64,
    /// Depth at which the reconstruction was accepted (it is also reproduced
    /// at `depth + 1`).
    pub depth: u32,
    /// False for isotrivial surfaces, where exactness is not guaranteed.
    pub exact: bool,
}

/// Reconstructed `lim d_n/4ⁿ` from `degrees[..=n]`, or `None` when the error
/// estimate at depth `n` is still too large for the denominator bound.
pub fn reconstruct_at_depth(degrees: &[u64], n: usize, bound: u64) -> Option<Rational> {
    if n == 0 || n >= degrees.len() {
        return None;
    }
    let scale = libm::pow(4.0, n as f64);
    let spread = (1..=n).map(|k| (degrees[k] as f64 - 4.0 * degrees[k - 1] as f64).abs()).fold(0.0, f64::max);
    let tol = (spread + 1.0) / scale;
    let bound_f = bound as f64;
    if tol >= 1.0 / (2.0 * bound_f * bound_f) {
        return None;
    }
    rational_reconstruct(degrees[n] as f64 / scale, bound, tol)
}

pub fn geom_canonical_height(
    surface: &EllipticSurface,
    name: &str,
    section: &CurvePoint<RationalFunction>,
) -> Result<GeomHeightRecord> {
    let naive = geom_naive_height(surface, section);
    let exact = !is_isotrivial(surface);
    let bound = surface.denominator_bound();
    let mut degrees = Vec::new();
    // the sequence is recomputed at growing depth; the cost of one run is
    // dominated by its last doubling
    for depth in 4..=MAX_DEPTH {
        degrees = doubling_degrees(surface, section, depth, MAX_DEGREE)?;
        if let Some((n, value)) = accepted(&degrees, bound) {
            let approx = (degrees[n] as f64 - degrees[n - 1] as f64) / (3.0 * libm::pow(4.0, (n - 1) as f64));
            return Ok(GeomHeightRecord { name: name.to_string(), naive, canonical: value, approx, depth: n as u32, exact });
        }
        if degrees.len() <= depth as usize {
            break;
        }
    }
    Err(Error::Resource(alloc::format!(
        "doubling budget exhausted at depth {} (degree {}) without a stable reconstruction",
        degrees.len().saturating_sub(1),
        degrees.last().copied().unwrap_or(0)
    )))
}

/// First depth `n` whose reconstruction is reproduced at `n + 1`.
fn accepted(degrees: &[u64], bound: u64) -> Option<(usize, Rational)> {
    (1..degrees.len().saturating_sub(1)).find_map(|n| {
        let a = reconstruct_at_depth(degrees, n, bound)?;
        (reconstruct_at_depth(degrees, n + 1, bound)? == a).then_some((n, a))
    })
}

fn hhat(surface: &EllipticSurface, p: &CurvePoint<RationalFunction>) -> Result<Rational> {
    Ok(geom_canonical_height(surface, "", p)?.canonical)
}

/// `⟨P, Q⟩ = (ĥ(P+Q) − ĥ(P) − ĥ(Q))/2` on a non-isotrivial surface.
pub fn geom_pairing(
    surface: &EllipticSurface,
    p: &CurvePoint<RationalFunction>,
    q: &CurvePoint<RationalFunction>,
) -> Result<Rational> {
    if is_isotrivial(surface) {
        return Err(Error::Unsupported("height pairing on an isotrivial surface".into()));
    }
    let s = surface.curve.add(p, q)?;
    Ok((hhat(surface, &s)? - hhat(surface, p)? - hhat(surface, q)?) / Rational::from_integer(2.into()))
}

/// Exact Gram matrix of the pairing and its determinant.
#[derive(Clone, Debug, PartialEq)]
pub struct GramExact {
    pub matrix: Vec<Vec<Rational>>,
    pub det: Rational,
}

pub fn gram_geom(surface: &EllipticSurface, sections: &[CurvePoint<RationalFunction>]) -> Result<GramExact> {
    if is_isotrivial(surface) {
        return Err(Error::Unsupported("height pairing on an isotrivial surface".into()));
    }
    let n = sections.len();
    let diag: Vec<Rational> = sections.iter().map(|s| hhat(surface, s)).collect::<Result<_>>()?;
    let mut matrix = alloc::vec![alloc::vec![Rational::zero(); n]; n];
    let two = Rational::from_integer(2.into());
    for i in 0..n {
        matrix[i][i] = diag[i].clone();
        for j in i + 1..n {
            let s = surface.curve.add(&sections[i], &sections[j])?;
            let v = (hhat(surface, &s)? - &diag[i] - &diag[j]) / &two;
            matrix[i][j] = v.clone();
            matrix[j][i] = v;
        }
    }
    let det = det_exact(&matrix);
    Ok(GramExact { matrix, det })
}

/// Torsion test. On a non-isotrivial surface a section is torsion iff
/// `ĥ_geom(P) = 0`, and a zero height is confirmed by finding `nP = O` with
/// `n ≤ bound`. On an isotrivial surface only the order search is used.
/// (Multiplying a non-torsion section over ℚ(T) is expensive, so the order
/// search is skipped when the height is positive.)
pub fn torsion_test_ft(surface: &EllipticSurface, section: &CurvePoint<RationalFunction>, bound: u32) -> Result<bool> {
    if is_isotrivial(surface) {
        return Ok(surface.curve.order_up_to(section, bound)?.is_some());
    }
    let by_height = hhat(surface, section)?.is_zero();
    if !by_height {
        return Ok(false);
    }
    let by_order = surface.curve.order_up_to(section, bound)?.is_some();
    if by_order != by_height {
        return Err(Error::Inconsistency(alloc::format!(
            "section {} torsion by order: {}, by height: {}",
            section,
            by_order,
            by_height
        )));
    }
    Ok(by_order)
}
