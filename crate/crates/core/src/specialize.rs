//! Specialization of sections to fibers over t ∈ ℚ and the scans comparing
//! arithmetic heights on the fibers with the geometric height.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::algebra::{Integer, Rational, RationalFunction};
use crate::arith::{CurveData, ZERO_HEIGHT};
use crate::curve::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::geom::{geom_canonical_height, gram_geom, is_isotrivial, EllipticSurface};
use crate::real::Precision;
use crate::weil::{weil_height_p1, ProjPointQ};

/// Largest torsion order of an elliptic curve over ℚ.
const MAZUR_BOUND: u32 = 12;

/// Default relative threshold of [`exceptional_scan`].
pub const DEFAULT_RANK_TOL: f64 = 1e-6;

/// Coefficient bound for the combinations tried when confirming a rank drop.
pub const CONFIRM_COEFF: i64 = 3;

/// True iff every coefficient is defined at `t` and `Δ(t) ≠ 0`.
pub fn good_fiber(surface: &EllipticSurface, t: &Rational) -> bool {
    specialize_curve(surface, t).is_ok()
}

pub fn specialize_curve(surface: &EllipticSurface, t: &Rational) -> Result<WeierstrassCurve<Rational>> {
    let bad = || Error::BadFiber { t: t.clone() };
    let mut a: [Rational; 5] = Default::default();
    for (dst, c) in a.iter_mut().zip(surface.curve().coeffs()) {
        *dst = c.eval(t).map_err(|_| bad())?;
    }
    let [a1, a2, a3, a4, a6] = a;
    WeierstrassCurve::new(a1, a2, a3, a4, a6).map_err(|_| bad())
}

/// Evaluates a section at `t`; a pole of `x` or `y` gives the point at
/// infinity.
pub fn specialize_section(
    surface: &EllipticSurface,
    section: &CurvePoint<RationalFunction>,
    t: &Rational,
) -> Result<CurvePoint<Rational>> {
    let curve = specialize_curve(surface, t)?;
    specialize_on(&curve, section, t)
}

fn specialize_on(
    curve: &WeierstrassCurve<Rational>,
    section: &CurvePoint<RationalFunction>,
    t: &Rational,
) -> Result<CurvePoint<Rational>> {
    let (Some(x), Some(y)) = (section.x(), section.y()) else {
        return Ok(CurvePoint::Infinity);
    };
    let p = match (x.eval(t), y.eval(t)) {
        (Ok(x), Ok(y)) => CurvePoint::affine(x, y),
        _ => CurvePoint::Infinity,
    };
    if !curve.contains(&p) {
        return Err(Error::Inconsistency(alloc::format!("specialized section {} is off the fiber at t = {}", p, t)));
    }
    Ok(p)
}

/// `σ_t(P + Q) = σ_t(P) + σ_t(Q)`, checked exactly.
pub fn homomorphism_check(
    surface: &EllipticSurface,
    p: &CurvePoint<RationalFunction>,
    q: &CurvePoint<RationalFunction>,
    t: &Rational,
) -> Result<bool> {
    let curve = specialize_curve(surface, t)?;
    let sum = surface.curve().add(p, q)?;
    let lhs = specialize_on(&curve, &sum, t)?;
    let rhs = curve.add(&specialize_on(&curve, p, t)?, &specialize_on(&curve, q, t)?)?;
    Ok(lhs == rhs)
}

/// Per-row markers of a scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanFlags {
    pub bad_fiber: bool,
    /// The first section specializes to a torsion point (confirmed exactly).
    pub torsion: bool,
    /// The specialized Gram determinant is below the rank-drop threshold.
    pub rank_drop: bool,
    /// A rank drop confirmed by a torsion combination of the sections.
    pub confirmed: bool,
}

impl fmt::Display for ScanFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = [
            (self.bad_fiber, "bad-fiber"),
            (self.torsion, "torsion-specialization"),
            (self.rank_drop, "rank-drop"),
            (self.confirmed, "confirmed"),
        ];
        let mut first = true;
        for (on, name) in names {
            if on {
                if !first {
                    f.write_str(";")?;
                }
                f.write_str(name)?;
                first = false;
            }
        }
        Ok(())
    }
}

/// One fiber of a scan. Values that do not exist on a bad fiber are NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRecord {
    pub t: ProjPointQ,
    pub h_t: f64,
    pub hhat_geom: Rational,
    pub hhat_spec: f64,
    pub ratio: f64,
    pub residual_t4: f64,
    pub gram_det: f64,
    pub flags: ScanFlags,
}

/// Everything a scan needs that does not depend on `t`, computed once and
/// shared by the workers.
#[derive(Clone, Debug)]
pub struct ScanContext {
    surface: EllipticSurface,
    sections: Vec<CurvePoint<RationalFunction>>,
    hhat_geom: Rational,
    prec: Precision,
    rank_tol: f64,
}

impl ScanContext {
    /// `sections[0]` is the section whose heights fill the ratio columns; the
    /// Gram determinant is taken over all of them. Isotrivial surfaces are
    /// rejected.
    pub fn new(surface: &EllipticSurface, sections: &[CurvePoint<RationalFunction>], prec: Precision) -> Result<Self> {
        if is_isotrivial(surface) {
            return Err(Error::Unsupported("scans need a non-isotrivial surface".into()));
        }
        let Some(first) = sections.first() else {
            return Err(Error::Argument("a scan needs at least one section".into()));
        };
        let hhat_geom = geom_canonical_height(surface, "", first)?.canonical;
        Ok(ScanContext {
            surface: surface.clone(),
            sections: sections.to_vec(),
            hhat_geom,
            prec,
            rank_tol: DEFAULT_RANK_TOL,
        })
    }

    /// Context for [`exceptional_scan`]: additionally requires the sections
    /// to be independent, i.e. an exactly nonzero geometric Gram determinant.
    pub fn for_rank(
        surface: &EllipticSurface,
        sections: &[CurvePoint<RationalFunction>],
        prec: Precision,
        tol: f64,
    ) -> Result<Self> {
        let ctx = ScanContext::new(surface, sections, prec)?;
        if !(tol > 0.0) {
            return Err(Error::Argument("rank-drop tolerance must be positive".into()));
        }
        if gram_geom(surface, sections)?.det.is_zero() {
            return Err(Error::Precondition("the sections are dependent: geometric Gram determinant is 0".into()));
        }
        Ok(ScanContext { rank_tol: tol, ..ctx })
    }

    pub fn hhat_geom(&self) -> &Rational {
        &self.hhat_geom
    }

    pub fn surface(&self) -> &EllipticSurface {
        &self.surface
    }

    /// Integers whose prime factors cover the discriminant of the fiber at
    /// `t` up to small constants.
    fn factor_hints(&self, t: &Rational) -> Vec<Integer> {
        let mut hints = alloc::vec![t.numer().clone(), t.denom().clone()];
        for f in self.surface.factor_polynomials() {
            let v = f.eval(t);
            hints.push(v.numer().abs());
            hints.push(v.denom().clone());
        }
        hints
    }

    /// Computes one row. Rank-drop flags are only set for contexts made with
    /// [`ScanContext::for_rank`].
    pub fn record(&self, t: &ProjPointQ, rank: bool) -> Result<ScanRecord> {
        let h_t = weil_height_p1(t);
        let mut rec = ScanRecord {
            t: t.clone(),
            h_t,
            hhat_geom: self.hhat_geom.clone(),
            hhat_spec: f64::NAN,
            ratio: f64::NAN,
            residual_t4: f64::NAN,
            gram_det: f64::NAN,
            flags: ScanFlags::default(),
        };
        let Some(tq) = t.to_rational() else {
            return Err(Error::Unsupported("scans over t = infinity".into()));
        };
        let curve = match specialize_curve(&self.surface, &tq) {
            Ok(c) => c,
            Err(Error::BadFiber { .. }) => {
                rec.flags.bad_fiber = true;
                return Ok(rec);
            }
            Err(e) => return Err(e),
        };
        let data = CurveData::with_factor_hints(&curve, &self.factor_hints(&tq))?;
        let points: Vec<CurvePoint<Rational>> =
            self.sections.iter().map(|s| specialize_on(&curve, s, &tq)).collect::<Result<_>>()?;
        let gram = data.gram(&points, self.prec)?;
        let h = gram.matrix[0][0];
        rec.hhat_spec = h;
        rec.gram_det = gram.det;
        if h_t > 0.0 {
            rec.ratio = h / h_t;
        }
        let geom = rational_to_f64(&self.hhat_geom);
        rec.residual_t4 = (h - geom * h_t) / (1.0 + libm::sqrt(h_t));
        if h < ZERO_HEIGHT {
            if curve.order_up_to(&points[0], MAZUR_BOUND)?.is_none() {
                return Err(Error::Inconsistency(alloc::format!(
                    "section specializes to a point of height {} with no torsion order at t = {}",
                    h,
                    tq
                )));
            }
            rec.flags.torsion = true;
        }
        if rank {
            let diag = gram.matrix.iter().enumerate().map(|(i, r)| r[i]);
            let smallest = diag.clone().fold(f64::INFINITY, f64::min);
            let scale: f64 = diag.product();
            // a torsion section makes a whole row vanish, which the relative
            // test alone cannot see for a 1×1 matrix
            rec.flags.rank_drop = smallest < self.rank_tol || gram.det < self.rank_tol * scale;
            if rec.flags.rank_drop {
                rec.flags.confirmed = torsion_combination(&curve, &points)?.is_some();
            }
        }
        Ok(rec)
    }
}

fn rational_to_f64(q: &Rational) -> f64 {
    crate::real::float_to_f64(&crate::real::rational_to_float(q, 64))
}

/// A nonzero coefficient vector with entries in `[−3, 3]` whose combination
/// of `points` is torsion, searched in order of increasing max norm.
pub fn torsion_combination(curve: &WeierstrassCurve<Rational>, points: &[CurvePoint<Rational>]) -> Result<Option<Vec<i64>>> {
    let n = points.len();
    for norm in 1..=CONFIRM_COEFF {
        let side = (2 * norm + 1) as usize;
        let total = side.pow(n as u32);
        for idx in 0..total {
            let mut k = idx;
            let mut coeffs = Vec::with_capacity(n);
            for _ in 0..n {
                coeffs.push((k % side) as i64 - norm);
                k /= side;
            }
            if coeffs.iter().map(|c| c.abs()).max() != Some(norm) {
                continue;
            }
            // ±c give the same verdict; keep the one whose first nonzero entry is positive
            if coeffs.iter().find(|c| **c != 0).is_some_and(|c| *c < 0) {
                continue;
            }
            let mut sum = CurvePoint::Infinity;
            for (c, p) in coeffs.iter().zip(points) {
                sum = curve.add(&sum, &curve.mul_scalar(*c, p)?)?;
            }
            if curve.order_up_to(&sum, MAZUR_BOUND)?.is_some() {
                return Ok(Some(coeffs));
            }
        }
    }
    Ok(None)
}

/// Finite `t` with `2 ≤ max(|p|, |q|) ≤ bound` in Farey order; these are the
/// parameters with `h(t) > 0`.
pub fn scan_parameters(bound: u64) -> Result<Vec<ProjPointQ>> {
    Ok(crate::weil::points_of_bounded_height(bound)?
        .into_iter()
        .filter(|t| !t.q().is_zero() && t.naive_size() > Integer::from(1))
        .collect())
}

/// Rows for every `t` in `ts`; bad fibers are kept and flagged.
pub fn theorem3_scan(ctx: &ScanContext, ts: &[ProjPointQ]) -> Result<Vec<ScanRecord>> {
    ts.iter().map(|t| ctx.record(t, false)).collect()
}

/// Rows as in [`theorem3_scan`] and `sup |residual_t4|` over the good fibers.
pub fn theorem4_scan(ctx: &ScanContext, ts: &[ProjPointQ]) -> Result<(Vec<ScanRecord>, f64)> {
    let rows = theorem3_scan(ctx, ts)?;
    let sup = sup_residual(&rows);
    Ok((rows, sup))
}

pub fn sup_residual(rows: &[ScanRecord]) -> f64 {
    rows.iter().filter(|r| !r.flags.bad_fiber).map(|r| r.residual_t4.abs()).fold(0.0, f64::max)
}

/// Rows flagged as rank drops, sorted by `h(t)` (ties in Farey order).
pub fn exceptional_scan(ctx: &ScanContext, ts: &[ProjPointQ]) -> Result<Vec<ScanRecord>> {
    let mut out = Vec::new();
    for t in ts {
        let r = ctx.record(t, true)?;
        if r.flags.rank_drop {
            out.push(r);
        }
    }
    out.sort_by_key(|r| r.t.naive_size());
    Ok(out)
}

/// Least-squares slope of `log y` against `log x` over pairs with `x, y > 0`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (libm::log(*x), libm::log(*y))).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Envelope `y ≤ c·x + c′` over a finite point set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub c: f64,
    pub c_prime: f64,
}

impl Envelope {
    pub fn holds(&self, x: f64, y: f64, slack: f64) -> bool {
        y <= self.c * x + self.c_prime + slack
    }
}

/// The line `y = c·x + c′` with `c ≥ 0` lying above every point and lowest at
/// the mean abscissa; it supports the upper convex hull of the points.
pub fn linear_envelope(points: &[(f64, f64)]) -> Result<Envelope> {
    if points.is_empty() {
        return Err(Error::Argument("an envelope needs at least one point".into()));
    }
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless it lies strictly above the chord a–p
            if (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        if hull.last().is_some_and(|l| l.0 == p.0) {
            hull.pop();
        }
        hull.push(p);
    }
    let xbar = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let mut env = None;
    for w in hull.windows(2) {
        if w[0].0 <= xbar && xbar <= w[1].0 {
            let c = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            env = Some(Envelope { c, c_prime: w[0].1 - c * w[0].0 });
            break;
        }
    }
    let mut env = env.unwrap_or_else(|| {
        let top = hull.iter().copied().fold((0.0, f64::NEG_INFINITY), |m, p| if p.1 > m.1 { p } else { m });
        Envelope { c: 0.0, c_prime: top.1 }
    });
    if env.c < 0.0 {
        let top = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        env = Envelope { c: 0.0, c_prime: top };
    }
    // the supporting line may sit an ulp under a hull vertex
    let excess = points.iter().map(|p| p.1 - env.c * p.0 - env.c_prime).fold(0.0, f64::max);
    env.c_prime += excess;
    Ok(env)
}

/// `|ĥ(P_t) − h_naive(P_t)| ≤ c·h(t) + c′` fitted over the good fibers of
/// `ts`, together with the rows used.
pub fn theorem2_fit(ctx: &ScanContext, ts: &[ProjPointQ]) -> Result<(Envelope, Vec<(f64, f64)>)> {
    let pts = theorem2_points(ctx, ts)?;
    Ok((linear_envelope(&pts)?, pts))
}

/// `(h(t), |ĥ(P_t) − h_naive(P_t)|)` over the good fibers of `ts`.
pub fn theorem2_points(ctx: &ScanContext, ts: &[ProjPointQ]) -> Result<Vec<(f64, f64)>> {
    let mut pts = Vec::new();
    for t in ts {
        let Some(tq) = t.to_rational() else { continue };
        let Ok(curve) = specialize_curve(&ctx.surface, &tq) else { continue };
        let p = specialize_on(&curve, &ctx.sections[0], &tq)?;
        let data = CurveData::with_factor_hints(&curve, &ctx.factor_hints(&tq))?;
        let rec = data.canonical_height(&p, ctx.prec)?;
        pts.push((weil_height_p1(t), (rec.canonical - rec.naive).abs()));
    }
    Ok(pts)
}

/// Smallest `C` with `|ratio − ĥ_geom| ≤ C/√h(t)` on the good rows.
pub fn sqrt_envelope(rows: &[ScanRecord]) -> f64 {
    let geom = rows.first().map(|r| rational_to_f64(&r.hhat_geom)).unwrap_or(0.0);
    rows.iter()
        .filter(|r| !r.flags.bad_fiber && r.h_t > 0.0)
        .map(|r| (r.ratio - geom).abs() * libm::sqrt(r.h_t))
        .fold(0.0, f64::max)
}

/// Human-readable label for flags in reports.
pub fn describe(rec: &ScanRecord) -> String {
    alloc::format!("t = {} h = {:.6} flags = {}", rec.t, rec.h_t, rec.flags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_ratfunc;

    fn rf(s: &str) -> RationalFunction {
        parse_ratfunc(s, "T").unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn fixture() -> (EllipticSurface, CurvePoint<RationalFunction>) {
        let curve = WeierstrassCurve::short(rf("-T^2"), rf("T^2")).unwrap();
        let p = CurvePoint::affine(rf("T"), rf("T"));
        (EllipticSurface::new(curve, alloc::vec![("P".into(), p.clone())]).unwrap(), p)
    }

    #[test]
    fn fibers_and_sections() {
        let (s, p) = fixture();
        assert!(good_fiber(&s, &q(2, 1)));
        assert!(!good_fiber(&s, &q(0, 1)));
        let e = specialize_curve(&s, &q(2, 1)).unwrap();
        assert_eq!(e, WeierstrassCurve::short(q(-4, 1), q(4, 1)).unwrap());
        assert_eq!(specialize_section(&s, &p, &q(2, 1)).unwrap(), CurvePoint::affine(q(2, 1), q(2, 1)));
        assert_eq!(specialize_section(&s, &CurvePoint::Infinity, &q(2, 1)).unwrap(), CurvePoint::Infinity);
        assert!(matches!(specialize_curve(&s, &q(0, 1)), Err(Error::BadFiber { .. })));

        let pole = WeierstrassCurve::short(rf("1/T"), rf("1")).unwrap();
        let ps = EllipticSurface::new(pole, alloc::vec![]).unwrap();
        assert!(!good_fiber(&ps, &q(0, 1)));
    }

    #[test]
    fn section_meeting_the_zero_section() {
        // x(3P) has denominator (T − 3)², and t = 3 is a good fiber, so P
        // specializes to a point of order 3 there
        let (s, p) = fixture();
        let p3 = s.curve().mul_scalar(3, &p).unwrap();
        let t = q(3, 1);
        assert!(good_fiber(&s, &t));
        assert_eq!(specialize_section(&s, &p3, &t).unwrap(), CurvePoint::Infinity);
        let e = specialize_curve(&s, &t).unwrap();
        assert_eq!(e.order_up_to(&specialize_section(&s, &p, &t).unwrap(), 12).unwrap(), Some(3));
        let off = CurvePoint::affine(rf("0"), rf("0"));
        assert!(specialize_section(&s, &off, &t).is_err());
    }

    #[test]
    fn specialization_is_a_homomorphism() {
        let (s, p) = fixture();
        let p2 = s.curve().double(&p).unwrap();
        let minus = s.curve().neg(&p).unwrap();
        for t in [q(2, 1), q(-3, 5), q(7, 2)] {
            assert!(homomorphism_check(&s, &p, &p2, &t).unwrap());
            assert!(homomorphism_check(&s, &p, &minus, &t).unwrap());
        }
    }

    #[test]
    fn scan_rows() {
        let (s, p) = fixture();
        let ctx = ScanContext::new(&s, &[p], Precision::default()).unwrap();
        let ts = [ProjPointQ::new(2.into(), 1.into()).unwrap(), ProjPointQ::new(0.into(), 1.into()).unwrap()];
        let rows = theorem3_scan(&ctx, &ts).unwrap();
        assert!(!rows[0].flags.bad_fiber);
        assert!(rows[1].flags.bad_fiber && rows[1].hhat_spec.is_nan());
        let r = &rows[0];
        assert!((r.ratio * r.h_t - r.hhat_spec).abs() < 1e-12);
        let g = 1.0 / 3.0;
        assert!((r.residual_t4 - (r.hhat_spec - g * r.h_t) / (1.0 + r.h_t.sqrt())).abs() < 1e-12);
        assert!((r.gram_det - r.hhat_spec).abs() < 1e-12);
    }

    #[test]
    fn isotrivial_and_dependent_inputs_are_rejected() {
        let curve = WeierstrassCurve::short(rf("0"), rf("T^2")).unwrap();
        let t = CurvePoint::affine(rf("0"), rf("T"));
        let s = EllipticSurface::new(curve, alloc::vec![]).unwrap();
        assert!(matches!(ScanContext::new(&s, &[t], Precision::default()), Err(Error::Unsupported(_))));
        let (s, p) = fixture();
        let p2 = s.curve().double(&p).unwrap();
        assert!(matches!(ScanContext::for_rank(&s, &[p, p2], Precision::default(), 1e-6), Err(Error::Precondition(_))));
    }

    #[test]
    fn envelope_of_points() {
        let pts = [(0.0, 1.0), (1.0, 3.0), (2.0, 2.5), (3.0, 4.0)];
        let env = linear_envelope(&pts).unwrap();
        for (x, y) in pts {
            assert!(env.holds(x, y, 1e-12));
        }
        // mean abscissa 1.5 lies on the hull edge (1, 3)–(3, 4)
        assert!((env.c - 0.5).abs() < 1e-12 && (env.c_prime - 2.5).abs() < 1e-12);
        let flat = linear_envelope(&[(0.0, 5.0), (4.0, 1.0)]).unwrap();
        assert_eq!(flat, Envelope { c: 0.0, c_prime: 5.0 });
        assert!((loglog_slope(&[(1.0, 2.0), (10.0, 20.0), (100.0, 200.0)]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flags_display() {
        let f = ScanFlags { bad_fiber: false, torsion: true, rank_drop: true, confirmed: false };
        assert_eq!(alloc::format!("{}", f), "torsion-specialization;rank-drop");
        assert_eq!(alloc::format!("{}", ScanFlags::default()), "");
    }
}
