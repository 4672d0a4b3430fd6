//! Property suites run by `hmachine verify`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use hmachine_core::algebra::{parse_form, parse_ratfunc, Integer, Polynomial, Rational, RationalFunction};
use hmachine_core::arith::{CurveData, ZERO_HEIGHT};
use hmachine_core::geom::{doubling_degrees, geom_canonical_height, reconstruct_at_depth, EllipticSurface, MAX_DEGREE};
use hmachine_core::moriwaki::{
    moriwaki_arch_term, moriwaki_height, moriwaki_height_at_zero, MoriwakiConfig, PolyPoint,
};
use hmachine_core::oracle::doubling_limit_q;
use hmachine_core::real::Precision;
use hmachine_core::weil::{
    points_of_bounded_height, ratio_limit_table, weil_height_forms, weil_height_p1, FormSystem, ProjPointQ,
};
use hmachine_core::{CurvePoint, WeierstrassCurve};
use num_traits::Zero;

use crate::curvefile::Model;
use crate::error::{AppError, AppResult};
use crate::fixtures;
use crate::report::{fmt_g, NORMALIZATION};

pub const SUITES: [&str; 4] = ["weil", "canonical", "geometric", "moriwaki"];

/// Points `[x : 1]` over ℚ(u) used by the Moriwaki checks.
pub const MORIWAKI_FIXTURES: [&str; 20] = [
    "u",
    "2u",
    "u/3",
    "u + 1",
    "u - 5",
    "u^2",
    "u^2 + 1",
    "(u^2 - 2)/(u + 1)",
    "1/(u - 3)",
    "(3u + 1)/(2u - 7)",
    "u^3 - u",
    "(u^3 + 2)/(u^2 + u + 1)",
    "7u^2/5",
    "(u - 1)^2/(u + 2)",
    "u^4 - 3",
    "(5u^2 - 4)/(u^3 + 1)",
    "(u + 10)/u",
    "100u",
    "(u^2 + u + 1)/(u^2 - u + 1)",
    "(2u - 1)^3/(u^2 + 4)",
];

/// Curves over ℚ with a non-torsion point, as `[a1, a2, a3, a4, a6]` and `(x, y)`.
pub const RATIONAL_FIXTURES: [([i64; 5], (i64, i64)); 11] = [
    ([0, 0, 1, -1, 0], (0, 0)),
    ([0, 0, 0, 0, -2], (3, 5)),
    ([0, 0, 1, -7, 6], (0, 2)),
    ([1, 0, 0, -1, 0], (1, 0)),
    ([0, 0, 0, -25, 0], (-4, 6)),
    ([0, 1, 1, -2, 0], (0, 0)),
    ([0, 0, 0, -4, 4], (2, 2)),
    ([1, -1, 1, -3, 6], (1, 1)),
    ([0, 0, 0, 0, 17], (-2, 3)),
    ([0, 0, 0, -36, 0], (-3, 9)),
    ([0, 0, 0, 1, 1], (0, 1)),
];

pub fn rational_fixtures() -> Vec<(WeierstrassCurve<Rational>, CurvePoint<Rational>)> {
    let q = |n: i64| Rational::from(Integer::from(n));
    RATIONAL_FIXTURES
        .iter()
        .map(|(a, (x, y))| {
            let e = WeierstrassCurve::new(q(a[0]), q(a[1]), q(a[2]), q(a[3]), q(a[4])).expect("nonsingular fixture");
            (e, CurvePoint::affine(q(*x), q(*y)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(id: &'static str, r: Result<String, String>) -> Check {
    match r {
        Ok(detail) => Check { id, passed: true, detail },
        Err(detail) => Check { id, passed: false, detail },
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: hmachine_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub fn run_suite(name: &str) -> AppResult<Vec<Check>> {
    Ok(match name {
        "weil" => weil_suite(),
        "canonical" => canonical_suite(),
        "geometric" => geometric_suite(),
        "moriwaki" => moriwaki_suite(),
        "all" => SUITES.iter().flat_map(|s| run_suite(s).expect("known suite")).collect(),
        other => {
            return Err(AppError::Usage(format!(
                "unknown suite {:?}; expected one of {}, all",
                other,
                SUITES.join(", ")
            )))
        }
    })
}

pub fn format_checks(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        out.push_str(&format!("{:<4} {:<22} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.id, c.detail));
    }
    out
}

fn sys(forms: &[&str]) -> FormSystem {
    FormSystem::new(forms.iter().map(|f| parse_form(f).expect("fixture form")).collect()).expect("fixture system")
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Every point of P¹(ℚ) with coordinates in `[−h, h]`, normalized by hand.
pub fn brute_force_points(h: i64) -> BTreeSet<(i64, i64)> {
    let mut out = BTreeSet::new();
    for p in -h..=h {
        for q in -h..=h {
            if p == 0 && q == 0 {
                continue;
            }
            let g = gcd(p, q);
            let (mut a, mut b) = (p / g, q / g);
            if b < 0 || (b == 0 && a < 0) {
                a = -a;
                b = -b;
            }
            out.insert((a, b));
        }
    }
    out
}

pub fn northcott_check(max: u64) -> Result<String, String> {
    for h in 1..=max {
        let pts = core(points_of_bounded_height(h))?;
        let ours: BTreeSet<(i64, i64)> = pts
            .iter()
            .map(|t| Ok((i64::try_from(t.p()).map_err(|_| "overflow")?, i64::try_from(t.q()).map_err(|_| "overflow")?)))
            .collect::<Result<_, &str>>()?;
        ensure(ours.len() == pts.len(), || format!("duplicate points at H = {}", h))?;
        ensure(ours == brute_force_points(h as i64), || format!("enumeration differs from brute force at H = {}", h))?;
    }
    Ok(format!("counts agree with brute force for H = 1..{}", max))
}

/// Worst `|h(FG) − h(F) − h(G)| − log(#F·#G)` over pairs of systems and points.
pub fn additivity_check(max: u64) -> Result<String, String> {
    let systems = [
        sys(&["x", "y"]),
        sys(&["x^2 - y^2", "x*y"]),
        sys(&["x^3 + 2*y^3", "x*y^2", "y^3"]),
        sys(&["x*y", "x*(x+y)", "y*(x+y)"]),
    ];
    let pts = core(points_of_bounded_height(max))?;
    let mut worst = f64::NEG_INFINITY;
    for f in &systems {
        for g in &systems {
            let fg = f.product(g);
            let bound = ((f.len() * g.len()) as f64).ln();
            for t in &pts {
                let d = core(weil_height_forms(t, &fg))? - core(weil_height_forms(t, f))? - core(weil_height_forms(t, g))?;
                worst = worst.max(d.abs() - bound);
                ensure(d.abs() <= bound + 1e-12, || format!("{}: defect {} above log(#F·#G) = {}", t, d, bound))?;
            }
        }
    }
    Ok(format!("{} points, largest defect minus bound {}", pts.len(), fmt_g(worst)))
}

pub fn ratio_systems() -> (FormSystem, FormSystem) {
    (sys(&["x", "y"]), sys(&["x^2 - y^2", "x*y"]))
}

fn weil_suite() -> Vec<Check> {
    let squaring = || -> Result<String, String> {
        for t in core(points_of_bounded_height(100))? {
            let sq = core(ProjPointQ::new(t.p() * t.p(), t.q() * t.q()))?;
            let d = (weil_height_p1(&sq) - 2.0 * weil_height_p1(&t)).abs();
            ensure(d <= 2f64.ln(), || format!("{}: |h(t^2) - 2h(t)| = {}", t, d))?;
        }
        Ok("|h(t^2) - 2h(t)| <= log 2 on H <= 100".into())
    };
    let ratio = || -> Result<String, String> {
        let (d, e) = ratio_systems();
        let table = core(ratio_limit_table(&d, &e, &[100, 10_000, 1_000_000]))?;
        let text: Vec<String> = table.iter().map(|(h, v)| format!("H={} {}", h, fmt_g(*v))).collect();
        ensure(table.windows(2).all(|w| w[1].1 < w[0].1), || format!("deviations do not decrease: {}", text.join(", ")))?;
        Ok(format!("deviation from e/d: {}", text.join(", ")))
    };
    vec![
        check("weil.northcott", northcott_check(100)),
        check("weil.additivity", additivity_check(60)),
        check("weil.squaring", squaring()),
        check("weil.ratio-limit", ratio()),
    ]
}

fn canonical_suite() -> Vec<Check> {
    let prec = Precision::default();
    let fixtures = rational_fixtures();
    let oracle = || -> Result<String, String> {
        let mut worst: f64 = 0.0;
        for (e, p) in &fixtures {
            let h = core(CurveData::new(e).and_then(|d| d.canonical_height(p, prec)))?.canonical;
            let o = doubling_limit_q(e, p.x().expect("affine"), 10)[10];
            worst = worst.max((h - o).abs());
            ensure((h - o).abs() < 1e-6, || format!("{} {}: {} vs oracle {}", e, p, h, o))?;
        }
        Ok(format!("{} curves, max |hhat - oracle(depth 10)| {} {}", fixtures.len(), fmt_g(worst), NORMALIZATION))
    };
    let quadratic = || -> Result<String, String> {
        for (e, p) in &fixtures {
            let data = core(CurveData::new(e))?;
            let h1 = core(data.canonical_height(p, prec))?.canonical;
            for n in 2..=5 {
                let hn = core(data.canonical_height(&core(e.mul_scalar(n, p))?, prec))?.canonical;
                let d = hn - (n * n) as f64 * h1;
                ensure(d.abs() < 1e-8, || format!("{} {} n={}: defect {}", e, p, n, d))?;
            }
        }
        Ok("hhat(nP) = n^2 hhat(P) for n <= 5 within 1e-8".into())
    };
    let parallelogram = || -> Result<String, String> {
        let f = fixtures::load("389a").map_err(|e| e.to_string())?;
        let Model::Rational { curve, points } = f.model else { unreachable!("fixture over Q") };
        let data = core(CurveData::new(&curve))?;
        let (p, q) = (&points[0].1, &points[1].1);
        let h = |x: &CurvePoint<Rational>| core(data.canonical_height(x, prec)).map(|r| r.canonical);
        let d = h(&core(curve.add(p, q))?)? + h(&core(curve.add(p, &core(curve.neg(q))?))?)? - 2.0 * h(p)? - 2.0 * h(q)?;
        ensure(d.abs() < 1e-8, || format!("parallelogram defect {}", d))?;
        Ok(format!("389a generators, defect {}", fmt_g(d)))
    };
    let torsion = || -> Result<String, String> {
        let q = |n: i64| Rational::from(Integer::from(n));
        // y² = x³ + 1: (2, 3) has order 6, (0, 1) order 3, (−1, 0) order 2
        let e = core(WeierstrassCurve::short(q(0), q(1)))?;
        let data = core(CurveData::new(&e))?;
        for (x, y) in [(2, 3), (0, 1), (-1, 0)] {
            let p = CurvePoint::affine(q(x), q(y));
            let h = core(data.canonical_height(&p, prec))?.canonical;
            let order = core(e.order_up_to(&p, 12))?;
            ensure(h < ZERO_HEIGHT && order.is_some(), || format!("({}, {}): height {} order {:?}", x, y, h, order))?;
        }
        for (e, p) in &fixtures {
            let h = core(CurveData::new(e).and_then(|d| d.canonical_height(p, prec)))?.canonical;
            let order = core(e.order_up_to(p, 12))?;
            ensure(h >= ZERO_HEIGHT && order.is_none(), || format!("{} {}: height {} order {:?}", e, p, h, order))?;
        }
        Ok("zero height exactly on the torsion points".into())
    };
    vec![
        check("canonical.oracle", oracle()),
        check("canonical.quadratic", quadratic()),
        check("canonical.parallelogram", parallelogram()),
        check("canonical.torsion-zero", torsion()),
    ]
}

fn surface(name: &str) -> Result<EllipticSurface, String> {
    match fixtures::load(name).map_err(|e| e.to_string())?.model {
        Model::Surface(s) => Ok(s),
        _ => Err(format!("fixture {} is not a surface", name)),
    }
}

/// Checks that the accepted value is reconstructed identically at
/// `depth + 1` from a fresh degree sequence.
pub fn reproduce_check(s: &EllipticSurface, name: &str, p: &CurvePoint<RationalFunction>) -> Result<Rational, String> {
    let r = core(geom_canonical_height(s, name, p))?;
    let degrees = core(doubling_degrees(s, p, r.depth + 1, MAX_DEGREE))?;
    let b = s.denominator_bound();
    for n in [r.depth, r.depth + 1] {
        let again = reconstruct_at_depth(&degrees, n as usize, b);
        ensure(again.as_ref() == Some(&r.canonical), || {
            format!("{}: {} at depth {}, {:?} at depth {}", name, r.canonical, r.depth, again, n)
        })?;
    }
    Ok(r.canonical)
}

fn geometric_suite() -> Vec<Check> {
    let reproduce = || -> Result<String, String> {
        let mut seen = Vec::new();
        for f in ["tt", "linear", "two-torsion", "three-torsion"] {
            let s = surface(f)?;
            for (name, p) in s.sections() {
                let h = reproduce_check(&s, name, p)?;
                seen.push(format!("{}:{}={}", f, name, h));
            }
        }
        Ok(seen.join(" "))
    };
    let torsion = || -> Result<String, String> {
        for f in ["cusp", "two-torsion", "three-torsion"] {
            let s = surface(f)?;
            let p = &s.sections()[0].1;
            let h = core(geom_canonical_height(&s, "P", p))?.canonical;
            ensure(h.is_zero(), || format!("{}: torsion section has height {}", f, h))?;
        }
        Ok("torsion sections have height exactly 0".into())
    };
    let quadratic = || -> Result<String, String> {
        let s = surface("tt")?;
        let c = s.curve();
        let (p, q) = (&s.sections()[0].1, &s.sections()[1].1);
        let h = |x: &CurvePoint<RationalFunction>| core(geom_canonical_height(&s, "", x)).map(|r| r.canonical);
        let (hp, hq) = (h(p)?, h(q)?);
        let two = Rational::from(Integer::from(2));
        let four = Rational::from(Integer::from(4));
        let h2p = h(&core(c.double(p))?)?;
        ensure(h2p == &four * &hp, || format!("hhat(2P) = {} but 4 hhat(P) = {}", h2p, &four * &hp))?;
        let sum = h(&core(c.add(p, q))?)? + h(&core(c.add(p, &core(c.neg(q))?))?)?;
        let rhs = &two * &hp + &two * &hq;
        ensure(sum == rhs, || format!("parallelogram: {} vs {}", sum, rhs))?;
        Ok(format!("tt: hhat(P) = {}, hhat(Q) = {}, exact in 2P and P +/- Q", hp, hq))
    };
    vec![
        check("geometric.reproduce", reproduce()),
        check("geometric.torsion-zero", torsion()),
        check("geometric.quadratic", quadratic()),
    ]
}

pub fn moriwaki_point(x: &str) -> PolyPoint {
    PolyPoint::from_ratfunc(&parse_ratfunc(x, "u").expect("fixture parses"))
}

fn moriwaki_suite() -> Vec<Check> {
    let cfg = MoriwakiConfig::default();
    let closed = || -> Result<String, String> {
        let a = core(moriwaki_height(&moriwaki_point("u"), &cfg))?.total();
        ensure((a - 0.5).abs() < 1e-5, || format!("[u : 1] gives {}", a))?;
        let b = core(moriwaki_arch_term(&moriwaki_point("u^2"), &cfg))?.0;
        ensure((b - PI / 4.0).abs() < 1e-5, || format!("arch term of [u^2 : 1] is {}", b))?;
        Ok(format!("[u : 1] = {}, arch [u^2 : 1] = {} (pi/4)", fmt_g(a), fmt_g(b)))
    };
    let constant = || -> Result<String, String> {
        for (p, q) in [(2, 1), (1, 1), (-7, 3), (0, 1), (1000, 999), (5, 12)] {
            let pt = core(PolyPoint::new(&[
                Polynomial::constant(Rational::from(Integer::from(p))),
                Polynomial::constant(Rational::from(Integer::from(q))),
            ]))?;
            let h = core(moriwaki_height(&pt, &cfg))?;
            let g = gcd(p, q) as f64;
            let expect = ((p * p + q * q) as f64).sqrt().ln() - g.ln();
            ensure(h.arch == 0.0, || format!("[{} : {}]: arch term {}", p, q, h.arch))?;
            ensure((h.total() - expect).abs() <= cfg.tol, || format!("[{} : {}]: {} vs {}", p, q, h.total(), expect))?;
        }
        Ok("constant points: arch term 0, height log ||(p, q)||".into())
    };
    let section = || -> Result<String, String> {
        let mut worst: f64 = 0.0;
        for x in MORIWAKI_FIXTURES {
            let p = moriwaki_point(x);
            let a = core(moriwaki_height(&p, &cfg))?.total();
            let b = core(moriwaki_height_at_zero(&p, &cfg))?.total();
            worst = worst.max((a - b).abs());
            ensure((a - b).abs() < 2.0 * cfg.tol, || format!("{}: {} vs {}", x, a, b))?;
        }
        Ok(format!("20 points, max difference {}", fmt_g(worst)))
    };
    let squaring = || -> Result<String, String> {
        let mut worst: f64 = 0.0;
        for x in MORIWAKI_FIXTURES {
            let f = parse_ratfunc(x, "u").expect("fixture parses");
            let h1 = core(moriwaki_height(&PolyPoint::from_ratfunc(&f), &cfg))?.total();
            let h2 = core(moriwaki_height(&PolyPoint::from_ratfunc(&(f.clone() * f)), &cfg))?.total();
            worst = worst.max((h2 - 2.0 * h1).abs());
            ensure((h2 - 2.0 * h1).abs() <= 2f64.ln() + 2.0 * cfg.tol, || format!("{}: {} vs 2*{}", x, h2, h1))?;
        }
        Ok(format!("max |h(x^2) - 2h(x)| = {} (bound log 2)", fmt_g(worst)))
    };
    let convergence = || -> Result<String, String> {
        let coarse = MoriwakiConfig { tol: 1e-5, ..cfg };
        let fine = MoriwakiConfig { tol: 5e-6, ..cfg };
        for x in MORIWAKI_FIXTURES {
            let p = moriwaki_point(x);
            let a = core(moriwaki_arch_term(&p, &coarse))?.0;
            let b = core(moriwaki_arch_term(&p, &fine))?.0;
            ensure((a - b).abs() < coarse.tol, || format!("{}: {} vs {}", x, a, b))?;
        }
        Ok("halving the tolerance moves each value by less than the coarse tolerance".into())
    };
    vec![
        check("moriwaki.closed-form", closed()),
        check("moriwaki.constant", constant()),
        check("moriwaki.section", section()),
        check("moriwaki.squaring", squaring()),
        check("moriwaki.convergence", convergence()),
    ]
}
