use hmachine_core::algebra::{Integer, Rational};
use hmachine_core::arith::{canonical_height_q, naive_height_q, torsion_test_q, CurveData, DEFAULT_TORSION_BOUND};
use hmachine_core::oracle::doubling_limit_q;
use hmachine_core::real::Precision;
use hmachine_core::{CurvePoint, WeierstrassCurve};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn curve(a: [i64; 5]) -> WeierstrassCurve<Rational> {
    WeierstrassCurve::new(q(a[0], 1), q(a[1], 1), q(a[2], 1), q(a[3], 1), q(a[4], 1)).unwrap()
}

fn pt(x: i64, y: i64) -> CurvePoint<Rational> {
    CurvePoint::affine(q(x, 1), q(y, 1))
}

fn fixtures() -> Vec<(WeierstrassCurve<Rational>, CurvePoint<Rational>)> {
    let mut v: Vec<_> = [
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
    ]
    .into_iter()
    .map(|(a, (x, y))| (curve(a), pt(x, y)))
    .collect();
    v.push((
        WeierstrassCurve::new(q(0, 1), q(0, 1), q(1, 8), q(-1, 16), q(0, 1)).unwrap(),
        pt(0, 0),
    ));
    for (e, p) in &v {
        assert!(e.contains(p));
    }
    v
}

#[test]
fn matches_doubling_oracle() {
    for (e, p) in fixtures() {
        let h = canonical_height_q(&e, &p).unwrap().canonical;
        let o = doubling_limit_q(&e, p.x().unwrap(), 10);
        assert!((h - o[10]).abs() < 1e-6, "{} {}: {} vs {}", e, p, h, o[10]);
    }
}

#[test]
fn quadratic_in_multiples() {
    for (e, p) in fixtures() {
        let data = CurveData::new(&e).unwrap();
        let h1 = data.canonical_height(&p, Precision::default()).unwrap().canonical;
        for n in 2..=5 {
            let pn = e.mul_scalar(n, &p).unwrap();
            let hn = data.canonical_height(&pn, Precision::default()).unwrap().canonical;
            assert!((hn - (n * n) as f64 * h1).abs() < 1e-8, "{} {} n={}", e, p, n);
        }
    }
}

#[test]
fn local_terms_sum_to_height() {
    for (e, p) in fixtures() {
        let r = canonical_height_q(&e, &p.clone()).unwrap();
        let s: f64 = r.local_terms.values().sum();
        assert!((s - r.canonical).abs() < 1e-12);
        assert!(r.canonical > 1e-10);
        assert!(!torsion_test_q(&e, &p, DEFAULT_TORSION_BOUND).unwrap());
    }
}

fn log_height(x: &Rational) -> f64 {
    use num_traits::{Signed, ToPrimitive, Zero};
    if x.is_zero() {
        return 0.0;
    }
    let l = |n: &Integer| n.abs().to_f64().unwrap().ln();
    l(x.numer()).max(l(x.denom()))
}

/// A loosened form of the classical difference bound between the naive and
/// canonical heights, in the normalization `ĥ ~ log H(x)`.
fn envelope(e: &WeierstrassCurve<Rational>) -> f64 {
    use num_traits::{Signed, ToPrimitive};
    let inv = e.invariants();
    let hj = log_height(&e.j_invariant().unwrap());
    let hd = log_height(&inv.disc);
    let b2 = (&inv.b2 / q(12, 1)).abs().to_f64().unwrap().max(1.0).ln();
    2.0 * (hj / 8.0 + hd / 6.0 + b2 / 2.0 + 0.5 * 2f64.ln() + 1.07)
}

#[test]
fn difference_from_naive_height_within_envelope() {
    for (e, p) in fixtures().into_iter().take(11) {
        let data = CurveData::new(&e).unwrap();
        let bound = envelope(&e);
        for n in 1..=8 {
            let pn = e.mul_scalar(n, &p).unwrap();
            let r = data.canonical_height(&pn, Precision::default()).unwrap();
            assert!((r.canonical - naive_height_q(&e, &pn)).abs() <= bound, "{} {} n={}", e, p, n);
        }
    }
}

#[test]
fn torsion_points_have_height_zero() {
    let cases = [([0, 0, 0, 1, 0], (0, 0)), ([0, 0, 0, 0, 1], (2, 3)), ([0, -1, 1, -10, -20], (5, 5))];
    for (a, (x, y)) in cases {
        let e = curve(a);
        let r = canonical_height_q(&e, &pt(x, y)).unwrap();
        assert!(r.canonical.abs() < 1e-10 && r.canonical > -1e-10, "{}", r.canonical);
        assert!(torsion_test_q(&e, &pt(x, y), DEFAULT_TORSION_BOUND).unwrap());
    }
}

// y² + y = x³ + x² − 2x has independent points (−1, 1) and (0, 0).
fn rank_two() -> (WeierstrassCurve<Rational>, CurvePoint<Rational>, CurvePoint<Rational>) {
    (curve([0, 1, 1, -2, 0]), pt(-1, 1), pt(0, 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn parallelogram_law(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3) {
        let (e, g1, g2) = rank_two();
        let data = CurveData::new(&e).unwrap();
        let comb = |m: i64, n: i64| e.add(&e.mul_scalar(m, &g1).unwrap(), &e.mul_scalar(n, &g2).unwrap()).unwrap();
        let h = |pt: &CurvePoint<Rational>| data.canonical_height(pt, Precision::default()).unwrap().canonical;
        let (p, qq) = (comb(a, b), comb(c, d));
        let lhs = h(&e.add(&p, &qq).unwrap()) + h(&e.add(&p, &e.neg(&qq).unwrap()).unwrap());
        let rhs = 2.0 * h(&p) + 2.0 * h(&qq);
        prop_assert!((lhs - rhs).abs() < 1e-8, "{} vs {}", lhs, rhs);
        prop_assert!(h(&p) >= -1e-10);
    }
}
