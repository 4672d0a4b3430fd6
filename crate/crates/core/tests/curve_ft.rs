use hmachine_core::algebra::{parse_ratfunc, Rational, RationalFunction};
use hmachine_core::geom::{
    doubling_degrees, geom_canonical_height, geom_naive_height, geom_pairing, gram_geom, is_isotrivial,
    reconstruct_at_depth, torsion_test_ft, EllipticSurface, MAX_DEGREE,
};
use hmachine_core::{CurvePoint, WeierstrassCurve};
use hmachine_core::Error;
use num_traits::Zero;
use proptest::prelude::*;

fn rf(s: &str) -> RationalFunction {
    parse_ratfunc(s, "T").unwrap()
}

fn short(a4: RationalFunction, a6: RationalFunction, sections: Vec<CurvePoint<RationalFunction>>) -> Option<EllipticSurface> {
    let curve = WeierstrassCurve::short(a4, a6).ok()?;
    let named = sections.into_iter().enumerate().map(|(i, s)| (format!("P{}", i), s)).collect();
    EllipticSurface::new(curve, named).ok()
}

fn hhat(s: &EllipticSurface, p: &CurvePoint<RationalFunction>) -> Rational {
    geom_canonical_height(s, "P", p).unwrap().canonical
}

#[test]
fn fixture_height_is_reproduced_one_level_deeper() {
    let s = short(rf("-T^2"), rf("T^2"), vec![CurvePoint::affine(rf("T"), rf("T"))]).unwrap();
    let p = s.sections()[0].1.clone();
    let r = geom_canonical_height(&s, "P", &p).unwrap();
    let degrees = doubling_degrees(&s, &p, r.depth + 1, MAX_DEGREE).unwrap();
    let b = s.denominator_bound();
    assert_eq!(reconstruct_at_depth(&degrees, r.depth as usize, b), Some(r.canonical.clone()));
    assert_eq!(reconstruct_at_depth(&degrees, r.depth as usize + 1, b), Some(r.canonical.clone()));
    let exact = r.canonical.numer().to_string().parse::<f64>().unwrap() / r.canonical.denom().to_string().parse::<f64>().unwrap();
    assert!((r.approx - exact).abs() < 1e-6);
}

#[test]
fn degree_of_doubling_can_exceed_four_times_the_degree() {
    // x(2P) = T²/4 for P = (0, T), so deg x(2P) = 2 > 4·deg x(P) = 0; the
    // true bound adds the degrees of the b-invariants
    let p = CurvePoint::affine(rf("0"), rf("T"));
    let s = short(rf("-T^2"), rf("T^2"), vec![p.clone()]).unwrap();
    let p2 = s.curve().double(&p).unwrap();
    assert_eq!(p2.x().unwrap(), &rf("T^2/4"));
    assert_eq!(geom_naive_height(&s, &p2), 2);
    assert!(!torsion_test_ft(&s, &p, 16).unwrap());
}

#[test]
fn torsion_iff_zero_height_on_fixtures() {
    // 2-torsion: y² = (x − T)(x² + 1)
    let t2 = CurvePoint::affine(rf("T"), rf("0"));
    let e = WeierstrassCurve::new(rf("0"), rf("-T"), rf("0"), rf("1"), rf("-T")).unwrap();
    let s = EllipticSurface::new(e, vec![("T2".into(), t2.clone())]).unwrap();
    assert!(!is_isotrivial(&s));
    assert!(hhat(&s, &t2).is_zero());
    assert!(torsion_test_ft(&s, &t2, 16).unwrap());
    // 3-torsion through an inflection: y² = x³ + (T x + 1)², P = (0, 1)
    let e = WeierstrassCurve::new(rf("0"), rf("T^2"), rf("0"), rf("2T"), rf("1")).unwrap();
    let t3 = CurvePoint::affine(rf("0"), rf("1"));
    assert!(e.contains(&t3));
    let s3 = EllipticSurface::new(e, vec![("T3".into(), t3.clone())]).unwrap();
    assert!(!is_isotrivial(&s3));
    assert_eq!(s3.curve().order_up_to(&t3, 16).unwrap(), Some(3));
    assert!(hhat(&s3, &t3).is_zero());
    assert!(torsion_test_ft(&s3, &t3, 16).unwrap());
}

/// Surfaces y² = x³ + a4·x + a6 through two chosen sections.
fn surface_through(
    x1: [i64; 2],
    y1: [i64; 2],
    x2: i64,
    y2: [i64; 2],
) -> Option<(EllipticSurface, CurvePoint<RationalFunction>, CurvePoint<RationalFunction>)> {
    let poly = |c: [i64; 2]| rf(&format!("({}) + ({})*T", c[0], c[1]));
    let (x1, y1, x2, y2) = (poly(x1), poly(y1), rf(&x2.to_string()), poly(y2));
    let dx = x1.clone() - x2.clone();
    if dx.is_zero() {
        return None;
    }
    let cube = |x: &RationalFunction| x.clone() * x.clone() * x.clone();
    let num = y1.clone() * y1.clone() - cube(&x1) - y2.clone() * y2.clone() + cube(&x2);
    let a4 = num * dx.inv_checked()?;
    let a6 = y1.clone() * y1.clone() - cube(&x1) - a4.clone() * x1.clone();
    let p = CurvePoint::affine(x1, y1);
    let q = CurvePoint::affine(x2, y2);
    let s = short(a4, a6, vec![p.clone(), q.clone()])?;
    if is_isotrivial(&s) {
        return None;
    }
    Some((s, p, q))
}

trait InvChecked: Sized {
    fn inv_checked(&self) -> Option<Self>;
}

impl InvChecked for RationalFunction {
    fn inv_checked(&self) -> Option<Self> {
        RationalFunction::new(self.den().clone(), self.num().clone()).ok()
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn quadraticity_and_parallelogram_law(
        x1 in prop::array::uniform2(-2i64..3),
        y1 in prop::array::uniform2(-2i64..3),
        x2 in -2i64..3,
        y2 in prop::array::uniform2(-2i64..3),
    ) {
        let Some((s, p, q)) = surface_through(x1, y1, x2, y2) else { return Ok(()); };
        let e = s.curve();
        let (hp, hq) = match (geom_canonical_height(&s, "P", &p), geom_canonical_height(&s, "Q", &q)) {
            (Ok(hp), Ok(hq)) => (hp, hq),
            (Err(Error::Resource(_)), _) | (_, Err(Error::Resource(_))) => return Ok(()),
            (Err(e), _) | (_, Err(e)) => return Err(TestCaseError::fail(e.to_string())),
        };
        let (hp, hq) = (hp.canonical, hq.canonical);
        prop_assert!(hp >= Rational::zero() && hq >= Rational::zero());
        let p2 = e.double(&p).unwrap();
        prop_assert_eq!(hhat(&s, &p2), &hp * Rational::from_integer(4.into()));
        let sum = e.add(&p, &q).unwrap();
        let diff = e.add(&p, &e.neg(&q).unwrap()).unwrap();
        let two = Rational::from_integer(2.into());
        prop_assert_eq!(hhat(&s, &sum) + hhat(&s, &diff), &two * &hp + &two * &hq);
        let g = gram_geom(&s, &[p.clone(), q.clone()]).unwrap();
        prop_assert!(g.det >= Rational::zero());
        prop_assert_eq!(geom_pairing(&s, &p, &q).unwrap(), g.matrix[0][1].clone());
    }
}
