use hmachine_core::algebra::{parse_ratfunc, RationalFunction};
use hmachine_core::moriwaki::{
    moriwaki_arch_term, moriwaki_height, moriwaki_height_at_zero, moriwaki_height_ratfunc, MoriwakiConfig, PolyPoint,
};
use proptest::prelude::*;

const FIXTURES: [&str; 20] = [
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

fn rf(s: &str) -> RationalFunction {
    parse_ratfunc(s, "u").unwrap()
}

#[test]
fn section_choice_does_not_matter() {
    let cfg = MoriwakiConfig::default();
    for x in FIXTURES {
        let p = PolyPoint::from_ratfunc(&rf(x));
        let a = moriwaki_height(&p, &cfg).unwrap().total();
        let b = moriwaki_height_at_zero(&p, &cfg).unwrap().total();
        assert!((a - b).abs() < 2.0 * cfg.tol, "{}: {} vs {}", x, a, b);
    }
}

#[test]
fn squaring_defect_is_bounded() {
    let cfg = MoriwakiConfig::default();
    for x in FIXTURES {
        let f = rf(x);
        let h1 = moriwaki_height_ratfunc(&f, &cfg).unwrap().total();
        let h2 = moriwaki_height_ratfunc(&(f.clone() * f), &cfg).unwrap().total();
        assert!((h2 - 2.0 * h1).abs() <= 2f64.ln() + 2.0 * cfg.tol, "{}: {} vs 2·{}", x, h2, h1);
    }
}

#[test]
fn halving_the_tolerance_moves_less_than_the_tolerance() {
    let coarse = MoriwakiConfig { tol: 1e-5, ..MoriwakiConfig::default() };
    let fine = MoriwakiConfig { tol: 5e-6, ..MoriwakiConfig::default() };
    for x in FIXTURES {
        let p = PolyPoint::from_ratfunc(&rf(x));
        let a = moriwaki_arch_term(&p, &coarse).unwrap().0;
        let b = moriwaki_arch_term(&p, &fine).unwrap().0;
        assert!((a - b).abs() < coarse.tol, "{}: {} vs {}", x, a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn constant_points_are_fubini_study_weil_heights(p in -1000i64..1000, q in 1i64..1000) {
        let x = rf(&format!("{}/{}", p, q));
        let h = moriwaki_height_ratfunc(&x, &MoriwakiConfig::default()).unwrap();
        prop_assert_eq!(h.arch, 0.0);
        let g = num_integer::gcd(p, q) as f64;
        let (p, q) = (p as f64 / g, q as f64 / g);
        prop_assert!((h.total() - (p * p + q * q).sqrt().ln()).abs() < 1e-12);
    }
}
