use std::collections::BTreeSet;

use hmachine_core::algebra::parse_form;
use hmachine_core::weil::{points_of_bounded_height, ratio_limit_table, weil_height_forms, weil_height_p1, FormSystem, ProjPointQ};

fn sys(forms: &[&str]) -> FormSystem {
    FormSystem::new(forms.iter().map(|f| parse_form(f).unwrap()).collect()).unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Canonical representatives of every nonzero pair in the box, collected
/// without using the library's enumeration.
fn brute_force(h: i64) -> BTreeSet<(i64, i64)> {
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

#[test]
fn northcott_counts_match_brute_force() {
    let mut last = 0;
    for h in 1..=100u64 {
        let pts = points_of_bounded_height(h).unwrap();
        let ours: BTreeSet<(i64, i64)> =
            pts.iter().map(|t| (t.p().try_into().unwrap(), t.q().try_into().unwrap())).collect();
        assert_eq!(ours.len(), pts.len(), "duplicates at H = {}", h);
        if h % 10 == 0 || h < 10 {
            assert_eq!(ours, brute_force(h as i64), "H = {}", h);
        }
        assert!(pts.len() >= last);
        last = pts.len();
        assert!(pts.windows(2).all(|w| w[0].naive_size() <= w[1].naive_size()));
    }
}

#[test]
fn additivity_envelope() {
    let systems = [
        sys(&["x", "y"]),
        sys(&["x^2 - y^2", "x*y"]),
        sys(&["x^3 + 2*y^3", "x*y^2", "y^3"]),
        sys(&["x*y", "x*(x+y)", "y*(x+y)"]),
    ];
    let pts = points_of_bounded_height(100).unwrap();
    for f in &systems {
        for g in &systems {
            let fg = f.product(g);
            let bound = ((f.len() * g.len()) as f64).ln();
            for t in &pts {
                let d = weil_height_forms(t, &fg).unwrap() - weil_height_forms(t, f).unwrap() - weil_height_forms(t, g).unwrap();
                assert!(d.abs() <= bound + 1e-12, "{} {:?} {:?}: {}", t, f, g, d);
            }
        }
    }
}

#[test]
fn squaring_moves_the_height_by_at_most_log_two() {
    for t in points_of_bounded_height(100).unwrap() {
        let sq = ProjPointQ::new(t.p() * t.p(), t.q() * t.q()).unwrap();
        assert!((weil_height_p1(&sq) - 2.0 * weil_height_p1(&t)).abs() <= 2f64.ln());
    }
}

#[test]
fn ratio_deviation_shrinks() {
    let table = ratio_limit_table(&sys(&["x", "y"]), &sys(&["x^2 - y^2", "x*y"]), &[100, 10_000, 1_000_000]).unwrap();
    assert!(table[2].1 < table[1].1 && table[1].1 < table[0].1, "{:?}", table);
}
