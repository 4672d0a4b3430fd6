//! Text and CSV output.

use std::fmt::Write as _;

use hmachine_core::algebra::{factor_over_q, Polynomial, Rational, RationalFunction};
use hmachine_core::arith::CurveData;
use hmachine_core::geom::{bad_places, is_isotrivial, EllipticSurface};
use hmachine_core::specialize::ScanRecord;
use hmachine_core::WeierstrassCurve;
use num_traits::{One, Zero};

use crate::error::AppResult;

/// Appended to every line that prints a canonical height.
pub const NORMALIZATION: &str = "[hhat = lim log H(x(2^n P))/4^n]";

pub const CSV_HEADER: &str = "t_num,t_den,h_t,hhat_geom,hhat_spec,ratio,residual_t4,gram_det,flags";

/// C's `%.12g`: 12 significant digits, trailing zeros removed, exponent form
/// below 1e-4 and from 1e12.
pub fn fmt_g(x: f64) -> String {
    fmt_g_digits(x, 12)
}

pub fn fmt_g_digits(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn csv_row(r: &ScanRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.t.p(),
        r.t.q(),
        fmt_g(r.h_t),
        r.hhat_geom,
        fmt_g(r.hhat_spec),
        fmt_g(r.ratio),
        fmt_g(r.residual_t4),
        fmt_g(r.gram_det),
        r.flags
    )
}

/// `c·∏ fᵢ^eᵢ` with primitive integer factors.
pub fn factored(f: &Polynomial, var: &str) -> AppResult<String> {
    if f.is_constant() {
        return Ok(f.coeff(0).to_string());
    }
    let (mut c, factors) = factor_over_q(f)?;
    let mut parts = Vec::new();
    for (g, e) in factors {
        let ints = g.primitive_integer();
        let prim = Polynomial::from_coeffs(ints.iter().map(|a| Rational::from(a.clone())).collect());
        // g = lead(g)/lead(prim)·prim
        let ratio = g.leading().expect("nonzero factor") / prim.leading().expect("nonzero factor");
        c *= ratio.pow(e as i32);
        let body = prim.display_with(var);
        let body = if prim.deg() == Some(1) && prim.coeffs()[0].is_zero() {
            body
        } else {
            format!("({})", body)
        };
        parts.push(if e == 1 { body } else { format!("{}^{}", body, e) });
    }
    let lead = if c.is_one() {
        String::new()
    } else if c == -Rational::one() {
        "-".into()
    } else {
        format!("{}*", c)
    };
    Ok(format!("{}{}", lead, parts.join("*")))
}

pub fn factored_ratfunc(f: &RationalFunction, var: &str) -> AppResult<String> {
    let num = factored(f.num(), var)?;
    if f.den().is_constant() {
        return Ok(num);
    }
    Ok(format!("{} / ({})", num, factored(f.den(), var)?))
}

pub fn curve_info_q(curve: &WeierstrassCurve<Rational>) -> AppResult<String> {
    let mut out = String::new();
    let _ = writeln!(out, "field: Q");
    let _ = writeln!(out, "curve: {}", curve);
    let _ = writeln!(out, "discriminant: {}", curve.discriminant());
    let _ = writeln!(out, "j-invariant: {}", curve.j_invariant()?);
    let data = CurveData::new(curve)?;
    let mut conductor = num_bigint::BigInt::one();
    for r in data.bad_reduction() {
        if !r.is_good() {
            conductor *= r.prime.pow(r.conductor_exponent);
        }
    }
    let _ = writeln!(out, "conductor: {}", conductor);
    for r in data.bad_reduction() {
        let _ = writeln!(
            out,
            "bad prime {}: type {} tamagawa {} v(disc) {} conductor exponent {}",
            r.prime, r.kodaira_type, r.tamagawa, r.v_min_disc, r.conductor_exponent
        );
    }
    Ok(out)
}

pub fn curve_info_surface(surface: &EllipticSurface) -> AppResult<String> {
    let mut out = String::new();
    let c = surface.curve();
    let _ = writeln!(out, "field: Q(T)");
    let names = ["a1", "a2", "a3", "a4", "a6"];
    let coeffs: Vec<String> =
        names.iter().zip(c.coeffs()).map(|(n, a)| format!("{} = {}", n, a.display_with("T"))).collect();
    let _ = writeln!(out, "curve: {}", coeffs.join(", "));
    let _ = writeln!(out, "discriminant: {}", factored_ratfunc(&c.discriminant(), "T")?);
    let _ = writeln!(out, "j-invariant: {}", c.j_invariant()?.display_with("T"));
    let iso = is_isotrivial(surface);
    let _ = writeln!(out, "isotrivial: {}", iso);
    let places = bad_places(surface);
    for f in surface.bad_fibers() {
        let _ = writeln!(out, "bad fiber {}: type {} v(disc) {}", f.place, f.kodaira, f.v_min_disc);
    }
    if places.is_empty() {
        let _ = writeln!(out, "bad fibers: none");
    }
    if !iso {
        let _ = writeln!(out, "height denominator bound: {}", surface.denominator_bound());
    }
    for (name, p) in surface.sections() {
        let _ = writeln!(out, "section {}: {}", name, p);
    }
    Ok(out)
}
