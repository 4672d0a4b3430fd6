//! Dense integer polynomials (`Vec<BigInt>`, constant term first). Internal
//! helpers for gcds and factorization; all vectors are kept trimmed.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Polynomial, Rational};

pub(crate) type ZPoly = Vec<BigInt>;

pub(crate) fn trim(p: &mut ZPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Primitive part with positive leading coefficient.
pub(crate) fn primitive(p: &[BigInt]) -> ZPoly {
    let mut g = content(p);
    if g.is_zero() {
        return Vec::new();
    }
    if p.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    p.iter().map(|c| c / &g).collect()
}

/// Clears denominators: returns an integer polynomial that is a positive
/// rational multiple of `p`.
pub(crate) fn from_poly(p: &Polynomial) -> ZPoly {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.denom());
    }
    p.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect()
}

pub(crate) fn to_poly(p: &[BigInt]) -> Polynomial {
    Polynomial::from_coeffs(p.iter().map(|c| Rational::from_integer(c.clone())).collect())
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Pseudo-remainder of `a` by nonzero `b`: lc(b)^(deg a - deg b + 1)·a mod b.
pub(crate) fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r: ZPoly = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let top = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lc;
        }
        for (j, bj) in b.iter().enumerate() {
            r[dr - db + j] -= &top * bj;
        }
        trim(&mut r);
        // keep coefficient growth in check
        let g = content(&r);
        if !g.is_zero() && !g.is_one() {
            for c in r.iter_mut() {
                *c = &*c / &g;
            }
        }
    }
    r
}

/// Exact division of integer polynomials; `None` when `b` does not divide `a`
/// over ℤ.
pub(crate) fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    if b.is_empty() {
        return None;
    }
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r: ZPoly = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let top = &r[k + db];
        if top.is_zero() {
            continue;
        }
        let (qc, rem) = top.div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &qc * bj;
        }
        q[k] = qc;
    }
    if r.iter().all(|c| c.is_zero()) {
        trim(&mut q);
        Some(q)
    } else {
        None
    }
}

/// gcd over ℤ[T] (primitive, positive leading coefficient) by the primitive
/// remainder sequence.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut x = primitive(a);
    let mut y = primitive(b);
    if x.len() < y.len() {
        core::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZPoly {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn gcd_of_integer_polys() {
        // (x+1)(x-2) and (x+1)(3x+5)
        let a = mul(&z(&[1, 1]), &z(&[-2, 1]));
        let b = mul(&z(&[1, 1]), &z(&[5, 3]));
        assert_eq!(gcd(&a, &b), z(&[1, 1]));
    }

    #[test]
    fn exact_division() {
        let a = mul(&z(&[1, 2]), &z(&[-3, 0, 1]));
        assert_eq!(exact_div(&a, &z(&[1, 2])), Some(z(&[-3, 0, 1])));
        assert_eq!(exact_div(&a, &z(&[1, 3])), None);
    }
}
