//! Factorization in ℚ[T]: Yun's squarefree decomposition, then Zassenhaus
//! (factor modulo a small prime, Hensel lift, recombine) on each part.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::intfactor::is_prime_u64;
use super::modp;
use super::zpoly::{self, ZPoly};
use super::{poly_gcd, Polynomial, Rational};
use crate::error::{Error, Result};

/// Squarefree decomposition of a nonconstant polynomial: pairs
/// (monic squarefree factor, multiplicity), factors pairwise coprime.
pub fn squarefree_decomposition(f: &Polynomial) -> Result<Vec<(Polynomial, u32)>> {
    if f.is_zero() {
        return Err(Error::Argument("squarefree decomposition of 0".into()));
    }
    let f = f.monic();
    let mut out = Vec::new();
    if f.is_constant() {
        return Ok(out);
    }
    let df = f.derivative();
    let a0 = poly_gcd(&f, &df)?;
    let mut b = f.exact_div(&a0)?;
    let mut c = df.exact_div(&a0)?;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = poly_gcd(&b, &d)?;
        b = b.exact_div(&a)?;
        c = d.exact_div(&a)?;
        d = &c - &b.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

/// Complete factorization over ℚ: `f = lead · Π gᵢ^eᵢ` with monic irreducible
/// gᵢ, sorted by degree then by coefficients.
pub fn factor_over_q(f: &Polynomial) -> Result<(Rational, Vec<(Polynomial, u32)>)> {
    let lead = f.leading().cloned().ok_or_else(|| Error::Argument("factorization of 0".into()))?;
    let mut out = Vec::new();
    for (part, e) in squarefree_decomposition(f)? {
        for g in factor_squarefree_z(&zpoly::primitive(&zpoly::from_poly(&part))) {
            out.push((zpoly::to_poly(&g).monic(), e));
        }
    }
    out.sort_by(|(a, _), (b, _)| a.deg().cmp(&b.deg()).then_with(|| zpoly::from_poly(a).cmp(&zpoly::from_poly(b))));
    Ok((lead, out))
}

/// Irreducible factors (primitive) of a primitive squarefree integer polynomial.
fn factor_squarefree_z(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = &f[n];
    // pick the prime giving the fewest modular factors among a few candidates
    let mut best: Option<(u64, Vec<modp::PolyP>)> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < 5 {
        p += 2;
        if !is_prime_u64(p) || modp::reduce(lc, p) == 0 {
            continue;
        }
        let fp = modp::from_ints(f, p);
        if modp::pgcd(&fp, &modp::pderiv(&fp, p), p).len() != 1 {
            continue;
        }
        tried += 1;
        let facs = modp::factor_squarefree(&modp::monic(&fp, p), p, p);
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
    }
    let (p, facs) = best.expect("a good prime exists");
    if facs.len() == 1 {
        return vec![f.to_vec()];
    }

    // Mignotte-type bound on factor coefficients, times lc for recombination
    let maxc = f.iter().map(|c| c.abs()).max().unwrap_or_default();
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * BigInt::from(n + 1) * maxc;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut k = 1u32;
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }

    let lc_inv = mod_inverse(lc, &modulus);
    let target: ZPoly = f.iter().map(|c| (c * &lc_inv).mod_floor(&modulus)).collect();
    let lifted = hensel_multi(&target, &facs, p, k);

    recombine(f, lifted, &modulus)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

fn reduce_mod(a: &[BigInt], m: &BigInt) -> ZPoly {
    let mut v: ZPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    zpoly::trim(&mut v);
    v
}

fn to_big(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts the monic factorization `f ≡ Π facs (mod p)` to `mod p^k`, where `f`
/// is already monic modulo p^k.
fn hensel_multi(f: &[BigInt], facs: &[modp::PolyP], p: u64, k: u32) -> Vec<ZPoly> {
    if facs.len() == 1 {
        return vec![f.to_vec()];
    }
    let g0 = facs[0].clone();
    let h0 = facs[1..].iter().fold(vec![1u64], |acc, g| modp::pmul(&acc, g, p));
    let (g, h) = hensel_pair(f, &g0, &h0, p, k);
    let mut out = vec![g];
    out.extend(hensel_multi(&h, &facs[1..], p, k));
    out
}

/// Linear Hensel lifting of `f ≡ g·h (mod p)` (g, h monic, coprime) to p^k.
fn hensel_pair(f: &[BigInt], g0: &[u64], h0: &[u64], p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (_, s, t) = modp::pxgcd(g0, h0, p);
    let pb = BigInt::from(p);
    let mut g = to_big(g0);
    let mut h = to_big(h0);
    let mut pm = pb.clone();
    for _ in 1..k {
        let next = &pm * &pb;
        let gh = zpoly::mul(&g, &h);
        let n = f.len().max(gh.len());
        let e: ZPoly = (0..n)
            .map(|i| {
                let d = f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default();
                (d.mod_floor(&next) / &pm).mod_floor(&pb)
            })
            .collect();
        let e_p: modp::PolyP = {
            let mut v: modp::PolyP = e.iter().map(|c| c.to_u64().unwrap_or(0)).collect();
            modp::trim(&mut v);
            v
        };
        let te = modp::pmul(&t, &e_p, p);
        let (q, a) = modp::pdivrem(&te, g0, p);
        let b = modp::padd(&modp::pmul(&s, &e_p, p), &modp::pmul(&q, h0, p), p);
        let add_scaled = |x: &ZPoly, y: &modp::PolyP| -> ZPoly {
            let n = x.len().max(y.len());
            let v: ZPoly = (0..n)
                .map(|i| x.get(i).cloned().unwrap_or_default() + &pm * BigInt::from(*y.get(i).unwrap_or(&0)))
                .collect();
            reduce_mod(&v, &next)
        };
        g = add_scaled(&g, &a);
        h = add_scaled(&h, &b);
        pm = next;
    }
    (g, h)
}

fn symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m >> 1u32;
    let mut v: ZPoly = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    zpoly::trim(&mut v);
    v
}

fn recombine(f: &[BigInt], mut lifted: Vec<ZPoly>, m: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut cur = f.to_vec();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), size) {
            let lc = cur.last().cloned().unwrap_or_else(BigInt::one);
            let prod = subset.iter().fold(vec![lc], |acc, &i| reduce_mod(&zpoly::mul(&acc, &lifted[i]), m));
            let cand = zpoly::primitive(&symmetric(&prod, m));
            if let Some(q) = zpoly::exact_div(&cur, &cand) {
                out.push(cand);
                cur = zpoly::primitive(&q);
                lifted = lifted.into_iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, g)| g).collect();
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    out.push(cur);
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Polynomial {
        Polynomial::from_ints(v)
    }

    #[test]
    fn squarefree_parts() {
        // T^4 (T^2 - 1)^3 (T + 5)
        let f = &(&p(&[0, 0, 0, 0, 1]) * &p(&[-1, 0, 1]).pow(3)) * &p(&[5, 1]);
        let sq = squarefree_decomposition(&f).unwrap();
        assert_eq!(sq, vec![(p(&[5, 1]), 1), (p(&[-1, 0, 1]), 3), (p(&[0, 1]), 4)]);
    }

    #[test]
    fn discriminant_of_the_rank_two_surface() {
        // -16 T^4 (27 - 4T^2)
        let f = p(&[0, 0, 0, 0, -432, 0, 64]);
        let (lead, fac) = factor_over_q(&f).unwrap();
        assert_eq!(lead, Rational::from_integer(64.into()));
        let quad = p(&[-27, 0, 4]).monic();
        assert_eq!(fac, vec![(p(&[0, 1]), 4), (quad, 1)]);
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // T^4 - 10T^2 + 1 is irreducible over Q but splits modulo every prime
        let f = p(&[1, 0, -10, 0, 1]);
        let (_, fac) = factor_over_q(&f).unwrap();
        assert_eq!(fac, vec![(f.clone(), 1)]);
        // (T^4 - 10T^2 + 1)(2T^3 - 3)(T^2 + T + 7)
        let g = &(&f * &p(&[-3, 0, 0, 2])) * &p(&[7, 1, 1]);
        let (lead, fac) = factor_over_q(&g).unwrap();
        assert_eq!(lead, Rational::from_integer(2.into()));
        assert_eq!(fac.len(), 3);
        let mut prod = Polynomial::constant(lead);
        for (h, e) in &fac {
            prod = &prod * &h.pow(*e);
        }
        assert_eq!(prod, g);
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 1), vec![vec![0], vec![1], vec![2]]);
    }
}
