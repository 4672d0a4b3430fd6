//! Dense polynomials over a prime field F_p with word-sized p (< 2⁶³),
//! constant term first and always trimmed.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer as _;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type PolyP = Vec<u64>;

/// 2⁶¹ − 1 and the two largest primes below 2⁶²; fixed so results are reproducible.
pub const LARGE_PRIMES: [u64; 3] = [2_305_843_009_213_693_951, 4_611_686_018_427_387_847, 4_611_686_018_427_387_817];

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue (p prime).
pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow(a, p - 2, p)
}

/// Residue of an integer; `p` must fit in u64.
pub fn reduce(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap_or(0)
}

/// Residue of a rational, `None` if p divides the denominator.
pub fn reduce_rational(q: &super::Rational, p: u64) -> Option<u64> {
    let d = reduce(q.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mul(reduce(q.numer(), p), inv(d, p), p))
}

pub fn trim(a: &mut PolyP) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn deg(a: &[u64]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn from_ints(a: &[BigInt], p: u64) -> PolyP {
    let mut v: PolyP = a.iter().map(|c| reduce(c, p)).collect();
    trim(&mut v);
    v
}

pub fn padd(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let mut v: PolyP = (0..n).map(|i| add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p)).collect();
    trim(&mut v);
    v
}

pub fn psub(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let mut v: PolyP = (0..n).map(|i| sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p)).collect();
    trim(&mut v);
    v
}

pub fn pscale(a: &[u64], c: u64, p: u64) -> PolyP {
    let mut v: PolyP = a.iter().map(|&x| mul(x, c, p)).collect();
    trim(&mut v);
    v
}

pub fn pmul(a: &[u64], b: &[u64], p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // accumulate in u128 and reduce lazily; each product is < 2¹²⁶
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = acc[i + j] + x as u128 * y as u128;
            acc[i + j] = if t >= pp << 64 { t % pp } else { t };
        }
    }
    let mut v: PolyP = acc.into_iter().map(|t| (t % pp) as u64).collect();
    trim(&mut v);
    v
}

/// Quotient and remainder; `b` must be nonzero.
pub fn pdivrem(a: &[u64], b: &[u64], p: u64) -> (PolyP, PolyP) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let li = inv(b[db], p);
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = mul(r[k + db], li, p);
        if c == 0 {
            continue;
        }
        q[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = sub(r[k + j], mul(c, bj, p), p);
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn prem(a: &[u64], b: &[u64], p: u64) -> PolyP {
    pdivrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> PolyP {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => pscale(a, inv(lc, p), p),
    }
}

/// Monic gcd; gcd(0, 0) = 0.
pub fn pgcd(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = prem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// Extended gcd: (g, s, t) with s·a + t·b = g, g monic.
pub fn pxgcd(a: &[u64], b: &[u64], p: u64) -> (PolyP, PolyP, PolyP) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let s2 = psub(&s0, &pmul(&q, &s1, p), p);
        let t2 = psub(&t0, &pmul(&q, &t1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(&lc) => {
            let li = inv(lc, p);
            (pscale(&r0, li, p), pscale(&s0, li, p), pscale(&t0, li, p))
        }
    }
}

pub fn pderiv(a: &[u64], p: u64) -> PolyP {
    let mut v: PolyP = a.iter().enumerate().skip(1).map(|(i, &c)| mul(c, i as u64 % p, p)).collect();
    trim(&mut v);
    v
}

pub fn peval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| add(mul(acc, x, p), c, p))
}

/// `base^e mod m` in F_p[T].
pub fn ppowmod(base: &[u64], e: u128, m: &[u64], p: u64) -> PolyP {
    ppowmod_big(base, &BigUint::from(e), m, p)
}

pub fn ppowmod_big(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> PolyP {
    let mut r = prem(&[1], m, p);
    let b = prem(base, m, p);
    for i in (0..e.bits()).rev() {
        r = prem(&pmul(&r, &r, p), m, p);
        if e.bit(i) {
            r = prem(&pmul(&r, &b, p), m, p);
        }
    }
    r
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs (product of all irreducible factors of degree d, d).
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(PolyP, usize)> {
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0;
    while deg(&f).is_some_and(|n| n >= 2 * (d + 1)) {
        d += 1;
        h = ppowmod(&h, p as u128, &f, p);
        let g = pgcd(&f, &psub(&h, &x, p), p);
        if g.len() > 1 {
            f = pdivrem(&f, &g, p).0;
            h = prem(&h, &f, p);
            out.push((g, d));
        }
    }
    if f.len() > 1 {
        let n = f.len() - 1;
        out.push((monic(&f, p), n));
    }
    out
}

/// Splits a monic product of distinct irreducibles of common degree `d`
/// (odd p) into its factors, using a seeded generator.
pub fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<PolyP> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let mut a: PolyP = (0..n).map(|_| rng.next_u64() % p).collect();
        trim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let b = ppowmod_big(&a, &exp, f, p);
        let g = pgcd(f, &psub(&b, &[1], p), p);
        if g.len() > 1 && g.len() < f.len() {
            let h = pdivrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&monic(&h, p), d, p, rng));
            return out;
        }
    }
}

/// Monic irreducible factors of a monic squarefree polynomial over F_p, p odd.
pub fn factor_squarefree(f: &[u64], p: u64, seed: u64) -> Vec<PolyP> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, &mut rng));
    }
    out.sort();
    out
}

/// Number of distinct roots in F_p of a nonzero polynomial (odd p).
pub fn count_roots(f: &[u64], p: u64) -> usize {
    let f = monic(f, p);
    if f.len() <= 1 {
        return 0;
    }
    let xp = ppowmod(&[0, 1], p as u128, &f, p);
    let g = pgcd(&f, &psub(&xp, &[0, 1], p), p);
    g.len() - 1
}

pub fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|c| c.is_zero())
}
