use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Integer;
use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization of `|n|` as (prime, exponent) pairs in increasing
/// order. Trial division up to 10⁶, then Miller–Rabin and Brent–Pollard rho.
pub fn int_factor(n: &Integer) -> Result<Vec<(Integer, u32)>> {
    if n.is_zero() {
        return Err(Error::Argument("cannot factor 0".into()));
    }
    let mut m = n.abs();
    let mut out: Vec<(Integer, u32)> = Vec::new();

    if let Some(small) = m.to_u64() {
        for (p, e) in factor_u64(small) {
            out.push((p.into(), e));
        }
        return Ok(out);
    }

    let mut push = |m: &mut Integer, p: u64| {
        let bp = BigInt::from(p);
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            *m = q;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
    };
    push(&mut m, 2);
    push(&mut m, 3);
    let mut d = 5u64;
    while d <= TRIAL_LIMIT {
        if let Some(small) = m.to_u64() {
            let rest = factor_u64(small);
            let mut out = out;
            out.extend(rest.into_iter().map(|(p, e)| (BigInt::from(p), e)));
            return Ok(out);
        }
        for p in [d, d + 2] {
            if (&m % p).is_zero() {
                push(&mut m, p);
            }
        }
        d += 6;
        if d % 6144 == 5 && is_probable_prime(&m) {
            break;
        }
    }
    if !m.is_one() {
        let mut big = Vec::new();
        split_big(m, &mut big);
        big.sort();
        let mut i = 0;
        while i < big.len() {
            let mut e = 1;
            while i + e < big.len() && big[i + e] == big[i] {
                e += 1;
            }
            out.push((big[i].clone(), e as u32));
            i += e;
        }
    }
    Ok(out)
}

fn split_big(n: Integer, acc: &mut Vec<Integer>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        acc.push(n);
        return;
    }
    let s = n.sqrt();
    if &s * &s == n {
        split_big(s.clone(), acc);
        split_big(s, acc);
        return;
    }
    let mut c = 1u64;
    let d = loop {
        if let Some(d) = brent_big(&n, c) {
            break d;
        }
        c += 1;
    };
    split_big(&n / &d, acc);
    split_big(d, acc);
}

fn brent_big(n: &Integer, c: u64) -> Option<Integer> {
    let c = BigInt::from(c);
    let f = |x: &Integer| (x * x + &c) % n;
    let mut y = BigInt::from(2);
    let mut r = 1u64;
    let mut q = BigInt::one();
    let mut g = BigInt::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let m = 64u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (q * (&x - &y).abs()) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if r > (1 << 26) {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

/// Deterministic for n < 3.3·10²⁴, probabilistic with 16 fixed bases above.
pub fn is_probable_prime(n: &Integer) -> bool {
    let n = n.abs();
    if let Some(s) = n.to_u64() {
        return is_prime_u64(s);
    }
    let one = BigInt::one();
    let nm1 = &n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    const BASES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    'outer: for a in BASES {
        let mut x = BigInt::from(a).modpow(&d, &n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % &n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn brent_u64(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mulmod(x, x, n) + c) % n;
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let (mut x, mut ys) = (y, y);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..128.min(r - k) {
                y = f(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += 128;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g != 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_u64(n: u64, acc: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        acc.push(n);
        return;
    }
    let mut c = 1;
    let d = loop {
        if let Some(d) = brent_u64(n, c) {
            break d;
        }
        c += 1;
    };
    split_u64(n / d, acc);
    split_u64(d, acc);
}

pub(crate) fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut take = |n: &mut u64, p: u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    take(&mut n, 2);
    take(&mut n, 3);
    let mut d = 5u64;
    while d <= TRIAL_LIMIT && d * d <= n {
        take(&mut n, d);
        take(&mut n, d + 2);
        d += 6;
        // a prime cofactor ends trial division early
        if d % 6144 == 5 && is_prime_u64(n) {
            break;
        }
    }
    if n > 1 {
        let mut rest = Vec::new();
        split_u64(n, &mut rest);
        rest.sort_unstable();
        for p in rest {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out.sort_unstable();
    out
}
