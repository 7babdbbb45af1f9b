//! Scalar and dense-polynomial arithmetic over a prime field `F_p`.
//!
//! Everything here works on raw `u64` residues with `p < 2^31`, so every
//! product of two reduced residues fits in a `u64`. Polynomials are
//! coefficient vectors, constant term first, with no trailing zeros.

use num_bigint::BigUint;

#[inline]
pub(crate) fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn neg(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub(crate) fn mul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

/// Inverse of a nonzero residue.
pub(crate) fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    // extended Euclid on signed integers
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p as i64) as u64
}

/// Reduce an arbitrary signed integer into `[0, p)`.
pub(crate) fn from_i64(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add(out[i + j], mul(x, y, p), p);
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by nonzero `b`.
pub(crate) fn poly_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let lead_inv = inv(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = mul(r[i], lead_inv, p);
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for j in 0..=db {
            r[i - db + j] = sub(r[i - db + j], mul(c, b[j], p), p);
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    poly_divrem(a, b, p).1
}

/// Monic gcd (empty when both inputs are zero).
pub(crate) fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = inv(lead, p);
        for c in x.iter_mut() {
            *c = mul(*c, li, p);
        }
    }
    x
}

/// Inverse of `a` modulo `m`, if the two are coprime.
pub(crate) fn poly_inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (m.to_vec(), poly_rem(a, m, p));
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1, p);
        let s = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv(r0[0], p);
    let mut out: Vec<u64> = s0.iter().map(|&x| mul(x, c, p)).collect();
    trim(&mut out);
    Some(out)
}

pub(crate) fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    poly_rem(&poly_mul(a, b, p), m, p)
}

pub(crate) fn poly_powmod(base: &[u64], exp: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = poly_rem(&[1], m, p);
    let b = poly_rem(base, m, p);
    for i in (0..exp.bits()).rev() {
        acc = poly_mulmod(&acc, &acc, m, p);
        if exp.bit(i) {
            acc = poly_mulmod(&acc, &b, m, p);
        }
    }
    acc
}

/// Rabin's irreducibility test for a monic polynomial of degree `k >= 1`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    let pb = BigUint::from(p);
    let x = vec![0, 1];
    // frob[i] = x^(p^i) mod f
    let mut frob = Vec::with_capacity(k + 1);
    frob.push(poly_rem(&x, f, p));
    for i in 1..=k {
        let next = poly_powmod(&frob[i - 1], &pb, f, p);
        frob.push(next);
    }
    if !poly_sub(&frob[k], &x, p).is_empty() {
        return false;
    }
    for r in prime_divisors(k as u64) {
        let j = k / r as usize;
        let g = poly_gcd(f, &poly_sub(&frob[j], &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        for a in 1..101u64 {
            assert_eq!(mul(a, inv(a, 101), 101), 1);
        }
    }

    #[test]
    fn irreducible_quadratics_over_f7() {
        // x^2 + b irreducible iff -b is a non-square mod 7
        let squares = [0u64, 1, 2, 4];
        for b in 0..7u64 {
            let expect = !squares.contains(&neg(b, 7));
            assert_eq!(is_irreducible(&[b, 0, 1], 7), expect, "b = {b}");
        }
    }

    #[test]
    fn poly_inverse() {
        let m = [1u64, 0, 1]; // x^2 + 1 over F_7
        let a = [3u64, 5];
        let ai = poly_inv_mod(&a, &m, 7).unwrap();
        assert_eq!(poly_mulmod(&a, &ai, &m, 7), vec![1]);
    }
}
