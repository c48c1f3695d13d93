//! Integer helpers shared by the local-field code.

pub fn is_prime(n: u64) -> bool {
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

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

/// Prime factorisation of |n| by trial division, as (prime, exponent) pairs.
pub fn factor(n: i128) -> Vec<(u64, u32)> {
    let mut n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d as u64, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

pub fn rem(a: i128, m: i128) -> i128 {
    let r = a % m;
    if r < 0 {
        r + m
    } else {
        r
    }
}

pub fn pow_mod(base: i128, mut exp: u128, m: i128) -> i128 {
    let mut acc = 1 % m;
    let mut b = rem(base, m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (rem(a, m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 == 1 || (m == 1 && r0 == 0) {
        Some(rem(s0, m))
    } else {
        None
    }
}

/// Splits `n != 0` as p^v * w with p not dividing w.
pub fn split_p(n: i128, p: i128) -> (u32, i128) {
    assert!(n != 0);
    let mut v = 0;
    let mut w = n;
    while w % p == 0 {
        w /= p;
        v += 1;
    }
    (v, w)
}

/// Legendre symbol (a/p) for odd prime p, 0 when p | a.
pub fn legendre(a: i128, p: i128) -> i32 {
    let a = rem(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, ((p - 1) / 2) as u128, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn smallest_nonresidue(p: i128) -> i128 {
    (2..p).find(|&a| legendre(a, p) == -1).expect("odd prime has a non-residue")
}

/// Square root of a unit square `w` modulo p^k (p odd), by Hensel lifting.
pub fn sqrt_mod_pk(w: i128, p: i128, k: u32) -> Option<i128> {
    let w0 = rem(w, p);
    let r0 = (1..p).find(|&r| r * r % p == w0)?;
    let mut r = r0;
    let mut modulus = p;
    for _ in 1..k {
        modulus *= p;
        // r <- r - (r^2 - w) / (2r)
        let f = rem(r * r - w, modulus);
        let inv = inv_mod(2 * r, modulus)?;
        r = rem(r - f * inv, modulus);
    }
    Some(rem(r, modulus))
}

pub fn ceil_div(a: i64, b: i64) -> i64 {
    if a <= 0 {
        -((-a) / b)
    } else {
        (a + b - 1) / b
    }
}

/// Distinct prime divisors of n.
pub fn prime_divisors(n: i128) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_two_mod_625() {
        assert_eq!(inv_mod(2, 625), Some(313));
    }

    #[test]
    fn hensel_square_root() {
        let r = sqrt_mod_pk(4 + 7 * 7, 7, 5).unwrap();
        assert_eq!(rem(r * r - 53, 7i128.pow(5)), 0);
    }

    #[test]
    fn factorisation() {
        assert_eq!(factor(-360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(smallest_nonresidue(7), 3);
        assert_eq!(split_p(-50, 5), (2, -2));
    }
}
