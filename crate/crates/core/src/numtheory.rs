//! Small integer helpers shared by the constructions.

use num_integer::Integer;

use crate::error::{Error, Result};

/// `gcd(0, m) = m`.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Deterministic for every `u64`.
pub fn is_prime(x: u64) -> bool {
    primal::is_prime(x)
}

/// Largest prime `q` with `lo < q <= hi`.
pub fn largest_prime_in(lo: u64, hi: u64) -> Option<u64> {
    (lo.saturating_add(1)..=hi).rev().find(|&q| is_prime(q))
}

/// Smallest prime `p >= x`.
pub fn next_prime(x: u64) -> u64 {
    (x.max(2)..)
        .find(|&p| is_prime(p))
        .expect("primes are unbounded")
}

/// Smallest prime factor, `None` for `m <= 1`.
pub fn smallest_prime_factor(m: u64) -> Option<u64> {
    if m <= 1 {
        return None;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            return Some(d);
        }
        d += 1;
    }
    Some(m)
}

/// Euler's totient by trial division.
pub fn totient(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// All positive divisors of `m >= 1`, ascending.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Multiplicative inverse of `a` modulo `m`, when `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    let eg = (a as i128 % m as i128).extended_gcd(&(m as i128));
    (eg.gcd == 1).then(|| eg.x.rem_euclid(m as i128) as u64)
}

pub fn checked_factorial(p: u64) -> Result<u64> {
    (1..=p)
        .try_fold(1u64, |acc, i| acc.checked_mul(i))
        .ok_or_else(|| Error::Overflow(format!("{p}! does not fit in 64 bits")))
}
