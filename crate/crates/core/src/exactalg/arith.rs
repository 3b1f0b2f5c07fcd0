//! Integer helpers: divisors, prime factors, valuations, and the rational
//! type with its denominator bookkeeping.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;

/// Exact rationals over arbitrary-precision integers.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sorted list of the positive divisors of `n`.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0, "divisors of zero");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == vec![n]
}

/// p-adic valuation of a positive integer.
pub fn vp(p: u64, mut n: u64) -> u32 {
    assert!(n > 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// If `n` is a prime power `p^k` with `k >= 1`, returns `p`.
pub fn prime_power_base(n: u64) -> Option<u64> {
    let ps = prime_factors(n);
    if ps.len() == 1 {
        Some(ps[0])
    } else {
        None
    }
}

/// Inverse of `a` modulo `m` (both positive, coprime), as a value in `[0, m)`.
pub fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    let r = BigInt::from(a).extended_gcd(&BigInt::from(m));
    if !r.gcd.is_one() {
        return None;
    }
    r.x.mod_floor(&BigInt::from(m)).to_u64()
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let r = a.mod_floor(m).extended_gcd(m);
    if !r.gcd.is_one() {
        return None;
    }
    Some(r.x.mod_floor(m))
}

/// Reduce a rational with denominator prime to `modulus` into `[0, modulus)`.
pub fn rational_mod(r: &Rational, modulus: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(r.denom(), modulus)?;
    Some((r.numer() * inv).mod_floor(modulus))
}

const TRIAL_BOUND: u64 = 1_000_000;

/// Removes all factors in `allowed` from `n`; returns the smallest remaining
/// prime factor, or the cofactor itself when trial division gives up.
pub fn first_foreign_prime(n: &BigInt, allowed: &BTreeSet<u64>) -> Option<BigInt> {
    let mut rest = n.abs();
    for &p in allowed {
        let bp = BigInt::from(p);
        while (&rest % &bp).is_zero() {
            rest /= &bp;
        }
    }
    if rest.is_one() {
        return None;
    }
    let mut p = 2u64;
    while p < TRIAL_BOUND {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        if (&rest % &bp).is_zero() {
            return Some(bp);
        }
        p += 1;
    }
    Some(rest)
}

/// Primes dividing `n`, by trial division. Only meant for the small
/// denominators that occur in practice.
pub fn bigint_prime_factors(n: &BigInt) -> BTreeSet<u64> {
    let mut rest = n.abs();
    let mut out = BTreeSet::new();
    let mut p = 2u64;
    while !rest.is_one() && !rest.is_zero() {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            if let Some(r) = rest.to_u64() {
                out.insert(r);
            }
            break;
        }
        if (&rest % &bp).is_zero() {
            out.insert(p);
            while (&rest % &bp).is_zero() {
                rest /= &bp;
            }
        }
        p += 1;
    }
    out
}

/// Canonical text for a rational: `"3"` or `"-1/2"`.
pub fn render_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}
