//! Cyclotomic polynomials, q-integers and the ideal (p, q-1)^r.

use super::arith::{bigint_prime_factors, divisors, rat, Rational};
use super::poly::{resultant, Poly, Var};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

/// Φ_e(q), by exact division of q^e - 1 by the lower cyclotomic factors.
pub fn cyclotomic_poly(e: u64) -> Poly {
    assert!(e >= 1, "cyclotomic index must be positive");
    let mut memo = HashMap::new();
    cyclo_memo(e, &mut memo)
}

fn cyclo_memo(e: u64, memo: &mut HashMap<u64, Poly>) -> Poly {
    if let Some(p) = memo.get(&e) {
        return p.clone();
    }
    let mut num = Poly::x_pow(Var::Q, e as usize).sub(&Poly::one(Var::Q));
    for d in divisors(e) {
        if d < e {
            let phi_d = cyclo_memo(d, memo);
            num = num.exact_div(&phi_d);
        }
    }
    memo.insert(e, num.clone());
    num
}

/// Φ_e(q)^n
pub fn cyclotomic_power(e: u64, n: u32) -> Poly {
    cyclotomic_poly(e).pow(n as u64, &Rational::one())
}

/// [k]_q = 1 + q + ... + q^{k-1}; [0]_q = 0.
pub fn q_integer(k: u64) -> Poly {
    Poly::new(Var::Q, vec![Rational::one(); k as usize])
}

/// [k]_{q^s}
pub fn q_integer_at(k: u64, s: u64) -> Poly {
    q_integer(k).substitute_power(s as usize)
}

/// Decides g ∈ (p, q-1)^r in ℤ[q] from the expansion g = Σ a_i (q-1)^i:
/// only a_i = Σ_j g_j·C(j, i) with i < r carry a condition p^{r-i} | a_i.
pub fn in_p_qminus1_power(g: &Poly, p: u64, r: u32) -> bool {
    assert!(g.is_integral(), "membership is defined for integer polynomials");
    let p = BigInt::from(p);
    (0..r as usize).all(|i| {
        let mut binom = BigInt::one();
        let mut a = BigInt::zero();
        for (j, c) in g.coeffs().iter().enumerate().skip(i) {
            if j > i {
                binom = binom * j / (j - i);
            }
            a += c.numer() * &binom;
        }
        let modulus = num_traits::pow(p.clone(), r as usize - i);
        a.mod_floor(&modulus).is_zero()
    })
}

/// q^k - 1
pub fn q_pow_minus_one(k: u64) -> Poly {
    Poly::x_pow(Var::Q, k as usize).sub(&Poly::one(Var::Q))
}

/// Integer polynomial from an integer slice in the variable q.
pub fn qpoly(v: &[i64]) -> Poly {
    Poly::from_ints(Var::Q, v)
}

/// The constant polynomial `k` in q.
pub fn qconst(k: i64) -> Poly {
    Poly::constant(Var::Q, rat(k))
}

/// Primes dividing Res(Φ_a, Φ_b), memoised.
pub fn resultant_primes(a: u64, b: u64) -> BTreeSet<u64> {
    type Cache = Mutex<HashMap<(u64, u64), BTreeSet<u64>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (a.min(b), a.max(b));
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("resultant cache poisoned").get(&key) {
        return s.clone();
    }
    let r = resultant(&cyclotomic_poly(a), &cyclotomic_poly(b));
    let primes = if r.is_zero() { BTreeSet::new() } else { bigint_prime_factors(r.numer()) };
    cache.lock().expect("resultant cache poisoned").insert(key, primes.clone());
    primes
}

/// Primes that become invertible at level m after inverting Φ_{e'}(q) for
/// every e' | m with e' > 1 and d ∤ e', as seen from the kept components
/// d | e | m.
pub fn at_d_support(m: u64, d: u64) -> BTreeSet<u64> {
    let ds = divisors(m);
    let mut out = BTreeSet::new();
    for &e in ds.iter().filter(|&&e| e % d == 0) {
        for &e2 in ds.iter().filter(|&&e2| e2 > 1 && e2 % d != 0) {
            out.extend(resultant_primes(e, e2));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), qpoly(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), qpoly(&[1, 1]));
        assert_eq!(cyclotomic_poly(6), qpoly(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), qpoly(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn q_integers() {
        assert_eq!(q_integer(0), Poly::zero(Var::Q));
        assert_eq!(q_integer(1), qpoly(&[1]));
        assert_eq!(q_integer(3), qpoly(&[1, 1, 1]));
        let prod = cyclotomic_poly(2).mul(&cyclotomic_poly(3)).mul(&cyclotomic_poly(6));
        assert_eq!(q_integer(6), prod);
    }

    #[test]
    fn product_over_divisors_is_q_e_minus_one() {
        for e in 1..=60 {
            let prod = divisors(e)
                .into_iter()
                .fold(Poly::one(Var::Q), |acc, d| acc.mul(&cyclotomic_poly(d)));
            assert_eq!(prod, q_pow_minus_one(e), "e = {e}");
        }
    }

    #[test]
    fn q_integer_factorisation() {
        for k in 1..=60 {
            let prod = divisors(k)
                .into_iter()
                .filter(|&e| e > 1)
                .fold(Poly::one(Var::Q), |acc, e| acc.mul(&cyclotomic_poly(e)));
            assert_eq!(prod, q_integer(k), "k = {k}");
        }
    }

    #[test]
    fn ideal_membership_examples() {
        assert!(in_p_qminus1_power(&q_pow_minus_one(8), 2, 3));
        assert!(in_p_qminus1_power(&qpoly(&[-1, 1]), 2, 1));
        assert!(!in_p_qminus1_power(&q_pow_minus_one(2), 2, 3));
        assert!(in_p_qminus1_power(&qconst(0), 7, 9));
        assert!(in_p_qminus1_power(&qconst(5), 5, 1));
        assert!(!in_p_qminus1_power(&qconst(5), 5, 2));
    }

    #[test]
    fn resultant_primes_follow_prime_power_rule() {
        use super::super::arith::prime_power_base;
        for a in 1..=24u64 {
            for b in 1..a {
                let expect: BTreeSet<u64> = if a % b == 0 {
                    prime_power_base(a / b).into_iter().collect()
                } else {
                    BTreeSet::new()
                };
                assert_eq!(resultant_primes(a, b), expect, "({a}, {b})");
            }
        }
    }

    #[test]
    fn at_d_support_examples() {
        assert_eq!(at_d_support(2, 2), BTreeSet::new());
        assert_eq!(at_d_support(4, 2), BTreeSet::new());
        assert_eq!(at_d_support(6, 2), BTreeSet::from([2]));
        assert_eq!(at_d_support(6, 3), BTreeSet::from([3]));
        assert_eq!(at_d_support(12, 4), BTreeSet::from([2]));
        assert_eq!(at_d_support(12, 6), BTreeSet::from([2, 3]));
    }
}
