//! Seeded random inputs for property checks.

use crate::exactalg::{rat, Poly, RElement, RingRef, Var};
use crate::habiro::{HabiroTruncElement, ModulusProfile, NygaardTwistElement};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Element of R with integer coordinates in [-bound, bound].
pub fn relement(ring: &RingRef, rng: &mut TestRng, bound: i64) -> RElement {
    let v: Vec<i64> = (0..ring.degree()).map(|_| rng.gen_range(-bound..=bound)).collect();
    RElement::from_ints(ring, &v)
}

/// Nonzero element of R with small integer coordinates.
pub fn nonzero_relement(ring: &RingRef, rng: &mut TestRng, bound: i64) -> RElement {
    loop {
        let x = relement(ring, rng, bound);
        if !crate::exactalg::Coeff::c_is_zero(&x) {
            return x;
        }
    }
}

/// Polynomial in q of degree < len with coefficients from `relement`.
pub fn rpoly(ring: &RingRef, rng: &mut TestRng, len: usize, bound: i64) -> Poly<RElement> {
    Poly::new(Var::Q, (0..len).map(|_| relement(ring, rng, bound)).collect())
}

/// Integer polynomial in q of degree < len.
pub fn int_qpoly(rng: &mut TestRng, len: usize, bound: i64) -> Poly {
    Poly::new(Var::Q, (0..len).map(|_| rat(rng.gen_range(-bound..=bound))).collect())
}

/// (q^m - 1)·h for a random global polynomial h.
pub fn nygaard_twist(ring: &RingRef, m: u64, rng: &mut TestRng) -> NygaardTwistElement {
    let h = HabiroTruncElement::from_polynomial(ring, &rpoly(ring, rng, m as usize + 2, 2), &ModulusProfile::uniform(m, 1));
    NygaardTwistElement::from_habiro(&h)
}
