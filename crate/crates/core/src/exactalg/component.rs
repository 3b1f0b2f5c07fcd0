//! Elements of R[q]/Φ_e(q)^n, with all arithmetic done over the fraction
//! field and denominators checked afterwards.

use super::arith::Rational;
use super::cyclotomic::cyclotomic_power;
use super::numring::{RElement, RingRef};
use super::poly::{Coeff, Poly, Var};
use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

type ModulusCache = Mutex<HashMap<(u64, u32), Arc<Poly>>>;

fn modulus_cache() -> &'static ModulusCache {
    static CACHE: OnceLock<ModulusCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Φ_e(q)^n, memoised; the values never change once computed.
pub fn component_modulus(e: u64, n: u32) -> Arc<Poly> {
    let mut cache = modulus_cache().lock().expect("modulus cache poisoned");
    cache.entry((e, n)).or_insert_with(|| Arc::new(cyclotomic_power(e, n))).clone()
}

#[derive(Clone)]
pub struct ComponentElement {
    ring: RingRef,
    e: u64,
    n: u32,
    modulus: Arc<Poly>,
    value: Poly<RElement>,
}

impl PartialEq for ComponentElement {
    fn eq(&self, o: &Self) -> bool {
        self.e == o.e && self.n == o.n && self.value == o.value
    }
}

impl fmt::Debug for ComponentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C[e={},n={}]{}", self.e, self.n, self.value.render())
    }
}

/// Lift a rational polynomial in q to one with coefficients in R.
pub fn rpoly_from_rational(ring: &RingRef, p: &Poly) -> Poly<RElement> {
    Poly::new(
        Var::Q,
        p.coeffs().iter().map(|c| RElement::from_rational(ring, c.clone())).collect(),
    )
}

impl ComponentElement {
    pub fn from_poly(ring: &RingRef, e: u64, n: u32, value: Poly<RElement>) -> Self {
        assert!(e >= 1 && n >= 1, "component needs e ≥ 1 and n ≥ 1");
        let modulus = component_modulus(e, n);
        let value = value.with_var(Var::Q).rem_monic(&modulus);
        ComponentElement { ring: ring.clone(), e, n, modulus, value }
    }

    /// Reduction of a polynomial with rational coefficients.
    pub fn from_rational_poly(ring: &RingRef, e: u64, n: u32, p: &Poly) -> Self {
        ComponentElement::from_poly(ring, e, n, rpoly_from_rational(ring, p))
    }

    pub fn constant(ring: &RingRef, e: u64, n: u32, c: RElement) -> Self {
        ComponentElement::from_poly(ring, e, n, Poly::constant(Var::Q, c))
    }

    pub fn from_int(ring: &RingRef, e: u64, n: u32, k: i64) -> Self {
        ComponentElement::constant(ring, e, n, RElement::from_int(ring, k))
    }

    pub fn zero(ring: &RingRef, e: u64, n: u32) -> Self {
        ComponentElement::from_poly(ring, e, n, Poly::zero(Var::Q))
    }

    pub fn one(ring: &RingRef, e: u64, n: u32) -> Self {
        ComponentElement::from_int(ring, e, n, 1)
    }

    /// The class of q.
    pub fn q(ring: &RingRef, e: u64, n: u32) -> Self {
        ComponentElement::from_poly(
            ring,
            e,
            n,
            Poly::monomial(Var::Q, RElement::one(ring), 1),
        )
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn conductor(&self) -> u64 {
        self.e
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn value(&self) -> &Poly<RElement> {
        &self.value
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    fn same_shape(&self, o: &Self) {
        assert!(
            self.e == o.e && self.n == o.n,
            "component shape mismatch: (e={}, n={}) vs (e={}, n={})",
            self.e,
            self.n,
            o.e,
            o.n
        );
    }

    fn with_value(&self, value: Poly<RElement>) -> Self {
        ComponentElement {
            ring: self.ring.clone(),
            e: self.e,
            n: self.n,
            modulus: self.modulus.clone(),
            value,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_shape(o);
        self.with_value(self.value.add(&o.value))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_shape(o);
        self.with_value(self.value.sub(&o.value))
    }

    pub fn neg(&self) -> Self {
        self.with_value(self.value.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_shape(o);
        self.with_value(self.value.mul(&o.value).rem_monic(&self.modulus))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.with_value(self.value.scale(r))
    }

    pub fn mul_scalar(&self, c: &RElement) -> Self {
        self.with_value(self.value.mul_coeff(c))
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = ComponentElement::one(&self.ring, self.e, self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Reinterpret modulo Φ_e^{n'} for n' ≤ n.
    pub fn reduce_exponent(&self, n: u32) -> Self {
        assert!(n >= 1 && n <= self.n, "cannot raise precision by reduction");
        ComponentElement::from_poly(&self.ring, self.e, n, self.value.clone())
    }

    /// Substitute q ↦ q^d and reduce modulo Φ_{e'}^{n'}. Well defined when
    /// Φ_{e'}^{n'} divides Φ_e(q^d)^n; callers are responsible for that.
    pub fn substitute_q_power(&self, d: u64, e_target: u64, n_target: u32) -> Self {
        ComponentElement::from_poly(
            &self.ring,
            e_target,
            n_target,
            self.value.substitute_power(d as usize),
        )
    }

    /// True when the residue is divisible by Φ_e, i.e. vanishes mod Φ_e.
    pub fn divisible_by_phi(&self) -> bool {
        self.value.rem_monic(&component_modulus(self.e, 1)).is_zero()
    }

    pub fn denominator_support(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        for c in self.value.coeffs() {
            out.extend(c.denominator_support());
        }
        out
    }

    /// Error if a denominator prime lies outside `allowed` ∪ primes(N).
    pub fn check_support(&self, allowed: &BTreeSet<u64>) -> Result<()> {
        let mut all = allowed.clone();
        all.extend(self.ring.n_primes().iter().copied());
        for c in self.value.coeffs() {
            if let Some(prime) = c.foreign_prime(&all) {
                return Err(Error::DenominatorNotAllowed { prime });
            }
        }
        Ok(())
    }

    /// Inverse over the fraction field, without support check. Uses an
    /// extended gcd modulo Φ_e and Newton steps up to Φ_e^n.
    pub fn inverse_unchecked(&self) -> Result<Self> {
        let base_mod = component_modulus(self.e, 1);
        let a1 = self.value.rem_monic(&base_mod);
        if a1.is_zero() {
            return Err(Error::NotInvertible);
        }
        let phi = rpoly_from_rational(&self.ring, &base_mod);
        let (g, s) = a1.ext_gcd_mod(&phi).ok_or(Error::NotInvertible)?;
        if g.degree() != Some(0) {
            return Err(Error::NotInvertible);
        }
        let mut b = self.with_value(s.rem_monic(&self.modulus));
        let two = ComponentElement::from_int(&self.ring, self.e, self.n, 2);
        let one = ComponentElement::one(&self.ring, self.e, self.n);
        let mut precision = 1;
        while precision < self.n {
            b = b.mul(&two.sub(&self.mul(&b)));
            precision *= 2;
        }
        debug_assert_eq!(self.mul(&b), one);
        Ok(b)
    }

    /// Inverse, failing when it needs a prime outside `allowed` ∪ primes(N).
    pub fn invert(&self, allowed: &BTreeSet<u64>) -> Result<Self> {
        let b = self.inverse_unchecked()?;
        b.check_support(allowed)?;
        Ok(b)
    }

    /// a·b^{-1}, with the quotient's denominators checked.
    pub fn exact_divide(&self, b: &Self, allowed: &BTreeSet<u64>) -> Result<Self> {
        self.same_shape(b);
        let quotient = self.mul(&b.inverse_unchecked()?);
        quotient.check_support(allowed)?;
        Ok(quotient)
    }

    pub fn render(&self) -> String {
        self.value.render()
    }
}

impl Coeff for ComponentElement {
    fn c_is_zero(&self) -> bool {
        self.value.is_zero()
    }
    fn zero_like(&self) -> Self {
        ComponentElement::zero(&self.ring, self.e, self.n)
    }
    fn one_like(&self) -> Self {
        ComponentElement::one(&self.ring, self.e, self.n)
    }
    fn cadd(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn csub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn cmul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn cneg(&self) -> Self {
        self.neg()
    }
    fn cscale(&self, r: &Rational) -> Self {
        self.scale(r)
    }
    fn render(&self) -> String {
        self.value.render()
    }
}

/// Component invert as a free function.
pub fn component_invert(a: &ComponentElement, allowed: &BTreeSet<u64>) -> Result<ComponentElement> {
    a.invert(allowed)
}

/// Exact division as a free function.
pub fn exact_divide(
    a: &ComponentElement,
    b: &ComponentElement,
    allowed: &BTreeSet<u64>,
) -> Result<ComponentElement> {
    a.exact_divide(b, allowed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::cyclotomic::{cyclotomic_poly, q_integer, q_integer_at};
    use crate::exactalg::numring::NumberRing;
    use num_bigint::BigInt;

    fn none() -> BTreeSet<u64> {
        BTreeSet::new()
    }

    #[test]
    fn invert_q_mod_phi2() {
        let z = NumberRing::integers();
        let q = ComponentElement::q(&z, 2, 1);
        assert_eq!(q.invert(&none()).unwrap(), q);
    }

    #[test]
    fn invert_q_integer_three_mod_phi2() {
        let z = NumberRing::integers();
        let a = ComponentElement::from_rational_poly(&z, 2, 1, &q_integer(3));
        assert_eq!(a.invert(&none()).unwrap(), ComponentElement::one(&z, 2, 1));
    }

    #[test]
    fn phi_itself_is_not_invertible() {
        let z = NumberRing::integers();
        let a = ComponentElement::from_rational_poly(&z, 2, 1, &cyclotomic_poly(2));
        assert!(a.is_zero());
        assert_eq!(a.invert(&none()), Err(Error::NotInvertible));
        let b = ComponentElement::from_rational_poly(&z, 2, 2, &cyclotomic_poly(2));
        assert_eq!(b.invert(&none()), Err(Error::NotInvertible));
    }

    #[test]
    fn divide_by_two() {
        let z = NumberRing::integers();
        let c = ComponentElement::from_rational_poly(&z, 2, 2, &Poly::from_ints(Var::Q, &[3, 1]));
        let phi = ComponentElement::from_rational_poly(&z, 2, 2, &cyclotomic_poly(2));
        let a = phi.mul(&c).scale(&super::super::arith::rat(2));
        let two = ComponentElement::from_int(&z, 2, 2, 2);
        assert_eq!(a.exact_divide(&two, &none()).unwrap(), phi.mul(&c));
    }

    #[test]
    fn q_integer_four_over_two_at_q_squared() {
        let z = NumberRing::integers();
        let a = ComponentElement::from_rational_poly(&z, 2, 2, &q_integer(4));
        let b = ComponentElement::from_rational_poly(&z, 2, 2, &q_integer_at(2, 2));
        let expect = ComponentElement::from_rational_poly(&z, 2, 2, &q_integer(2));
        assert_eq!(a.exact_divide(&b, &none()).unwrap(), expect);
    }

    #[test]
    fn forbidden_denominator_is_reported() {
        let z = NumberRing::integers();
        let one = ComponentElement::one(&z, 1, 1);
        let two = ComponentElement::from_int(&z, 1, 1, 2);
        assert_eq!(
            one.exact_divide(&two, &none()),
            Err(Error::DenominatorNotAllowed { prime: BigInt::from(2) })
        );
        let allowed: BTreeSet<u64> = [2].into_iter().collect();
        assert!(one.exact_divide(&two, &allowed).is_ok());
    }

    #[test]
    fn newton_lift_over_zeta5() {
        let r = NumberRing::cyclotomic(5);
        let zeta = RElement::gen(&r);
        let a = ComponentElement::q(&r, 3, 3)
            .mul_scalar(&zeta)
            .add(&ComponentElement::from_int(&r, 3, 3, 1));
        let b = a.inverse_unchecked().unwrap();
        assert_eq!(a.mul(&b), ComponentElement::one(&r, 3, 3));
    }
}
