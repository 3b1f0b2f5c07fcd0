//! Monogenic étale number rings ℤ[x]/(f) with an integer N inverted.

use super::arith::{
    bigint_prime_factors, first_foreign_prime, prime_factors, rat, Rational,
};
use super::cyclotomic::cyclotomic_poly;
use super::poly::{resultant, Coeff, Poly, TryInv, Var};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub struct NumberRing {
    f: Poly,
    n_inv: u64,
    label: String,
    n_primes: BTreeSet<u64>,
}

pub type RingRef = Arc<NumberRing>;

impl NumberRing {
    /// Builds ℤ[x]/(f)[1/N] from integer coefficients, lowest first.
    /// Rejects non-monic f and f whose discriminant has a prime not dividing N.
    pub fn new(f: &[BigInt], n_inv: u64, label: impl Into<String>) -> Result<RingRef> {
        if n_inv == 0 {
            return Err(Error::InvalidRing("N must be positive".into()));
        }
        let poly = Poly::new(Var::X, f.iter().map(|c| Rational::from_integer(c.clone())).collect());
        match poly.degree() {
            None | Some(0) => {
                return Err(Error::InvalidRing("f must have positive degree".into()))
            }
            _ => {}
        }
        if !poly.lead().unwrap().is_one() {
            return Err(Error::InvalidRing("f must be monic".into()));
        }
        let n_primes: BTreeSet<u64> = prime_factors(n_inv).into_iter().collect();
        let disc = resultant(&poly, &poly.derivative());
        if disc.is_zero() {
            return Err(Error::InvalidRing("f is not separable".into()));
        }
        if let Some(p) = first_foreign_prime(disc.numer(), &n_primes) {
            return Err(Error::InvalidRing(format!(
                "discriminant {} has prime factor {} not dividing N = {}",
                disc, p, n_inv
            )));
        }
        Ok(Arc::new(NumberRing { f: poly, n_inv, label: label.into(), n_primes }))
    }

    pub fn from_i64(f: &[i64], n_inv: u64, label: impl Into<String>) -> Result<RingRef> {
        let v: Vec<BigInt> = f.iter().map(|&c| BigInt::from(c)).collect();
        NumberRing::new(&v, n_inv, label)
    }

    /// ℤ, presented as ℤ[x]/(x).
    pub fn integers() -> RingRef {
        NumberRing::from_i64(&[0, 1], 1, "Z").expect("valid ring")
    }

    /// ℤ[i][1/2].
    pub fn gaussian() -> RingRef {
        NumberRing::from_i64(&[1, 0, 1], 2, "Z[i][1/2]").expect("valid ring")
    }

    /// ℤ[ζ_g][1/g] presented by Φ_g(x).
    pub fn cyclotomic(g: u64) -> RingRef {
        let f: Vec<BigInt> = cyclotomic_poly(g)
            .coeffs()
            .iter()
            .map(|c| c.numer().clone())
            .collect();
        NumberRing::new(&f, g, format!("Z[zeta{g}][1/{g}]")).expect("valid ring")
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.degree().unwrap()
    }

    pub fn inverted(&self) -> u64 {
        self.n_inv
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Primes dividing N.
    pub fn n_primes(&self) -> &BTreeSet<u64> {
        &self.n_primes
    }

    pub fn inverts(&self, p: u64) -> bool {
        self.n_primes.contains(&p)
    }
}

/// Ring presentation as read from a config file: `f` lowest first, `N`,
/// optional `label`.
#[derive(Clone, Debug, PartialEq, serde::Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub f: Vec<i64>,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl RingSpec {
    pub fn of(ring: &NumberRing) -> Self {
        RingSpec {
            f: ring.f.coeffs().iter().map(|c| i64::try_from(c.numer()).expect("small f")).collect(),
            n: ring.n_inv,
            label: Some(ring.label.clone()),
        }
    }

    pub fn build(&self) -> Result<RingRef> {
        let label = self.label.clone().unwrap_or_else(|| format!("Z[x]/{:?}[1/{}]", self.f, self.n));
        NumberRing::from_i64(&self.f, self.n, label)
    }

    /// The same presentation with 2 added to the inverted primes.
    pub fn adjoin_half(&self) -> Self {
        let n = if self.n % 2 == 0 { self.n } else { 2 * self.n };
        let label = self.label.as_ref().map(|l| if n == self.n { l.clone() } else { format!("{l}[1/2]") });
        RingSpec { f: self.f.clone(), n, label }
    }
}

/// An element of R, stored as a rational polynomial in x of degree < deg f.
#[derive(Clone)]
pub struct RElement {
    ring: RingRef,
    value: Poly,
}

impl PartialEq for RElement {
    fn eq(&self, o: &Self) -> bool {
        self.value == o.value && (Arc::ptr_eq(&self.ring, &o.ring) || self.ring == o.ring)
    }
}

impl fmt::Debug for RElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value.render())
    }
}

impl RElement {
    pub fn new(ring: &RingRef, value: Poly) -> Self {
        let value = value.with_var(Var::X).rem_monic(ring.f());
        RElement { ring: ring.clone(), value }
    }

    pub fn from_int(ring: &RingRef, k: i64) -> Self {
        RElement::from_rational(ring, rat(k))
    }

    pub fn from_rational(ring: &RingRef, r: Rational) -> Self {
        RElement::new(ring, Poly::constant(Var::X, r))
    }

    pub fn from_ints(ring: &RingRef, v: &[i64]) -> Self {
        RElement::new(ring, Poly::from_ints(Var::X, v))
    }

    /// The generator x.
    pub fn gen(ring: &RingRef) -> Self {
        RElement::new(ring, Poly::x_pow(Var::X, 1))
    }

    pub fn zero(ring: &RingRef) -> Self {
        RElement { ring: ring.clone(), value: Poly::zero(Var::X) }
    }

    pub fn one(ring: &RingRef) -> Self {
        RElement::from_int(ring, 1)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn value(&self) -> &Poly {
        &self.value
    }

    /// Coefficient of x^i (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> Rational {
        self.value.coeff(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = RElement::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.cmul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.cmul(&base);
            }
        }
        acc
    }

    /// Inverse over the fraction field, without any denominator check.
    pub fn inverse(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        let (g, s) = self.value.ext_gcd_mod(self.ring.f())?;
        if g.degree() != Some(0) {
            return None;
        }
        Some(RElement::new(&self.ring, s))
    }

    /// Primes occurring in the denominators of the coefficients.
    pub fn denominator_support(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        for c in self.value.coeffs() {
            if !c.denom().is_one() {
                out.extend(bigint_prime_factors(c.denom()));
            }
        }
        out
    }

    /// First denominator prime outside `allowed`, if any.
    pub fn foreign_prime(&self, allowed: &BTreeSet<u64>) -> Option<BigInt> {
        self.value
            .coeffs()
            .iter()
            .find_map(|c| first_foreign_prime(c.denom(), allowed))
    }

    /// True when all denominators only involve primes dividing N.
    pub fn is_integral(&self) -> bool {
        self.foreign_prime(self.ring.n_primes()).is_none()
    }

    /// Coefficients padded to the ring degree.
    pub fn padded(&self) -> Vec<Rational> {
        (0..self.ring.degree()).map(|i| self.coeff(i)).collect()
    }
}

impl Coeff for RElement {
    fn c_is_zero(&self) -> bool {
        self.value.is_zero()
    }
    fn zero_like(&self) -> Self {
        RElement::zero(&self.ring)
    }
    fn one_like(&self) -> Self {
        RElement::one(&self.ring)
    }
    fn cadd(&self, o: &Self) -> Self {
        RElement { ring: self.ring.clone(), value: self.value.add(&o.value) }
    }
    fn csub(&self, o: &Self) -> Self {
        RElement { ring: self.ring.clone(), value: self.value.sub(&o.value) }
    }
    fn cmul(&self, o: &Self) -> Self {
        if self.ring.degree() == 1 {
            return RElement { ring: self.ring.clone(), value: self.value.mul(&o.value) };
        }
        RElement::new(&self.ring, self.value.mul(&o.value))
    }
    fn cneg(&self) -> Self {
        RElement { ring: self.ring.clone(), value: self.value.neg() }
    }
    fn cscale(&self, r: &Rational) -> Self {
        RElement { ring: self.ring.clone(), value: self.value.scale(r) }
    }
    fn render(&self) -> String {
        if self.ring.degree() == 1 {
            self.coeff(0).render()
        } else {
            self.value.render()
        }
    }
}

impl TryInv for RElement {
    fn try_inv(&self) -> Option<Self> {
        self.inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_rings_validate() {
        assert_eq!(NumberRing::integers().degree(), 1);
        assert_eq!(NumberRing::gaussian().degree(), 2);
        assert_eq!(NumberRing::cyclotomic(5).degree(), 4);
        assert_eq!(NumberRing::cyclotomic(7).degree(), 6);
    }

    #[test]
    fn bad_presentations_rejected() {
        // x^2 + 1 needs 2 inverted
        assert!(NumberRing::from_i64(&[1, 0, 1], 1, "bad").is_err());
        assert!(NumberRing::from_i64(&[1, 0, 2], 2, "not monic").is_err());
        assert!(NumberRing::from_i64(&[0, 0, 1], 2, "inseparable").is_err());
    }

    #[test]
    fn gaussian_arithmetic() {
        let r = NumberRing::gaussian();
        let i = RElement::gen(&r);
        assert_eq!(i.pow(2), RElement::from_int(&r, -1));
        let a = RElement::from_ints(&r, &[1, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.cmul(&a), RElement::one(&r));
        // (1+i)^{-1} = (1-i)/2, allowed since 2 is inverted
        assert!(inv.is_integral());
    }

    #[test]
    fn zeta5_power_cycle() {
        let r = NumberRing::cyclotomic(5);
        let z = RElement::gen(&r);
        assert_eq!(z.pow(5), RElement::one(&r));
        assert_ne!(z.pow(2), RElement::one(&r));
        let one_minus = RElement::one(&r).csub(&z);
        let inv = one_minus.inverse().unwrap();
        assert!(inv.is_integral());
        assert_eq!(inv.denominator_support(), BTreeSet::from([5]));
    }
}
