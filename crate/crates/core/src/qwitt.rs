//! Big q-Witt vectors, stored as q-ghost tuples (c_e)_{e|m} with
//! c_e ∈ R[q]/Φ_e(q).

use crate::error::{Error, Result};
use crate::exactalg::arith::{gcd, lcm, mod_inverse, prime_factors, vp};
use crate::exactalg::component::rpoly_from_rational;
use crate::exactalg::cyclotomic::{at_d_support, q_pow_minus_one};
use crate::exactalg::frobenius::ModRing;
use crate::exactalg::{
    cyclotomic_poly, divisors, q_integer_at, ComponentElement, Poly, RElement, Rational, RingRef,
    Var,
};
use crate::witt::{lifts_for_level, DworkWitness};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// An element of q-𝕎_m(R) in q-ghost coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct QWittElement {
    ring: RingRef,
    m: u64,
    comps: BTreeMap<u64, ComponentElement>,
}

/// An element of q-𝕎_m^{(d)}(R): components at d | e | m, with the primes
/// that may appear in denominators.
#[derive(Clone, Debug, PartialEq)]
pub struct QWittAtD {
    ring: RingRef,
    m: u64,
    d: u64,
    comps: BTreeMap<u64, ComponentElement>,
    allowed: BTreeSet<u64>,
}

/// f ∈ ℤ[q]/(q^m - 1), the Λ-ring side of q-𝕎_m(ℤ).
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaZPresentation {
    m: u64,
    value: Poly,
}

impl LambdaZPresentation {
    pub fn new(m: u64, f: &Poly) -> Self {
        assert!(f.is_integral(), "Λ-presentation needs integer coefficients");
        let value = f.clone().with_var(Var::Q).rem_monic(&q_pow_minus_one(m));
        LambdaZPresentation { m, value }
    }

    pub fn level(&self) -> u64 {
        self.m
    }

    pub fn value(&self) -> &Poly {
        &self.value
    }
}

fn check_level(a: u64, b: u64) -> Result<()> {
    if a != b {
        return Err(Error::LevelMismatch { left: a, right: b });
    }
    Ok(())
}

impl QWittElement {
    pub fn from_components(ring: &RingRef, m: u64, comps: BTreeMap<u64, ComponentElement>) -> Self {
        assert_eq!(comps.keys().copied().collect::<Vec<_>>(), divisors(m));
        for (e, c) in &comps {
            assert!(c.conductor() == *e && c.exponent() == 1, "bad component at e = {e}");
        }
        QWittElement { ring: ring.clone(), m, comps }
    }

    /// Component e is g mod Φ_e(q).
    pub fn from_polynomial(ring: &RingRef, m: u64, g: &Poly<RElement>) -> Self {
        let comps = divisors(m)
            .into_iter()
            .map(|e| (e, ComponentElement::from_poly(ring, e, 1, g.clone())))
            .collect();
        QWittElement { ring: ring.clone(), m, comps }
    }

    /// One polynomial per divisor, in increasing divisor order.
    pub fn from_polys(ring: &RingRef, m: u64, polys: Vec<Poly<RElement>>) -> Self {
        let ds = divisors(m);
        assert_eq!(ds.len(), polys.len(), "one polynomial per divisor");
        let comps = ds
            .into_iter()
            .zip(polys)
            .map(|(e, p)| (e, ComponentElement::from_poly(ring, e, 1, p)))
            .collect();
        QWittElement { ring: ring.clone(), m, comps }
    }

    pub fn constant(ring: &RingRef, m: u64, c: &RElement) -> Self {
        QWittElement::from_polynomial(ring, m, &Poly::constant(Var::Q, c.clone()))
    }

    pub fn zero(ring: &RingRef, m: u64) -> Self {
        QWittElement::constant(ring, m, &RElement::zero(ring))
    }

    pub fn one(ring: &RingRef, m: u64) -> Self {
        QWittElement::constant(ring, m, &RElement::one(ring))
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn level(&self) -> u64 {
        self.m
    }

    pub fn component(&self, e: u64) -> &ComponentElement {
        &self.comps[&e]
    }

    pub fn components(&self) -> &BTreeMap<u64, ComponentElement> {
        &self.comps
    }

    fn zip(&self, o: &Self, f: impl Fn(&ComponentElement, &ComponentElement) -> ComponentElement) -> Result<Self> {
        check_level(self.m, o.m)?;
        let comps = self.comps.iter().map(|(e, a)| (*e, f(a, &o.comps[e]))).collect();
        Ok(QWittElement { ring: self.ring.clone(), m: self.m, comps })
    }

    fn map(&self, f: impl Fn(&ComponentElement) -> ComponentElement) -> Self {
        let comps = self.comps.iter().map(|(e, a)| (*e, f(a))).collect();
        QWittElement { ring: self.ring.clone(), m: self.m, comps }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.mul(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.map(|a| a.scale(&Rational::from_integer(k.into())))
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.comps.values().map(|c| c.render()).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl QWittAtD {
    pub fn from_components(
        ring: &RingRef,
        m: u64,
        d: u64,
        comps: BTreeMap<u64, ComponentElement>,
        allowed: BTreeSet<u64>,
    ) -> Self {
        let keys: Vec<u64> = divisors(m).into_iter().filter(|e| e % d == 0).collect();
        assert_eq!(comps.keys().copied().collect::<Vec<_>>(), keys);
        QWittAtD { ring: ring.clone(), m, d, comps, allowed }
    }

    pub fn level(&self) -> u64 {
        self.m
    }

    pub fn divisor(&self) -> u64 {
        self.d
    }

    pub fn allowed(&self) -> &BTreeSet<u64> {
        &self.allowed
    }

    pub fn component(&self, e: u64) -> &ComponentElement {
        &self.comps[&e]
    }

    pub fn components(&self) -> &BTreeMap<u64, ComponentElement> {
        &self.comps
    }

    fn zip(&self, o: &Self, f: impl Fn(&ComponentElement, &ComponentElement) -> ComponentElement) -> Result<Self> {
        check_level(self.m, o.m)?;
        check_level(self.d, o.d)?;
        let comps = self.comps.iter().map(|(e, a)| (*e, f(a, &o.comps[e]))).collect();
        let allowed = self.allowed.union(&o.allowed).copied().collect();
        Ok(QWittAtD { ring: self.ring.clone(), m: self.m, d: self.d, comps, allowed })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.mul(b))
    }

    /// Checks that every denominator prime lies in the allowed support.
    pub fn check_support(&self) -> Result<()> {
        self.comps.values().try_for_each(|c| c.check_support(&self.allowed))
    }
}

/// Allowed denominator primes for at-d objects at level m.
pub fn at_d_allowed(ring: &RingRef, m: u64, d: u64) -> BTreeSet<u64> {
    let mut s = at_d_support(m, d);
    s.extend(ring.n_primes().iter().copied());
    s
}

/// Component e is the constant x^{m/e}.
pub fn q_teichmuller(x: &RElement, m: u64) -> QWittElement {
    let ring = x.ring();
    let comps = divisors(m)
        .into_iter()
        .map(|e| (e, ComponentElement::constant(ring, e, 1, x.pow(m / e))))
        .collect();
    QWittElement { ring: ring.clone(), m, comps }
}

/// F: level m' → m for m | m', which is index restriction.
pub fn q_frobenius(c: &QWittElement, m: u64) -> QWittElement {
    assert!(c.m % m == 0, "q-Frobenius needs m | m'");
    let comps = divisors(m).into_iter().map(|e| (e, c.comps[&e].clone())).collect();
    QWittElement { ring: c.ring.clone(), m, comps }
}

/// V_d: level m → dm, component e is d·c_e if e | m and 0 otherwise.
pub fn q_verschiebung(c: &QWittElement, d: u64) -> QWittElement {
    let m2 = c.m * d;
    let dr = Rational::from_integer(BigInt::from(d));
    let comps = divisors(m2)
        .into_iter()
        .map(|e| {
            let v = if c.m % e == 0 {
                c.comps[&e].scale(&dr)
            } else {
                ComponentElement::zero(&c.ring, e, 1)
            };
            (e, v)
        })
        .collect();
    QWittElement { ring: c.ring.clone(), m: m2, comps }
}

/// Multiplication by [d]_{q^s}.
pub fn mul_q_integer(c: &QWittElement, d: u64, s: u64) -> QWittElement {
    let g = rpoly_from_rational(&c.ring, &q_integer_at(d, s));
    c.map(|a| a.mul(&ComponentElement::from_poly(&c.ring, a.conductor(), 1, g.clone())))
}

/// Cyclotomic norm Π_{m'/m}: component e | m' is
/// c_{(e,m)}(q^{e/(e,m)})^{m'/[e,m]} mod Φ_e(q).
pub fn cyclotomic_norm(c: &QWittElement, m2: u64) -> QWittElement {
    assert!(m2 % c.m == 0, "cyclotomic norm needs m | m'");
    let comps = divisors(m2)
        .into_iter()
        .map(|e| {
            let g = gcd(e, c.m);
            let base = c.comps[&g].substitute_q_power(e / g, e, 1);
            (e, base.pow(m2 / lcm(e, c.m)))
        })
        .collect();
    QWittElement { ring: c.ring.clone(), m: m2, comps }
}

/// Cyclotomic Frobenius: level m → at-d level dm, component e is c_{e/d}(q^d).
pub fn cyclotomic_frobenius(c: &QWittElement, d: u64) -> QWittAtD {
    let m2 = c.m * d;
    let comps = divisors(m2)
        .into_iter()
        .filter(|e| e % d == 0)
        .map(|e| (e, c.comps[&(e / d)].substitute_q_power(d, e, 1)))
        .collect();
    QWittAtD { ring: c.ring.clone(), m: m2, d, comps, allowed: at_d_allowed(&c.ring, m2, d) }
}

/// Canonical map to the at-d ring: drop components with d ∤ e.
pub fn canonical_to_at_d(c: &QWittElement, d: u64, allowed: &BTreeSet<u64>) -> QWittAtD {
    let comps = c
        .comps
        .iter()
        .filter(|(e, _)| *e % d == 0)
        .map(|(e, a)| (*e, a.clone()))
        .collect();
    QWittAtD { ring: c.ring.clone(), m: c.m, d, comps, allowed: allowed.clone() }
}

/// Result of the q-Dwork membership test.
#[derive(Clone, Debug)]
pub struct QDworkOutcome {
    pub member: bool,
    /// Lifts c̃_e ∈ R[q], when `member` holds.
    pub lifts: Option<BTreeMap<u64, Poly<RElement>>>,
    pub witness: Option<DworkWitness>,
}

type ResPoly = Vec<Vec<BigInt>>;

fn residues(ar: &ModRing, p: &Poly<RElement>) -> Option<ResPoly> {
    p.coeffs().iter().map(|c| ar.from_element(c)).collect()
}

fn res_sub(ar: &ModRing, a: &ResPoly, b: &ResPoly) -> ResPoly {
    let n = a.len().max(b.len());
    let z = ar.zero();
    (0..n)
        .map(|i| ar.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect()
}

/// Division by a monic integer polynomial over (ℤ/M)[x]/f.
fn res_divrem_monic(ar: &ModRing, a: &ResPoly, phi: &[BigInt]) -> (ResPoly, ResPoly) {
    let dp = phi.len() - 1;
    let mut r = a.clone();
    if r.len() <= dp {
        return (vec![], r);
    }
    let mut q = vec![ar.zero(); r.len() - dp];
    for top in (dp..r.len()).rev() {
        let lead = r[top].clone();
        if lead.iter().all(Zero::is_zero) {
            continue;
        }
        q[top - dp] = lead.clone();
        for (j, c) in phi.iter().enumerate() {
            let t = ar.scale(&lead, c);
            r[top - dp + j] = ar.sub(&r[top - dp + j], &t);
        }
    }
    r.truncate(dp);
    (q, r)
}

fn int_coeffs(p: &Poly) -> Vec<BigInt> {
    p.coeffs().iter().map(|c| c.numer().clone()).collect()
}

/// Greedy constructive q-Dwork test. Divisors are processed from the top
/// down: the lift at e is c_e + Φ_e·h, with h chosen so that, for every
/// prime p with pe | m, it agrees with φ_p of the lift at pe modulo
/// p^{v_p(m/e)}. The class of φ_p(c̃_{pe}) modulo (p^k, Φ_e) does not depend
/// on which admissible c̃_{pe} was picked, so a failure here means no lift
/// exists. The per-prime choices of h are glued by CRT.
pub fn q_dwork_membership(c: &QWittElement) -> QDworkOutcome {
    let ring = &c.ring;
    let frobs = match lifts_for_level(ring, c.m) {
        Ok(l) => l,
        Err(_) => return QDworkOutcome { member: false, lifts: None, witness: None },
    };
    let mut out: BTreeMap<u64, Poly<RElement>> = BTreeMap::new();
    for &e in divisors(c.m).iter().rev() {
        let ce = c.comps[&e].value().clone();
        let phi = int_coeffs(&cyclotomic_poly(e));
        let mut h_total: ResPoly = vec![];
        let mut modulus = BigInt::one();
        for lift in frobs.iter().filter(|l| c.m % (l.p() * e) == 0) {
            let p = lift.p();
            let fail = QDworkOutcome { member: false, lifts: None, witness: Some(DworkWitness { p, e }) };
            let k = vp(p, c.m / e);
            let ar = lift.arith(k);
            let pk = ar.modulus().clone();
            let Some(ce_res) = residues(&ar, &ce) else { return fail };
            let above = &out[&(p * e)];
            let Some(g) = above.coeffs().iter().map(|x| lift.apply(x, k)).collect::<Option<ResPoly>>()
            else {
                return fail;
            };
            let (quot, rem) = res_divrem_monic(&ar, &res_sub(&ar, &g, &ce_res), &phi);
            if rem.iter().flatten().any(|x| !x.is_zero()) {
                return fail;
            }
            h_total = crt_respoly(&h_total, &modulus, &quot, &pk);
            modulus *= pk;
        }
        let h = Poly::new(
            Var::Q,
            h_total
                .iter()
                .map(|v| {
                    let coords: Vec<Rational> = v.iter().map(|x| Rational::from_integer(x.clone())).collect();
                    RElement::new(ring, Poly::new(Var::X, coords))
                })
                .collect(),
        );
        let phi = rpoly_from_rational(ring, &cyclotomic_poly(e));
        out.insert(e, ce.add(&phi.mul(&h)));
    }
    QDworkOutcome { member: true, lifts: Some(out), witness: None }
}

fn crt_respoly(a: &ResPoly, ma: &BigInt, b: &ResPoly, mb: &BigInt) -> ResPoly {
    let n = a.len().max(b.len());
    let width = a.iter().chain(b.iter()).map(|v| v.len()).max().unwrap_or(0);
    let inv = mod_inverse(&ma.mod_floor(mb), mb).expect("coprime moduli");
    let zero = vec![BigInt::zero(); width];
    (0..n)
        .map(|i| {
            let x = a.get(i).unwrap_or(&zero);
            let y = b.get(i).unwrap_or(&zero);
            (0..width)
                .map(|j| {
                    let xa = x.get(j).cloned().unwrap_or_default();
                    let yb = y.get(j).cloned().unwrap_or_default();
                    let t = ((yb - &xa) * &inv).mod_floor(mb);
                    (xa + ma * t).mod_floor(&(ma * mb))
                })
                .collect()
        })
        .collect()
}

/// Independent check that `lifts` witness q-Dwork membership of c.
pub fn verify_q_dwork_lifts(c: &QWittElement, lifts: &BTreeMap<u64, Poly<RElement>>) -> bool {
    let ds = divisors(c.m);
    if lifts.keys().copied().collect::<Vec<_>>() != ds {
        return false;
    }
    for &e in &ds {
        if ComponentElement::from_poly(&c.ring, e, 1, lifts[&e].clone()) != c.comps[&e] {
            return false;
        }
    }
    let Ok(frobs) = lifts_for_level(&c.ring, c.m) else { return false };
    for lift in frobs {
        let p = lift.p();
        for &e in ds.iter().filter(|&&e| c.m % (p * e) == 0) {
            let k = vp(p, c.m / e);
            let lhs = &lifts[&e];
            let rhs = &lifts[&(p * e)];
            let n = lhs.coeffs().len().max(rhs.coeffs().len());
            let zero = RElement::zero(&c.ring);
            for i in 0..n {
                let a = lift.reduce(lhs.coeff(i).unwrap_or(&zero), k);
                let b = lift.apply(rhs.coeff(i).unwrap_or(&zero), k);
                if a.is_none() || a != b {
                    return false;
                }
            }
        }
    }
    true
}

/// Recombine a tuple of residues mod Φ_e (e | m) into the unique polynomial
/// of degree < m, working over ℚ.
pub fn crt_combine(ring: &RingRef, m: u64, comps: &BTreeMap<u64, Poly<RElement>>) -> Poly<RElement> {
    let modulus = q_pow_minus_one(m);
    let mut acc: Poly<RElement> = Poly::zero(Var::Q);
    for e in divisors(m) {
        let phi = cyclotomic_poly(e);
        let cofactor = modulus.exact_div(&phi);
        let (_, inv) = cofactor.ext_gcd_mod(&phi).expect("coprime cyclotomic factors");
        let idem = cofactor.mul(&inv).rem_monic(&modulus);
        acc = acc.add(&comps[&e].mul(&rpoly_from_rational(ring, &idem)));
    }
    acc.rem_monic(&modulus)
}

/// Over ℤ: component e is f mod Φ_e(q).
pub fn lambda_embed(ring: &RingRef, f: &LambdaZPresentation) -> QWittElement {
    assert_eq!(ring.degree(), 1, "the Λ-ring comparison is for R = ℤ");
    QWittElement::from_polynomial(ring, f.m, &rpoly_from_rational(ring, &f.value))
}

/// The same tuple restricted to d | e | m, as an at-d element.
pub fn lambda_embed_at_d(ring: &RingRef, f: &LambdaZPresentation, d: u64) -> QWittAtD {
    let full = lambda_embed(ring, f);
    canonical_to_at_d(&full, d, &at_d_allowed(ring, f.m, d))
}

/// CRT recombination; fails with NotInImage when a coefficient is not an
/// integer.
pub fn lambda_extract(c: &QWittElement) -> Result<LambdaZPresentation> {
    assert_eq!(c.ring.degree(), 1, "the Λ-ring comparison is for R = ℤ");
    let comps = c.comps.iter().map(|(e, a)| (*e, a.value().clone())).collect();
    let p = crt_combine(&c.ring, c.m, &comps);
    let value = Poly::new(Var::Q, p.coeffs().iter().map(|x| x.coeff(0)).collect());
    if !value.is_integral() {
        return Err(Error::NotInImage { e: c.m });
    }
    Ok(LambdaZPresentation { m: c.m, value })
}

/// Primes p | m that are not inverted in R.
pub fn dwork_primes(ring: &RingRef, m: u64) -> Vec<u64> {
    prime_factors(m).into_iter().filter(|&p| !ring.inverts(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::cyclotomic::qpoly;
    use crate::exactalg::{Coeff, NumberRing};
    use crate::sample;

    fn zq(ring: &RingRef, v: &[i64]) -> Poly<RElement> {
        rpoly_from_rational(ring, &qpoly(v))
    }

    fn ints(ring: &RingRef, m: u64, v: &[i64]) -> QWittElement {
        let polys = v.iter().map(|&k| zq(ring, &[k])).collect();
        QWittElement::from_polys(ring, m, polys)
    }

    #[test]
    fn teichmuller_components() {
        let r = NumberRing::cyclotomic(5);
        let x = RElement::gen(&r);
        let t = q_teichmuller(&x, 6);
        for (e, k) in [(1, 6), (2, 3), (3, 2), (6, 1)] {
            assert_eq!(t.component(e), &ComponentElement::constant(&r, e, 1, x.pow(k)));
        }
        assert_eq!(q_teichmuller(&x, 1).component(1).value().coeff(0), Some(&x));
    }

    #[test]
    fn frobenius_is_restriction() {
        let z = NumberRing::integers();
        let c = ints(&z, 4, &[1, 2, 3]);
        assert_eq!(q_frobenius(&c, 2), ints(&z, 2, &[1, 2]));
        assert_eq!(q_frobenius(&c, 4), c);
    }

    #[test]
    fn verschiebung_examples() {
        let z = NumberRing::integers();
        let a = ints(&z, 1, &[5]);
        assert_eq!(q_verschiebung(&a, 2), ints(&z, 2, &[10, 0]));
        let c = ints(&z, 2, &[3, 7]);
        let vf = q_verschiebung(&q_frobenius(&c, 1), 2);
        assert_eq!(vf, mul_q_integer(&c, 2, 1));
        assert_eq!(vf, ints(&z, 2, &[6, 0]));
    }

    #[test]
    fn norm_example_and_identity() {
        let z = NumberRing::integers();
        let c = QWittElement::from_polys(&z, 2, vec![zq(&z, &[3]), zq(&z, &[2])]);
        let n = cyclotomic_norm(&c, 4);
        assert_eq!(n.component(1), &ComponentElement::from_int(&z, 1, 1, 9));
        assert_eq!(n.component(2), &ComponentElement::from_int(&z, 2, 1, 4));
        assert_eq!(n.component(4), &ComponentElement::from_int(&z, 4, 1, 2));
        assert_eq!(cyclotomic_norm(&c, 2), c);
    }

    #[test]
    fn norm_of_q_polynomial_component() {
        // c_2 = q mod Φ_2 is -1; c_2(q^2) at e = 4 is q^2 ≡ -1 mod Φ_4
        let z = NumberRing::integers();
        let c = QWittElement::from_polynomial(&z, 2, &zq(&z, &[0, 1]));
        let n = cyclotomic_norm(&c, 4);
        assert_eq!(n.component(4), &ComponentElement::from_int(&z, 4, 1, -1));
    }

    #[test]
    fn cyclotomic_frobenius_on_constants() {
        let z = NumberRing::integers();
        let c = ints(&z, 1, &[7]);
        let f = cyclotomic_frobenius(&c, 2);
        assert_eq!(f.components().keys().copied().collect::<Vec<_>>(), vec![2]);
        assert_eq!(f.component(2), &ComponentElement::from_int(&z, 2, 1, 7));
    }

    #[test]
    fn canonical_keeps_multiples_of_d() {
        let z = NumberRing::integers();
        let c = ints(&z, 4, &[1, 2, 3]);
        let a = canonical_to_at_d(&c, 2, &BTreeSet::new());
        assert_eq!(a.components().keys().copied().collect::<Vec<_>>(), vec![2, 4]);
        let b = canonical_to_at_d(&c, 1, &BTreeSet::new());
        assert_eq!(b.components().len(), 3);
    }

    #[test]
    fn lambda_examples() {
        let z = NumberRing::integers();
        let f = LambdaZPresentation::new(2, &qpoly(&[0, 1]));
        assert_eq!(lambda_embed(&z, &f), ints(&z, 2, &[1, -1]));
        assert_eq!(lambda_extract(&lambda_embed(&z, &f)).unwrap(), f);
        assert!(matches!(lambda_extract(&ints(&z, 2, &[0, 1])), Err(Error::NotInImage { .. })));
    }

    #[test]
    fn dwork_examples_over_z() {
        let z = NumberRing::integers();
        assert!(!q_dwork_membership(&ints(&z, 2, &[0, 1])).member);
        let t = q_teichmuller(&RElement::from_int(&z, 3), 12);
        let out = q_dwork_membership(&t);
        assert!(out.member);
        assert!(verify_q_dwork_lifts(&t, out.lifts.as_ref().unwrap()));
    }

    /// For R = ℤ, q-Dwork membership is the same as coming from ℤ[q]/(q^m - 1).
    #[test]
    fn dwork_over_z_matches_lambda_oracle() {
        let z = NumberRing::integers();
        let mut rng = sample::rng(11);
        for m in 1..=12u64 {
            for _ in 0..40 {
                let polys = divisors(m)
                    .into_iter()
                    .map(|e| {
                        let deg = crate::exactalg::arith::euler_phi(e) as usize;
                        rpoly_from_rational(&z, &sample::int_qpoly(&mut rng, deg, 2))
                    })
                    .collect();
                let c = QWittElement::from_polys(&z, m, polys);
                let out = q_dwork_membership(&c);
                assert_eq!(out.member, lambda_extract(&c).is_ok(), "m = {m}: {}", c.render());
                if out.member {
                    assert!(verify_q_dwork_lifts(&c, out.lifts.as_ref().unwrap()));
                }
            }
        }
    }

    /// Exhaustive search for lifts over ℤ[ζ5] at m = 2, where the only
    /// condition is c̃_1 ≡ φ_2(c̃_2) mod 2.
    #[test]
    fn dwork_zeta5_level_two_brute_force() {
        let r = NumberRing::cyclotomic(5);
        let lift = crate::exactalg::frobenius_lift(&r, 2, 2).unwrap();
        let ar = lift.arith(1);
        let mut rng = sample::rng(5);
        let vectors: Vec<Vec<BigInt>> = (0..16u32)
            .map(|b| (0..4).map(|i| BigInt::from((b >> i) & 1)).collect())
            .collect();
        let mut seen = [0, 0];
        for trial in 0..30 {
            let c2 = sample::relement(&r, &mut rng, 1);
            let mut c1 = sample::relement(&r, &mut rng, 1);
            if trial % 2 == 0 {
                c1 = c2.pow(2).cadd(&c1.cscale(&crate::exactalg::rat(2)));
            }
            let c = QWittElement::from_polys(
                &r,
                2,
                vec![Poly::constant(Var::Q, c1.clone()), Poly::constant(Var::Q, c2.clone())],
            );
            // c̃_1 = c1 + (q-1)h1, c̃_2 = c2 + (q+1)h2 with h_i constant mod 2
            // suffices: mod 2 both moduli are q+1.
            let a = ar.from_element(&c1).unwrap();
            let b = lift.apply(&c2, 1).unwrap();
            let brute = vectors.iter().any(|h1| {
                vectors.iter().any(|h2| {
                    let phih2 = lift.apply_residues(h2, 1);
                    // constant and q-coefficients of c̃_1 - φ_2(c̃_2) mod 2
                    let c0 = ar.sub(&ar.sub(&a, h1), &ar.add(&b, &phih2));
                    let c1 = ar.sub(h1, &phih2);
                    c0.iter().all(Zero::is_zero) && c1.iter().all(Zero::is_zero)
                })
            });
            let out = q_dwork_membership(&c);
            assert_eq!(out.member, brute);
            seen[out.member as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0, "both outcomes exercised: {seen:?}");
    }

    #[test]
    fn norms_preserve_membership() {
        let r = NumberRing::cyclotomic(5);
        let x = RElement::from_ints(&r, &[1, 2, 0, -1]);
        let t = q_teichmuller(&x, 2);
        for m2 in [2, 4, 6, 12] {
            let n = cyclotomic_norm(&t, m2);
            let out = q_dwork_membership(&n);
            assert!(out.member, "m' = {m2}");
            assert!(verify_q_dwork_lifts(&n, out.lifts.as_ref().unwrap()));
        }
    }
}
