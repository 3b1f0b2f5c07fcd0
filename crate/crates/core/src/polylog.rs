//! The first q-polylogarithm: roots of unity and their classes [ζ], the
//! canonical lift of 1 - ζ, the truncated series Li_1^{(d)} and its class in
//! the twist at d, and the identities relating it to the Chern cocycle.

use crate::cyclosyn::{can_minus_frob, chern_cocycle};
use crate::error::{Error, Result};
use crate::exactalg::arith::{gcd, mod_inverse_u64, prime_factors};
use crate::exactalg::cyclotomic::{at_d_support, q_integer, resultant_primes};
use crate::exactalg::{divisors, Coeff, ComponentElement, NumberRing, Poly, RElement, RingRef, Var};
use crate::habiro::{HabiroTruncElement, ModulusProfile, NygaardTwistElement, TwistAtDElement};
use crate::qwitt::at_d_allowed;
use crate::report::{VerificationReport, Witness};
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

/// ζ = ζ_g^a for a fixed primitive g-th root of unity ζ_g in R.
#[derive(Clone, Debug, PartialEq)]
pub struct RootOfUnity {
    ring: RingRef,
    g: u64,
    a: u64,
    base: RElement,
}

fn is_primitive(x: &RElement, g: u64) -> bool {
    let one = RElement::one(x.ring());
    x.pow(g) == one && prime_factors(g).into_iter().all(|p| x.pow(g / p) != one)
}

impl RootOfUnity {
    /// Searches ±x^j for a primitive g-th root of unity in R.
    pub fn new(ring: &RingRef, g: u64, a: u64) -> Result<Self> {
        if g == 0 || (g > 1 && gcd(a % g, g) != 1) {
            return Err(Error::InvalidArgument(format!("exponent {a} is not a unit mod {g}")));
        }
        let x = RElement::gen(ring);
        let mut cand = RElement::one(ring);
        for _ in 0..(4 * ring.degree() as u64 + 2 * g) {
            for c in [cand.clone(), cand.cneg()] {
                if is_primitive(&c, g) {
                    return RootOfUnity::with_base(ring, g, a, c);
                }
            }
            cand = cand.cmul(&x);
        }
        Err(Error::InvalidArgument(format!("no primitive {g}-th root of unity found in {}", ring.label())))
    }

    pub fn with_base(ring: &RingRef, g: u64, a: u64, base: RElement) -> Result<Self> {
        if !is_primitive(&base, g) {
            return Err(Error::InvalidArgument(format!("base is not a primitive {g}-th root of unity")));
        }
        if g > 1 && !prime_factors(g).iter().all(|p| ring.inverts(*p)) {
            return Err(Error::InvalidArgument(format!("the order {g} must divide N")));
        }
        Ok(RootOfUnity { ring: ring.clone(), g, a: a % g, base })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn order(&self) -> u64 {
        self.g
    }

    pub fn exponent(&self) -> u64 {
        self.a
    }

    pub fn value(&self) -> RElement {
        self.base.pow(self.a)
    }

    pub fn inverse(&self) -> RootOfUnity {
        RootOfUnity { a: (self.g - self.a) % self.g, ..self.clone() }
    }

    /// 1 - ζ.
    pub fn one_minus(&self) -> RElement {
        RElement::one(&self.ring).csub(&self.value())
    }

    /// ζ^{1/e} = ζ^{e^{-1} mod g}.
    pub fn root(&self, e: u64) -> Result<RElement> {
        if self.g == 1 {
            return Ok(RElement::one(&self.ring));
        }
        let inv = mod_inverse_u64(e % self.g, self.g).ok_or(Error::RootUnavailable { e })?;
        Ok(self.value().pow(inv))
    }

    /// ζ = 1. The root -1 only exists here once 2 is inverted in R.
    fn is_excluded(&self) -> bool {
        self.g == 1
    }
}

/// Rational function in T with coefficients in a component ring.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunctionInT {
    pub numerator: Poly<ComponentElement>,
    pub denominator: Poly<ComponentElement>,
}

impl RationalFunctionInT {
    /// a/b = c/d as cross-multiplied polynomials; the denominators used here
    /// have constant term 1 and are not zero divisors.
    pub fn same_as(&self, o: &Self) -> bool {
        self.numerator.mul(&o.denominator) == o.numerator.mul(&self.denominator)
    }
}

/// [ζ] at level m in the uniform(m, 2) profile: constants ζ^{1/e}.
pub fn zeta_class(zeta: &RootOfUnity, m: u64) -> Result<HabiroTruncElement> {
    zeta_class_in(zeta, &ModulusProfile::uniform(m, 2))
}

pub fn zeta_class_in(zeta: &RootOfUnity, profile: &ModulusProfile) -> Result<HabiroTruncElement> {
    let ring = &zeta.ring;
    let mut comps = BTreeMap::new();
    for e in profile.indices() {
        let n = profile.exponent(e);
        comps.insert(e, ComponentElement::constant(ring, e, n, zeta.root(e)?));
    }
    Ok(HabiroTruncElement::from_components(ring, profile, comps, &BTreeSet::new()))
}

/// [ζ]^m, which lifts the q-Teichmüller class of ζ itself.
pub fn teichmuller_root_lift(zeta: &RootOfUnity, m: u64) -> Result<HabiroTruncElement> {
    Ok(zeta_class(zeta, m)?.pow(m))
}

/// ∏_{0≤j<m} (1 - q^j[ζ]) mod Φ_e^2 for e | m.
pub fn canonical_unit_lift(zeta: &RootOfUnity, m: u64) -> Result<HabiroTruncElement> {
    let ring = &zeta.ring;
    match zeta.one_minus().inverse() {
        Some(inv) if inv.is_integral() => {}
        Some(inv) => {
            let prime = inv.foreign_prime(ring.n_primes()).expect("non-integral inverse");
            return Err(Error::DenominatorNotAllowed { prime });
        }
        None => return Err(Error::NotInvertible),
    }
    let profile = ModulusProfile::uniform(m, 2);
    let mut comps = BTreeMap::new();
    for e in divisors(m) {
        let r = ComponentElement::constant(ring, e, 2, zeta.root(e)?);
        let q = ComponentElement::q(ring, e, 2);
        let one = ComponentElement::one(ring, e, 2);
        let mut acc = one.clone();
        let mut qj = one.clone();
        for _ in 0..m {
            acc = acc.mul(&one.sub(&qj.mul(&r)));
            qj = qj.mul(&q);
        }
        comps.insert(e, acc);
    }
    Ok(HabiroTruncElement::from_components(ring, &profile, comps, &BTreeSet::new()))
}

fn t_poly(c: Vec<ComponentElement>) -> Poly<ComponentElement> {
    Poly::new(Var::T, c)
}

/// 1 - T^m over the component ring (e, n).
fn one_minus_t_power(ring: &RingRef, e: u64, n: u32, m: u64) -> Poly<ComponentElement> {
    let zero = ComponentElement::zero(ring, e, n);
    let mut c = vec![zero; m as usize + 1];
    c[0] = ComponentElement::one(ring, e, n);
    c[m as usize] = ComponentElement::from_int(ring, e, n, -1);
    t_poly(c)
}

/// Σ_{0<k<m, d∤k} T^k/[k]_q over the component ring (e, n).
fn li1_numerator(ring: &RingRef, d: u64, m: u64, e: u64, n: u32, allowed: &BTreeSet<u64>) -> Result<Poly<ComponentElement>> {
    let zero = ComponentElement::zero(ring, e, n);
    let mut c = vec![zero; m as usize];
    for k in (1..m).filter(|k| k % d != 0) {
        let qk = ComponentElement::from_rational_poly(ring, e, n, &q_integer(k));
        c[k as usize] = qk.invert(allowed)?;
    }
    Ok(t_poly(c))
}

/// Li_1^{(d)}(T)_q mod [m]_q: one rational function per component d | e | m.
pub fn li1_formal(d: u64, m: u64) -> Result<BTreeMap<u64, RationalFunctionInT>> {
    if d < 2 {
        return Err(Error::InvalidArgument("d must be at least 2".into()));
    }
    let z = NumberRing::integers();
    let allowed = at_d_support(m, d);
    let mut out = BTreeMap::new();
    for e in divisors(m).into_iter().filter(|e| e % d == 0) {
        out.insert(
            e,
            RationalFunctionInT {
                numerator: li1_numerator(&z, d, m, e, 1, &allowed)?,
                denominator: one_minus_t_power(&z, e, 1, m),
            },
        );
    }
    Ok(out)
}

/// The truncated functions at m and m' agree on the components d | e | m.
pub fn li1_formal_compatible(d: u64, m: u64, m2: u64) -> Result<bool> {
    assert!(m2 % m == 0, "compatibility needs m | m'");
    let low = li1_formal(d, m)?;
    let high = li1_formal(d, m2)?;
    Ok(low.iter().all(|(e, f)| f.same_as(&high[e])))
}

/// Li_1^{(d)}([ζ])_q ∈ 𝒞^{(d)}_{R,m}{1}: component e is
/// [m]_q·(1 - ζ^{m/e})^{-1}·Σ_{0<k<m, d∤k} ζ^{k/e}/[k]_q mod Φ_e^2.
pub fn li1_class(zeta: &RootOfUnity, d: u64, m: u64) -> Result<TwistAtDElement> {
    let ring = &zeta.ring;
    if zeta.is_excluded() {
        return Err(Error::InvalidArgument("ζ must differ from 1".into()));
    }
    if let Some(p) = prime_factors(m).into_iter().find(|p| ring.inverts(*p)) {
        return Err(Error::InvalidArgument(format!("level {m} shares the prime {p} with N")));
    }
    let allowed = at_d_allowed(ring, m, d);
    let mut comps = BTreeMap::new();
    for e in divisors(m).into_iter().filter(|e| e % d == 0) {
        let r = zeta.root(e)?;
        let num = li1_numerator(ring, d, m, e, 2, &allowed)?;
        let mut sum = ComponentElement::zero(ring, e, 2);
        for (k, c) in num.coeffs().iter().enumerate() {
            sum = sum.add(&c.mul_scalar(&r.pow(k as u64)));
        }
        let den = ComponentElement::constant(ring, e, 2, RElement::one(ring).csub(&r.pow(m)));
        let qm = ComponentElement::from_rational_poly(ring, e, 2, &q_integer(m));
        comps.insert(e, qm.mul(&sum).mul(&den.invert(&allowed)?));
    }
    TwistAtDElement::from_components(ring, m, d, comps, &allowed)
}

/// x = (q^m - 1)·(1 - [ζ])^{-1}, i.e. c_e = (1 - ζ^{1/e})^{-1}. Then
/// Li_1^{(d)}([ζ^{-1}])_q - Li_1^{(d)}([ζ])_q = (can - φ)(x), so the two
/// classes agree in H^1 but not as twists.
pub fn li1_symmetry_coboundary(zeta: &RootOfUnity, m: u64) -> Result<NygaardTwistElement> {
    let ring = &zeta.ring;
    let mut cs = BTreeMap::new();
    for e in divisors(m) {
        let inv = match RElement::one(ring).csub(&zeta.root(e)?).inverse() {
            Some(inv) if inv.is_integral() => inv,
            _ => return Err(Error::NotInvertible),
        };
        cs.insert(e, Poly::constant(Var::Q, inv));
    }
    Ok(NygaardTwistElement::from_c_coordinates(ring, m, &cs))
}

/// Li_1^{(d)} at ζ^{-1} minus Li_1^{(d)} at ζ equals (can - φ) of the
/// coboundary above.
pub fn li1_symmetry_check(zeta: &RootOfUnity, d: u64, m: u64) -> Result<bool> {
    let diff = li1_class(&zeta.inverse(), d, m)?.sub(&li1_class(zeta, d, m)?)?;
    let x = li1_symmetry_coboundary(zeta, m)?;
    Ok(diff == can_minus_frob(&x, d)?)
}

/// Primes that S_2 (the [k]_q with 0 < k < m, d ∤ k) puts in denominators
/// at the component e.
fn key_support(d: u64, m: u64, e: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for k in (1..m).filter(|k| k % d != 0) {
        for f in divisors(k).into_iter().filter(|f| *f > 1) {
            out.extend(resultant_primes(f, e));
        }
    }
    out
}

/// The identity (1/d)·log(A/B) = -[m]_q·Li_1^{(d)}(T)_q mod Φ_e^2, with
/// A = ∏(1 - q^jT)^d and B = ∏(1 - q^{jd}T^d), as a polynomial identity
/// (A - B)(1 - T^m) = -d·[m]_q·B·Σ T^k/[k]_q.
pub fn key_identity_check(d: u64, m: u64, e: u64) -> bool {
    key_identity_check_signed(d, m, e, false)
}

/// The same check, with the sign of the right side flipped when `flip` is
/// set (a negative control).
pub fn key_identity_check_signed(d: u64, m: u64, e: u64, flip: bool) -> bool {
    if d < 2 || m % e != 0 || e % d != 0 {
        return false;
    }
    let z = NumberRing::integers();
    let one = ComponentElement::one(&z, e, 2);
    let zero = ComponentElement::zero(&z, e, 2);
    let q = ComponentElement::q(&z, e, 2);
    let one_t = t_poly(vec![one.clone()]);
    let mut a = one_t.clone();
    let mut b = one_t.clone();
    let mut qj = one.clone();
    for _ in 0..m {
        let lin = t_poly(vec![one.clone(), qj.neg()]);
        a = a.mul(&lin.pow(d, &one));
        let mut c = vec![zero.clone(); d as usize + 1];
        c[0] = one.clone();
        c[d as usize] = qj.pow(d).neg();
        b = b.mul(&t_poly(c));
        qj = qj.mul(&q);
    }
    let diff = a.sub(&b);
    if !diff.coeffs().iter().all(|c| c.divisible_by_phi()) {
        return false;
    }
    let support = key_support(d, m, e);
    let Ok(sum) = li1_numerator(&z, d, m, e, 2, &support) else {
        return false;
    };
    let lhs = diff.mul(&one_minus_t_power(&z, e, 2, m));
    let qm = ComponentElement::from_rational_poly(&z, e, 2, &q_integer(m));
    let sign = if flip { 1 } else { -1 };
    let scale = qm.mul(&ComponentElement::from_int(&z, e, 2, sign * d as i64));
    let rhs = b.mul(&sum).mul_coeff(&scale);
    lhs == rhs
}

/// c_1(1 - ζ) with the canonical lift against -Li_1^{(d)}([ζ])_q.
pub fn main_theorem_check(zeta: &RootOfUnity, d: u64, m: u64) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("main_theorem");
    report.param("ring", zeta.ring.label());
    report.param("zeta", format!("{}:{}", zeta.g, zeta.a));
    report.param("d", d);
    report.param("m", m);
    let outcome = (|| -> Result<Option<Witness>> {
        let lift = canonical_unit_lift(zeta, m)?;
        let chern = chern_cocycle(&zeta.one_minus(), m, d, &lift)?.value;
        let li = li1_class(zeta, d, m)?.neg();
        Ok(chern.first_difference(&li).map(|e| {
            Witness::components(e, chern.component(e), li.component(e))
        }))
    })();
    match outcome {
        Ok(None) => report.pass(),
        Ok(Some(w)) => report.fail(w),
        Err(err) => report.fail(Witness::error(&err)),
    }
    report.finish(start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::arith::mod_inverse_u64;
    use crate::exactalg::cyclotomic::cyclotomic_poly;
    use crate::exactalg::component::rpoly_from_rational;
    use crate::exactalg::frobenius::FrobeniusLift;

    fn z5() -> RingRef {
        NumberRing::cyclotomic(5)
    }

    #[test]
    fn zeta_class_examples() {
        let r = z5();
        let zeta = RootOfUnity::new(&r, 5, 1).unwrap();
        let c = zeta_class(&zeta, 2).unwrap();
        let x = RElement::gen(&r);
        assert_eq!(c.component(1).reduce_exponent(1), ComponentElement::constant(&r, 1, 1, x.clone()));
        assert_eq!(c.component(2).reduce_exponent(1), ComponentElement::constant(&r, 2, 1, x.pow(3)));
        let one = zeta_class(&zeta, 1).unwrap();
        assert_eq!(one.component(1).value().coeff(0), Some(&x));
        assert_eq!(zeta_class(&zeta, 5).map(|_| ()), Err(Error::RootUnavailable { e: 5 }));
    }

    #[test]
    fn zeta_class_is_frobenius_compatible() {
        let r = z5();
        let zeta = RootOfUnity::new(&r, 5, 2).unwrap();
        let m = 12;
        for p in [2u64, 3] {
            let lift = FrobeniusLift::for_level(&r, p, m).unwrap();
            for e in divisors(m).into_iter().filter(|e| m % (p * e) == 0) {
                let lhs = lift.reduce(&zeta.root(e).unwrap(), lift.precision());
                let rhs = lift.apply(&zeta.root(p * e).unwrap(), lift.precision());
                assert_eq!(lhs, rhs, "p={p} e={e}");
            }
        }
    }

    #[test]
    fn canonical_lift_reduces_to_norm_of_one_minus_zeta() {
        let r = z5();
        for a in 1..5 {
            let zeta = RootOfUnity::new(&r, 5, a).unwrap();
            for m in [1, 2, 3, 4, 6, 12] {
                let lift = canonical_unit_lift(&zeta, m).unwrap();
                for e in divisors(m) {
                    let want = ComponentElement::constant(&r, e, 1, zeta.one_minus().pow(m / e));
                    assert_eq!(lift.component(e).reduce_exponent(1), want);
                }
                let inv = lift.invert().unwrap();
                assert_eq!(lift.mul(&inv).unwrap(), HabiroTruncElement::one(&r, lift.profile()));
            }
        }
        let zeta = RootOfUnity::new(&r, 5, 1).unwrap();
        let m1 = canonical_unit_lift(&zeta, 1).unwrap();
        assert_eq!(m1.component(1).reduce_exponent(1), ComponentElement::constant(&r, 1, 1, zeta.one_minus()));
    }

    #[test]
    fn li1_formal_examples() {
        let z = NumberRing::integers();
        let f = li1_formal(2, 2).unwrap();
        assert_eq!(f.keys().copied().collect::<Vec<_>>(), vec![2]);
        let o = ComponentElement::one(&z, 2, 1);
        let zero = ComponentElement::zero(&z, 2, 1);
        assert_eq!(f[&2].numerator, t_poly(vec![zero.clone(), o.clone()]));
        assert_eq!(f[&2].denominator, t_poly(vec![o.clone(), zero.clone(), o.neg()]));
        let f4 = li1_formal(2, 4).unwrap();
        for e in [2u64, 4] {
            let inv3 = ComponentElement::from_rational_poly(&z, e, 1, &q_integer(3)).inverse_unchecked().unwrap();
            let zero = ComponentElement::zero(&z, e, 1);
            let one = ComponentElement::one(&z, e, 1);
            assert_eq!(f4[&e].numerator, t_poly(vec![zero.clone(), one.clone(), zero.clone(), inv3]));
        }
    }

    #[test]
    fn li1_formal_compatible_across_levels() {
        for d in [2, 3, 4] {
            for m2 in 1..=12u64 {
                for m in divisors(m2) {
                    assert!(li1_formal_compatible(d, m, m2).unwrap(), "d={d} m={m} m'={m2}");
                }
            }
        }
    }

    // Independent evaluation: for gcd(k, e) = 1 the inverse of [k]_q mod Φ_e
    // is [k']_{q^k} with kk' ≡ 1 mod e, and 1 - ζ^{m/e} is inverted in R.
    fn li1_oracle(zeta: &RootOfUnity, d: u64, m: u64, e: u64) -> Option<ComponentElement> {
        let r = &zeta.ring;
        let phi = cyclotomic_poly(e);
        let root = zeta.root(e).ok()?;
        let mut sum: Poly<RElement> = Poly::zero(Var::Q);
        for k in (1..m).filter(|k| k % d != 0) {
            if gcd(k, e) != 1 {
                return None;
            }
            let kk = mod_inverse_u64(k % e, e)?;
            let inv = crate::exactalg::cyclotomic::q_integer_at(kk, k).rem_monic(&phi);
            sum = sum.add(&rpoly_from_rational(r, &inv).mul_coeff(&root.pow(k)));
        }
        let den = RElement::one(r).csub(&root.pow(m)).inverse()?;
        let qm = rpoly_from_rational(r, &q_integer(m));
        Some(ComponentElement::from_poly(r, e, 2, qm.mul(&sum).mul_coeff(&den)))
    }

    #[test]
    fn li1_class_matches_oracle() {
        let r = z5();
        let mut checked = 0;
        for a in 1..5 {
            let zeta = RootOfUnity::new(&r, 5, a).unwrap();
            for (d, m) in [(2, 2), (3, 3), (2, 4), (4, 4), (2, 6), (3, 6), (6, 6), (2, 8)] {
                let cls = li1_class(&zeta, d, m).unwrap();
                for (e, c) in cls.components() {
                    assert!(c.divisible_by_phi());
                    if let Some(want) = li1_oracle(&zeta, d, m, *e) {
                        assert_eq!(c, &want, "a={a} d={d} m={m} e={e}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn li1_class_rejects_trivial_roots() {
        let r = NumberRing::from_i64(&[-1, 1], 2, "Z[1/2]").unwrap();
        let one = RootOfUnity::new(&r, 1, 0).unwrap();
        assert!(matches!(li1_class(&one, 2, 3), Err(Error::InvalidArgument(_))));
        assert!(RootOfUnity::new(&NumberRing::integers(), 2, 1).is_err());
        let zeta = RootOfUnity::new(&z5(), 5, 1).unwrap();
        assert!(matches!(li1_class(&zeta, 2, 10), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn minus_one_after_inverting_two() {
        let z2 = NumberRing::from_i64(&[0, 1], 2, "Z[1/2]").unwrap();
        let minus_one = RootOfUnity::new(&z2, 2, 1).unwrap();
        assert_eq!(minus_one.value(), RElement::from_int(&z2, -1));
        for (d, m) in [(3, 3), (3, 9), (5, 15), (3, 15)] {
            assert!(main_theorem_check(&minus_one, d, m).passed(), "d={d} m={m}");
        }
        let z10 = NumberRing::from_i64(&[1, -1, 1, -1, 1], 10, "Z[zeta10][1/10]").unwrap();
        let zeta = RootOfUnity::new(&z10, 2, 1).unwrap();
        assert!(main_theorem_check(&zeta, 3, 3).passed());
    }

    #[test]
    fn key_identity_small_cases() {
        assert!(key_identity_check(2, 2, 2));
        assert!(key_identity_check(3, 3, 3));
        assert!(!key_identity_check_signed(2, 2, 2, true));
        assert!(!key_identity_check_signed(3, 3, 3, true));
        assert!(!key_identity_check(2, 3, 3));
    }

    #[test]
    fn main_theorem_small_cases() {
        let r = z5();
        let zeta = RootOfUnity::new(&r, 5, 1).unwrap();
        for (d, m) in [(2, 2), (2, 4), (3, 3), (5, 4)] {
            let rep = main_theorem_check(&zeta, d, m);
            assert!(rep.passed(), "{}", rep.to_json());
        }
    }

    #[test]
    fn symmetry_under_inverse() {
        let r = z5();
        for a in 1..5 {
            let zeta = RootOfUnity::new(&r, 5, a).unwrap();
            for (d, m) in [(2, 2), (2, 4), (3, 6), (2, 6)] {
                assert!(li1_symmetry_check(&zeta, d, m).unwrap(), "a={a} d={d} m={m}");
            }
        }
        let zeta = RootOfUnity::new(&r, 5, 1).unwrap();
        let li = li1_class(&zeta, 2, 2).unwrap();
        assert_eq!(li1_class(&zeta.inverse(), 2, 2).unwrap(), li.neg());
        assert_ne!(li1_class(&zeta.inverse(), 2, 2).unwrap(), li);
    }
}
