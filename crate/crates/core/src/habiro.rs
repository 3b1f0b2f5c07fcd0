//! Truncated Habiro rings: tuples (f_e) with f_e ∈ R[q]/Φ_e(q)^{n_e}, plus the
//! Nygaard and at-d twists as exponent-2 residues divisible by Φ_e.

use crate::error::{Error, Result};
use crate::exactalg::arith::{gcd, lcm};
use crate::exactalg::component::rpoly_from_rational;
use crate::exactalg::cyclotomic::q_pow_minus_one;
use crate::exactalg::{
    divisors, q_integer_at, ComponentElement, Poly, RElement, Rational, RingRef, Var,
};
use std::collections::{BTreeMap, BTreeSet};

/// Exponents n_e ≥ 0 for e | m. Components exist where n_e ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusProfile {
    m: u64,
    exps: BTreeMap<u64, u32>,
}

impl ModulusProfile {
    pub fn new(m: u64, exps: BTreeMap<u64, u32>) -> Self {
        for e in exps.keys() {
            assert!(m % e == 0, "profile index {e} does not divide {m}");
        }
        let exps = exps.into_iter().filter(|(_, n)| *n > 0).collect();
        ModulusProfile { m, exps }
    }

    /// (q^m - 1)^n
    pub fn uniform(m: u64, n: u32) -> Self {
        ModulusProfile::new(m, divisors(m).into_iter().map(|e| (e, n)).collect())
    }

    /// (q^m - 1)(q^{m'} - 1): exponent 2 for e | m and 1 for the other e | m'.
    pub fn mixed(m: u64, m2: u64) -> Self {
        assert!(m2 % m == 0, "mixed profile needs m | m'");
        let exps = divisors(m2)
            .into_iter()
            .map(|e| (e, if m % e == 0 { 2 } else { 1 }))
            .collect();
        ModulusProfile::new(m2, exps)
    }

    pub fn level(&self) -> u64 {
        self.m
    }

    pub fn exponent(&self, e: u64) -> u32 {
        self.exps.get(&e).copied().unwrap_or(0)
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.exps.keys().copied()
    }

    /// Keep only the indices divisible by d.
    pub fn multiples_of(&self, d: u64) -> Self {
        let exps = self.exps.iter().filter(|(e, _)| *e % d == 0).map(|(e, n)| (*e, *n)).collect();
        ModulusProfile { m: self.m, exps }
    }

    /// Σ n_e·φ(e), the ℚ-dimension per basis element of R.
    pub fn total_degree(&self) -> u64 {
        self.exps
            .iter()
            .map(|(e, n)| crate::exactalg::arith::euler_phi(*e) * *n as u64)
            .sum()
    }
}

/// Equality compares profile and components; the allowed support is
/// bookkeeping and is ignored.
#[derive(Clone, Debug)]
pub struct HabiroTruncElement {
    ring: RingRef,
    profile: ModulusProfile,
    comps: BTreeMap<u64, ComponentElement>,
    allowed: BTreeSet<u64>,
}

impl HabiroTruncElement {
    pub fn from_components(
        ring: &RingRef,
        profile: &ModulusProfile,
        comps: BTreeMap<u64, ComponentElement>,
        allowed: &BTreeSet<u64>,
    ) -> Self {
        assert!(comps.keys().copied().eq(profile.indices()), "components must match the profile");
        for (e, c) in &comps {
            assert_eq!((c.conductor(), c.exponent()), (*e, profile.exponent(*e)));
        }
        HabiroTruncElement {
            ring: ring.clone(),
            profile: profile.clone(),
            comps,
            allowed: allowed.clone(),
        }
    }

    /// Component e is g mod Φ_e(q)^{n_e}.
    pub fn from_polynomial(ring: &RingRef, g: &Poly<RElement>, profile: &ModulusProfile) -> Self {
        let comps = profile
            .exps
            .iter()
            .map(|(e, n)| (*e, ComponentElement::from_poly(ring, *e, *n, g.clone())))
            .collect();
        HabiroTruncElement {
            ring: ring.clone(),
            profile: profile.clone(),
            comps,
            allowed: BTreeSet::new(),
        }
    }

    pub fn constant(ring: &RingRef, c: &RElement, profile: &ModulusProfile) -> Self {
        HabiroTruncElement::from_polynomial(ring, &Poly::constant(Var::Q, c.clone()), profile)
    }

    pub fn one(ring: &RingRef, profile: &ModulusProfile) -> Self {
        HabiroTruncElement::constant(ring, &RElement::one(ring), profile)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn profile(&self) -> &ModulusProfile {
        &self.profile
    }

    pub fn level(&self) -> u64 {
        self.profile.m
    }

    pub fn allowed(&self) -> &BTreeSet<u64> {
        &self.allowed
    }

    pub fn with_allowed(mut self, allowed: &BTreeSet<u64>) -> Self {
        self.allowed.extend(allowed.iter().copied());
        self
    }

    pub fn component(&self, e: u64) -> &ComponentElement {
        &self.comps[&e]
    }

    pub fn components(&self) -> &BTreeMap<u64, ComponentElement> {
        &self.comps
    }

    fn zip(
        &self,
        o: &Self,
        f: impl Fn(&ComponentElement, &ComponentElement) -> ComponentElement,
    ) -> Result<Self> {
        if self.profile != o.profile {
            return Err(Error::LevelMismatch { left: self.level(), right: o.level() });
        }
        let comps = self.comps.iter().map(|(e, a)| (*e, f(a, &o.comps[e]))).collect();
        Ok(HabiroTruncElement {
            ring: self.ring.clone(),
            profile: self.profile.clone(),
            comps,
            allowed: self.allowed.union(&o.allowed).copied().collect(),
        })
    }

    fn map(&self, f: impl Fn(&ComponentElement) -> ComponentElement) -> Self {
        let comps = self.comps.iter().map(|(e, a)| (*e, f(a))).collect();
        HabiroTruncElement {
            ring: self.ring.clone(),
            profile: self.profile.clone(),
            comps,
            allowed: self.allowed.clone(),
        }
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

    pub fn pow(&self, k: u64) -> Self {
        self.map(|a| a.pow(k))
    }

    /// Componentwise inverse with denominators inside the allowed support.
    pub fn invert(&self) -> Result<Self> {
        let mut comps = BTreeMap::new();
        for (e, a) in &self.comps {
            comps.insert(*e, a.invert(&self.allowed)?);
        }
        Ok(HabiroTruncElement {
            ring: self.ring.clone(),
            profile: self.profile.clone(),
            comps,
            allowed: self.allowed.clone(),
        })
    }

    /// Reduce to a smaller profile at the same level (n'_e ≤ n_e).
    pub fn reduce_to(&self, profile: &ModulusProfile) -> Result<Self> {
        assert_eq!(profile.m, self.profile.m);
        let mut comps = BTreeMap::new();
        for (e, n) in &profile.exps {
            let have = self.profile.exponent(*e);
            if have < *n {
                return Err(Error::PrecisionShortfall { e: *e, have, need: *n });
            }
            comps.insert(*e, self.comps[e].reduce_exponent(*n));
        }
        Ok(HabiroTruncElement {
            ring: self.ring.clone(),
            profile: profile.clone(),
            comps,
            allowed: self.allowed.clone(),
        })
    }

    /// Restriction to a divisor level, keeping the components at e | m.
    pub fn restrict_level(&self, m: u64) -> Self {
        assert!(self.level() % m == 0);
        let exps = self.profile.exps.iter().filter(|(e, _)| m % *e == 0).map(|(e, n)| (*e, *n)).collect();
        let comps = self.comps.iter().filter(|(e, _)| m % *e == 0).map(|(e, a)| (*e, a.clone())).collect();
        HabiroTruncElement {
            ring: self.ring.clone(),
            profile: ModulusProfile { m, exps },
            comps,
            allowed: self.allowed.clone(),
        }
    }

    /// Components that are ≡ 1 mod Φ_e at every index with n_e ≥ 2.
    pub fn is_congruent_to_one(&self) -> bool {
        self.comps
            .values()
            .all(|c| c.sub(&ComponentElement::one(&self.ring, c.conductor(), c.exponent())).divisible_by_phi())
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.comps.iter().map(|(e, c)| format!("{e}: {}", c.render())).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Habiro Frobenius: level m → dm, component e (d | e) is f_{e/d}(q^d)
/// mod Φ_e(q)^{n_e}.
pub fn habiro_frobenius(
    f: &HabiroTruncElement,
    d: u64,
    target: &ModulusProfile,
) -> Result<HabiroTruncElement> {
    if target.m != f.level() * d {
        return Err(Error::LevelMismatch { left: target.m, right: f.level() * d });
    }
    let mut comps = BTreeMap::new();
    for (e, n) in &target.exps {
        if e % d != 0 {
            return Err(Error::InvalidArgument(format!("index {e} is not a multiple of {d}")));
        }
        let have = f.profile.exponent(e / d);
        if have < *n {
            return Err(Error::PrecisionShortfall { e: *e, have, need: *n });
        }
        comps.insert(*e, f.comps[&(e / d)].substitute_q_power(d, *e, *n));
    }
    Ok(HabiroTruncElement {
        ring: f.ring.clone(),
        profile: target.clone(),
        comps,
        allowed: f.allowed.clone(),
    })
}

/// Lifted norm into an arbitrary target profile at level m': component e is
/// f_{(e,m)}(q^{e/(e,m)})^{m'/[e,m]} mod Φ_e(q)^{n_e}.
pub fn lifted_norm_to(
    f: &HabiroTruncElement,
    m2: u64,
    target: &ModulusProfile,
) -> Result<HabiroTruncElement> {
    let m = f.level();
    assert!(m2 % m == 0 && target.m == m2, "lifted norm needs m | m'");
    let mut comps = BTreeMap::new();
    for (e, n) in &target.exps {
        let g = gcd(*e, m);
        let have = f.profile.exponent(g);
        if have < *n {
            return Err(Error::PrecisionShortfall { e: *e, have, need: *n });
        }
        let base = f.comps[&g].substitute_q_power(e / g, *e, *n);
        comps.insert(*e, base.pow(m2 / lcm(*e, m)));
    }
    Ok(HabiroTruncElement {
        ring: f.ring.clone(),
        profile: target.clone(),
        comps,
        allowed: f.allowed.clone(),
    })
}

/// Π̃_{m'/m} from the uniform(m, 2) profile to mixed(m, m').
pub fn lifted_norm(f: &HabiroTruncElement, m2: u64) -> Result<HabiroTruncElement> {
    lifted_norm_to(f, m2, &ModulusProfile::mixed(f.level(), m2))
}

/// Element of (q^m - 1)ℋ_{R,m}/(q^m - 1)^2, as residues mod Φ_e^2.
#[derive(Clone, Debug, PartialEq)]
pub struct NygaardTwistElement {
    ring: RingRef,
    m: u64,
    comps: BTreeMap<u64, ComponentElement>,
}

/// Element of the cyclotomic twist at d, as residues mod Φ_e^2 for d | e | m.
#[derive(Clone, Debug)]
pub struct TwistAtDElement {
    ring: RingRef,
    m: u64,
    d: u64,
    comps: BTreeMap<u64, ComponentElement>,
    allowed: BTreeSet<u64>,
}

impl PartialEq for HabiroTruncElement {
    fn eq(&self, o: &Self) -> bool {
        self.profile == o.profile && self.comps == o.comps
    }
}

impl PartialEq for TwistAtDElement {
    fn eq(&self, o: &Self) -> bool {
        self.m == o.m && self.d == o.d && self.comps == o.comps
    }
}

fn check_twist_component(e: u64, c: &ComponentElement) -> Result<()> {
    assert_eq!((c.conductor(), c.exponent()), (e, 2), "twist components live mod Φ_e^2");
    if !c.divisible_by_phi() {
        return Err(Error::NotDivisible { e });
    }
    Ok(())
}

/// (q^m - 1) mod Φ_e^2, for e | m.
fn qm_minus_one(ring: &RingRef, m: u64, e: u64) -> ComponentElement {
    ComponentElement::from_rational_poly(ring, e, 2, &q_pow_minus_one(m))
}

impl NygaardTwistElement {
    pub fn from_components(ring: &RingRef, m: u64, comps: BTreeMap<u64, ComponentElement>) -> Result<Self> {
        assert!(comps.keys().copied().eq(divisors(m)), "one component per divisor");
        for (e, c) in &comps {
            check_twist_component(*e, c)?;
        }
        Ok(NygaardTwistElement { ring: ring.clone(), m, comps })
    }

    pub fn zero(ring: &RingRef, m: u64) -> Self {
        let comps = divisors(m).into_iter().map(|e| (e, ComponentElement::zero(ring, e, 2))).collect();
        NygaardTwistElement { ring: ring.clone(), m, comps }
    }

    /// (q^m - 1)·h for a Habiro element h (any profile at level m with
    /// n_e ≥ 1 everywhere).
    pub fn from_habiro(h: &HabiroTruncElement) -> Self {
        let m = h.level();
        let comps = divisors(m)
            .into_iter()
            .map(|e| {
                let he = ComponentElement::from_poly(&h.ring, e, 2, h.comps[&e].value().clone());
                (e, qm_minus_one(&h.ring, m, e).mul(&he))
            })
            .collect();
        NygaardTwistElement { ring: h.ring.clone(), m, comps }
    }

    /// Components (q^m - 1)·c_e for c_e given mod Φ_e.
    pub fn from_c_coordinates(ring: &RingRef, m: u64, cs: &BTreeMap<u64, Poly<RElement>>) -> Self {
        let comps = divisors(m)
            .into_iter()
            .map(|e| {
                let c = ComponentElement::from_poly(ring, e, 2, cs[&e].clone());
                (e, qm_minus_one(ring, m, e).mul(&c))
            })
            .collect();
        NygaardTwistElement { ring: ring.clone(), m, comps }
    }

    /// The c-coordinates: component e is (q^m - 1)·c_e with c_e mod Φ_e.
    pub fn c_coordinates(&self) -> BTreeMap<u64, ComponentElement> {
        c_coordinates(&self.ring, self.m, &self.comps)
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

    fn zip(
        &self,
        o: &Self,
        f: impl Fn(&ComponentElement, &ComponentElement) -> ComponentElement,
    ) -> Result<Self> {
        if self.m != o.m {
            return Err(Error::LevelMismatch { left: self.m, right: o.m });
        }
        let comps = self.comps.iter().map(|(e, a)| (*e, f(a, &o.comps[e]))).collect();
        Ok(NygaardTwistElement { ring: self.ring.clone(), m: self.m, comps })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        let comps = self.comps.iter().map(|(e, a)| (*e, a.neg())).collect();
        NygaardTwistElement { ring: self.ring.clone(), m: self.m, comps }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let comps = self.comps.iter().map(|(e, a)| (*e, a.scale(r))).collect();
        NygaardTwistElement { ring: self.ring.clone(), m: self.m, comps }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|c| c.is_zero())
    }

    pub fn render(&self) -> String {
        render_components(&self.comps)
    }
}

fn c_coordinates(
    ring: &RingRef,
    m: u64,
    comps: &BTreeMap<u64, ComponentElement>,
) -> BTreeMap<u64, ComponentElement> {
    comps
        .iter()
        .map(|(e, x)| {
            // x = (q^m - 1)c mod Φ_e^2, so x/Φ_e ≡ u·c mod Φ_e with
            // u = (q^m - 1)/Φ_e.
            let phi = crate::exactalg::cyclotomic_poly(*e);
            let u = q_pow_minus_one(m).exact_div(&phi);
            let x_over_phi = x.value().divrem(&rpoly_from_rational(ring, &phi)).expect("monic").0;
            let num = ComponentElement::from_poly(ring, *e, 1, x_over_phi);
            let den = ComponentElement::from_rational_poly(ring, *e, 1, &u);
            (*e, num.mul(&den.inverse_unchecked().expect("q^m - 1 is separable")))
        })
        .collect()
}

fn render_components(comps: &BTreeMap<u64, ComponentElement>) -> String {
    let parts: Vec<String> = comps.iter().map(|(e, c)| format!("{e}: {}", c.render())).collect();
    format!("{{{}}}", parts.join(", "))
}

impl TwistAtDElement {
    pub fn from_components(
        ring: &RingRef,
        m: u64,
        d: u64,
        comps: BTreeMap<u64, ComponentElement>,
        allowed: &BTreeSet<u64>,
    ) -> Result<Self> {
        assert!(
            comps.keys().copied().eq(divisors(m).into_iter().filter(|e| e % d == 0)),
            "components at d | e | m"
        );
        for (e, c) in &comps {
            check_twist_component(*e, c)?;
            c.check_support(allowed)?;
        }
        Ok(TwistAtDElement { ring: ring.clone(), m, d, comps, allowed: allowed.clone() })
    }

    pub fn zero(ring: &RingRef, m: u64, d: u64, allowed: &BTreeSet<u64>) -> Self {
        let comps = divisors(m)
            .into_iter()
            .filter(|e| e % d == 0)
            .map(|e| (e, ComponentElement::zero(ring, e, 2)))
            .collect();
        TwistAtDElement { ring: ring.clone(), m, d, comps, allowed: allowed.clone() }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
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

    /// c-coordinates with respect to q^m - 1.
    pub fn c_coordinates(&self) -> BTreeMap<u64, ComponentElement> {
        c_coordinates(&self.ring, self.m, &self.comps)
    }

    fn zip(
        &self,
        o: &Self,
        f: impl Fn(&ComponentElement, &ComponentElement) -> ComponentElement,
    ) -> Result<Self> {
        if self.m != o.m || self.d != o.d {
            return Err(Error::LevelMismatch { left: self.m, right: o.m });
        }
        let comps = self.comps.iter().map(|(e, a)| (*e, f(a, &o.comps[e]))).collect();
        Ok(TwistAtDElement {
            ring: self.ring.clone(),
            m: self.m,
            d: self.d,
            comps,
            allowed: self.allowed.union(&o.allowed).copied().collect(),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        let comps = self.comps.iter().map(|(e, a)| (*e, a.neg())).collect();
        TwistAtDElement { ring: self.ring.clone(), m: self.m, d: self.d, comps, allowed: self.allowed.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|c| c.is_zero())
    }

    /// First index where the two elements differ.
    pub fn first_difference(&self, o: &Self) -> Option<u64> {
        self.comps.iter().find(|(e, a)| o.comps.get(e) != Some(a)).map(|(e, _)| *e)
    }

    pub fn render(&self) -> String {
        render_components(&self.comps)
    }
}

/// exp(x) = 1 + x in the uniform(m, 2) profile.
pub fn exp_twist(x: &NygaardTwistElement) -> HabiroTruncElement {
    let comps = x
        .comps
        .iter()
        .map(|(e, c)| (*e, c.add(&ComponentElement::one(&x.ring, *e, 2))))
        .collect();
    HabiroTruncElement {
        ring: x.ring.clone(),
        profile: ModulusProfile::uniform(x.m, 2),
        comps,
        allowed: BTreeSet::new(),
    }
}

/// The other way around the exp square: restrict x to e | m, multiply by
/// m'/m and exponentiate in the mixed(m, m') profile. Components e ∤ m are 1.
pub fn exp_twist_mixed(x: &NygaardTwistElement, m2: u64) -> HabiroTruncElement {
    assert!(m2 % x.m == 0, "needs m | m'");
    let profile = ModulusProfile::mixed(x.m, m2);
    let k = crate::exactalg::rat((m2 / x.m) as i64);
    let comps = profile
        .exps
        .iter()
        .map(|(e, n)| {
            let one = ComponentElement::one(&x.ring, *e, *n);
            let c = match x.comps.get(e) {
                Some(c) => one.add(&c.scale(&k)),
                None => one,
            };
            (*e, c)
        })
        .collect();
    HabiroTruncElement { ring: x.ring.clone(), profile, comps, allowed: BTreeSet::new() }
}

/// log(t) = t - 1, for t ≡ 1 mod Φ_e in each exponent-2 component.
pub fn log_unit(t: &HabiroTruncElement) -> Result<NygaardTwistElement> {
    let m = t.level();
    if t.profile != ModulusProfile::uniform(m, 2) {
        return Err(Error::InvalidArgument("log needs the uniform(m, 2) profile".into()));
    }
    let mut comps = BTreeMap::new();
    for (e, c) in &t.comps {
        let x = c.sub(&ComponentElement::one(&t.ring, *e, 2));
        if !x.divisible_by_phi() {
            return Err(Error::NotCongruentToOne { e: *e });
        }
        comps.insert(*e, x);
    }
    Ok(NygaardTwistElement { ring: t.ring.clone(), m, comps })
}

/// Exact division of an exponent-2 twist component by [k]_{q^s}.
pub fn divide_twist_by_qint(
    a: &ComponentElement,
    k: u64,
    s: u64,
    allowed: &BTreeSet<u64>,
) -> Result<ComponentElement> {
    let e = a.conductor();
    check_twist_component(e, a)?;
    let b = ComponentElement::from_rational_poly(a.ring(), e, a.exponent(), &q_integer_at(k, s));
    let out = match a.exact_divide(&b, allowed) {
        Err(Error::NotInvertible) => return Err(Error::NotDivisible { e }),
        other => other?,
    };
    check_twist_component(e, &out)?;
    Ok(out)
}

/// Transition m' → m of the Nygaard twist: restrict to e | m and divide by
/// [m'/m]_{q^m}.
pub fn twist_transition(t: &NygaardTwistElement, m: u64) -> Result<NygaardTwistElement> {
    assert!(t.m % m == 0, "transition needs m | m'");
    let k = t.m / m;
    let mut comps = BTreeMap::new();
    for e in divisors(m) {
        comps.insert(e, divide_twist_by_qint(&t.comps[&e], k, m, &BTreeSet::new())?);
    }
    Ok(NygaardTwistElement { ring: t.ring.clone(), m, comps })
}

/// The same transition for twists at d.
pub fn twist_at_d_transition(t: &TwistAtDElement, m: u64) -> Result<TwistAtDElement> {
    assert!(t.m % m == 0, "transition needs m | m'");
    let k = t.m / m;
    let mut comps = BTreeMap::new();
    for e in divisors(m).into_iter().filter(|e| e % t.d == 0) {
        comps.insert(e, divide_twist_by_qint(&t.comps[&e], k, m, &t.allowed)?);
    }
    Ok(TwistAtDElement { ring: t.ring.clone(), m, d: t.d, comps, allowed: t.allowed.clone() })
}
