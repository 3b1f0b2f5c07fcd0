//! The truncated cyclosyntomic complex at d: the maps can and Frob_d{1}
//! from the Nygaard twist to the twist at d, the homotopy s_d on E_m, the
//! first Chern class cocycle and its compatibilities.

use crate::error::{Error, Result};
use crate::exactalg::component::rpoly_from_rational;
use crate::exactalg::cyclotomic::q_pow_minus_one;
use crate::exactalg::{divisors, ComponentElement, NumberRing, Poly, RElement, RingRef};
use crate::habiro::{
    divide_twist_by_qint, exp_twist, habiro_frobenius, lifted_norm, lifted_norm_to, log_unit,
    twist_at_d_transition, HabiroTruncElement, ModulusProfile, NygaardTwistElement, TwistAtDElement,
};
use crate::qwitt::{at_d_allowed, crt_combine};
use std::collections::{BTreeMap, BTreeSet};

/// A pair (y, z) in E_m: y is a unit of ℋ_{R,m}/(q^m - 1)^2 lifting the
/// q-Teichmüller class of the unit z.
#[derive(Clone, Debug, PartialEq)]
pub struct EmPair {
    y: HabiroTruncElement,
    z: RElement,
}

impl EmPair {
    /// Checks y mod Φ_e = z^{m/e} for every e | m.
    pub fn new(y: HabiroTruncElement, z: RElement) -> Result<Self> {
        let m = y.level();
        if y.profile() != &ModulusProfile::uniform(m, 2) {
            return Err(Error::InvalidArgument("E_m lifts live in the uniform(m, 2) profile".into()));
        }
        let ring = y.ring().clone();
        for e in divisors(m) {
            let target = ComponentElement::constant(&ring, e, 1, z.pow(m / e));
            if y.component(e).reduce_exponent(1) != target {
                return Err(Error::WellDefinednessViolation { e });
            }
        }
        Ok(EmPair { y, z })
    }

    /// No validation. Only meant for exercising the error paths of s_d.
    pub fn new_unchecked(y: HabiroTruncElement, z: RElement) -> Self {
        EmPair { y, z }
    }

    pub fn y(&self) -> &HabiroTruncElement {
        &self.y
    }

    pub fn z(&self) -> &RElement {
        &self.z
    }

    pub fn level(&self) -> u64 {
        self.y.level()
    }

    /// Group law of E_m.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        Ok(EmPair { y: self.y.mul(&o.y)?, z: crate::exactalg::Coeff::cmul(&self.z, &o.z) })
    }

    /// (exp(x)·y, z).
    pub fn twist_by(&self, x: &NygaardTwistElement) -> Result<Self> {
        Ok(EmPair { y: exp_twist(x).mul(&self.y)?, z: self.z.clone() })
    }
}

/// Representative of a class in H^1 of the truncated complex.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleClass {
    pub m: u64,
    pub d: u64,
    pub value: TwistAtDElement,
}

fn at_d_indices(m: u64, d: u64) -> Vec<u64> {
    divisors(m).into_iter().filter(|e| e % d == 0).collect()
}

/// can: keep the components with d | e.
pub fn can_twist(x: &NygaardTwistElement, d: u64) -> TwistAtDElement {
    let m = x.level();
    let comps = at_d_indices(m, d).into_iter().map(|e| (e, x.component(e).clone())).collect();
    TwistAtDElement::from_components(x.ring(), m, d, comps, &at_d_allowed(x.ring(), m, d))
        .expect("restriction of a twist element")
}

/// Frob_d{1} through the Habiro ring: x_{e/d}(q^d) mod Φ_e^2 at level dm,
/// divided by [d]_{q^m}, for d | e | m.
pub fn frob_twist(x: &NygaardTwistElement, d: u64) -> Result<TwistAtDElement> {
    let ring = x.ring();
    let m = x.level();
    let allowed = at_d_allowed(ring, m, d);
    let as_habiro = HabiroTruncElement::from_components(
        ring,
        &ModulusProfile::uniform(m, 2),
        x.components().clone(),
        &BTreeSet::new(),
    );
    let idx = at_d_indices(m, d);
    let target = ModulusProfile::new(d * m, idx.iter().map(|e| (*e, 2)).collect());
    let lifted = habiro_frobenius(&as_habiro, d, &target)?;
    let mut comps = BTreeMap::new();
    for e in idx {
        comps.insert(e, divide_twist_by_qint(lifted.component(e), d, m, &allowed)?);
    }
    TwistAtDElement::from_components(ring, m, d, comps, &allowed)
}

/// Frob_d{1} from the c-coordinates: component e is (q^m - 1)·c_{e/d}(q^d).
pub fn frob_twist_c_formula(x: &NygaardTwistElement, d: u64) -> Result<TwistAtDElement> {
    let ring = x.ring();
    let m = x.level();
    let cs = x.c_coordinates();
    let qm1 = q_pow_minus_one(m);
    let mut comps = BTreeMap::new();
    for e in at_d_indices(m, d) {
        let c = cs[&(e / d)].substitute_q_power(d, e, 2);
        comps.insert(e, ComponentElement::from_rational_poly(ring, e, 2, &qm1).mul(&c));
    }
    TwistAtDElement::from_components(ring, m, d, comps, &at_d_allowed(ring, m, d))
}

/// can - Frob_d{1}.
pub fn can_minus_frob(x: &NygaardTwistElement, d: u64) -> Result<TwistAtDElement> {
    can_twist(x, d).sub(&frob_twist(x, d)?)
}

/// s_d(y, z) = (1/d)·log(Π̃_d(y)/Frob_d(y)), landing at level m.
pub fn s_d(pair: &EmPair, d: u64) -> Result<TwistAtDElement> {
    let y = &pair.y;
    let ring = y.ring();
    let m = y.level();
    let allowed = at_d_allowed(ring, m, d);
    let target = ModulusProfile::mixed(m, d * m).multiples_of(d);
    let wide = at_d_allowed(ring, d * m, d);
    let norm = lifted_norm_to(y, d * m, &target)?.with_allowed(&wide);
    let frob = habiro_frobenius(y, d, &target)?.with_allowed(&wide);
    for e in target.indices() {
        let diff = norm.component(e).sub(frob.component(e));
        if !diff.divisible_by_phi() {
            return Err(Error::WellDefinednessViolation { e });
        }
    }
    let mut comps = BTreeMap::new();
    for e in at_d_indices(m, d) {
        let ratio = norm.component(e).mul(&frob.component(e).invert(&wide)?);
        let log = ratio.sub(&ComponentElement::one(ring, e, 2));
        comps.insert(e, divide_twist_by_qint(&log, d, m, &allowed)?);
    }
    TwistAtDElement::from_components(ring, m, d, comps, &allowed)
}

/// The cocycle s_d(lift, u) representing c_1(u) at level m.
pub fn chern_cocycle(u: &RElement, m: u64, d: u64, lift: &HabiroTruncElement) -> Result<CocycleClass> {
    if lift.level() != m {
        return Err(Error::LevelMismatch { left: lift.level(), right: m });
    }
    let pair = EmPair::new(lift.clone(), u.clone())?;
    Ok(CocycleClass { m, d, value: s_d(&pair, d)? })
}

/// Two lifts of the same unit give classes differing by (can - Frob)(x)
/// with x = log(lift2/lift1).
pub fn lift_independence(
    u: &RElement,
    m: u64,
    d: u64,
    lift1: &HabiroTruncElement,
    lift2: &HabiroTruncElement,
) -> Result<bool> {
    let a = chern_cocycle(u, m, d, lift1)?;
    let b = chern_cocycle(u, m, d, lift2)?;
    let x = log_unit(&lift2.mul(&lift1.invert()?)?)?;
    Ok(b.value.sub(&a.value)? == can_minus_frob(&x, d)?)
}

/// h_{m,m'}: the unique y at level m with Π̃_{m'/m}(y) equal to the image of
/// y' modulo (q^m - 1)(q^{m'} - 1). Built from any valid seed y0 at level m
/// as y0·exp((m'/m)^{-1}·log(y'/Π̃_{m'/m}(y0))).
pub fn descend_pair(upper: &EmPair, seed: &EmPair) -> Result<EmPair> {
    let m2 = upper.level();
    let m = seed.level();
    if m2 % m != 0 {
        return Err(Error::LevelMismatch { left: m, right: m2 });
    }
    if upper.z != seed.z {
        return Err(Error::InvalidArgument("seed must lift the same unit".into()));
    }
    let ring = seed.y.ring();
    let norm = lifted_norm(&seed.y, m2)?;
    let image = upper.y.reduce_to(norm.profile())?;
    let t = image.mul(&norm.invert()?)?;
    let mut comps = BTreeMap::new();
    for e in divisors(m2) {
        let te = t.component(e);
        let one = ComponentElement::one(ring, e, te.exponent());
        if m % e != 0 {
            if te != &one {
                return Err(Error::WellDefinednessViolation { e });
            }
            continue;
        }
        let log = te.sub(&one);
        if !log.divisible_by_phi() {
            return Err(Error::NotCongruentToOne { e });
        }
        comps.insert(e, divide_twist_by_qint(&log, m2 / m, m, &BTreeSet::new())?);
    }
    let x = NygaardTwistElement::from_components(ring, m, comps)?;
    seed.twist_by(&x)
}

/// Transition of s_d at m' down to m agrees with s_d at m for a pair of
/// lifts whose norm Π̃_{m'/m}(lower) agrees with upper modulo every Φ_e.
/// When the descended pair h_{m,m'} exists integrally it is checked too.
pub fn cross_level_check(
    u: &RElement,
    m: u64,
    m2: u64,
    d: u64,
    upper_lift: &HabiroTruncElement,
    lower_lift: &HabiroTruncElement,
) -> Result<bool> {
    let upper = EmPair::new(upper_lift.clone(), u.clone())?;
    let lower = EmPair::new(lower_lift.clone(), u.clone())?;
    let ghost = ModulusProfile::uniform(m2, 1);
    let norm = lifted_norm(&lower.y, m2)?;
    if upper.y.reduce_to(&ghost)? != norm.reduce_to(&ghost)? {
        return Ok(false);
    }
    let top = s_d(&upper, d)?;
    let pushed = twist_at_d_transition(&top, m)?;
    if pushed != s_d(&lower, d)? {
        return Ok(false);
    }
    match descend_pair(&upper, &lower) {
        Ok(h) => Ok(pushed == s_d(&h, d)?),
        Err(Error::DenominatorNotAllowed { .. }) => Ok(true),
        Err(e) => Err(e),
    }
}

/// Lift of the q-Teichmüller class of an integer unit k: the Λ-ring
/// recombination of (k^{m/e})_e over ℤ, mapped into R.
pub fn integer_unit_lift(ring: &RingRef, k: i64, m: u64) -> Result<HabiroTruncElement> {
    let z = NumberRing::integers();
    let comps: BTreeMap<u64, Poly<RElement>> = divisors(m)
        .into_iter()
        .map(|e| {
            let c = RElement::from_int(&z, k).pow(m / e);
            (e, Poly::constant(crate::exactalg::Var::Q, c))
        })
        .collect();
    let g = crt_combine(&z, m, &comps);
    let coeffs: Poly = Poly::new(crate::exactalg::Var::Q, g.coeffs().iter().map(|c| c.coeff(0)).collect());
    if !coeffs.is_integral() {
        return Err(Error::NotInImage { e: m });
    }
    let kr = RElement::from_int(ring, k);
    match kr.inverse() {
        Some(inv) if inv.is_integral() => {}
        _ => return Err(Error::NotInvertible),
    }
    Ok(HabiroTruncElement::from_polynomial(
        ring,
        &rpoly_from_rational(ring, &coeffs),
        &ModulusProfile::uniform(m, 2),
    ))
}
