//! Classical m-truncated big Witt vectors 𝕎_m(R). Ring operations, F and V
//! are all transported through ghost coordinates.

use crate::error::{Error, Result};
use crate::exactalg::arith::{divisors, prime_factors, rat, vp};
use crate::exactalg::{Coeff, FrobeniusLift, RElement, RingRef};
use std::collections::BTreeMap;

/// Witt coordinates (x_e)_{e|m}.
#[derive(Clone, Debug, PartialEq)]
pub struct WittVector {
    ring: RingRef,
    m: u64,
    coords: BTreeMap<u64, RElement>,
}

/// Ghost coordinates (gh_e)_{e|m}.
#[derive(Clone, Debug, PartialEq)]
pub struct GhostTuple {
    ring: RingRef,
    m: u64,
    coords: BTreeMap<u64, RElement>,
}

fn keyed(ring: &RingRef, m: u64, values: Vec<RElement>) -> Result<BTreeMap<u64, RElement>> {
    let ds = divisors(m);
    if ds.len() != values.len() {
        return Err(Error::InvalidArgument(format!(
            "level {m} has {} divisors, got {} entries",
            ds.len(),
            values.len()
        )));
    }
    for v in &values {
        if v.ring() != ring {
            return Err(Error::InvalidArgument("entries from a different ring".into()));
        }
    }
    Ok(ds.into_iter().zip(values).collect())
}

macro_rules! tuple_common {
    ($t:ident) => {
        impl $t {
            /// Entries listed in increasing divisor order.
            pub fn new(ring: &RingRef, m: u64, values: Vec<RElement>) -> Result<Self> {
                Ok($t { ring: ring.clone(), m, coords: keyed(ring, m, values)? })
            }

            pub fn from_map(ring: &RingRef, m: u64, coords: BTreeMap<u64, RElement>) -> Self {
                assert_eq!(coords.keys().copied().collect::<Vec<_>>(), divisors(m));
                $t { ring: ring.clone(), m, coords }
            }

            pub fn from_ints(ring: &RingRef, m: u64, values: &[i64]) -> Result<Self> {
                $t::new(ring, m, values.iter().map(|&v| RElement::from_int(ring, v)).collect())
            }

            pub fn level(&self) -> u64 {
                self.m
            }

            pub fn ring(&self) -> &RingRef {
                &self.ring
            }

            pub fn get(&self, e: u64) -> &RElement {
                &self.coords[&e]
            }

            pub fn coords(&self) -> &BTreeMap<u64, RElement> {
                &self.coords
            }

            pub fn values(&self) -> Vec<RElement> {
                self.coords.values().cloned().collect()
            }

            pub fn render(&self) -> String {
                let parts: Vec<String> = self.coords.values().map(|v| v.render()).collect();
                format!("[{}]", parts.join(", "))
            }
        }
    };
}

tuple_common!(WittVector);
tuple_common!(GhostTuple);

/// gh_e = Σ_{d|e} d·x_d^{e/d}
pub fn ghost(w: &WittVector) -> GhostTuple {
    let coords = divisors(w.m)
        .into_iter()
        .map(|e| {
            let g = divisors(e).into_iter().fold(RElement::zero(&w.ring), |acc, d| {
                acc.cadd(&w.coords[&d].pow(e / d).cscale(&rat(d as i64)))
            });
            (e, g)
        })
        .collect();
    GhostTuple { ring: w.ring.clone(), m: w.m, coords }
}

/// Inverts the ghost map by solving for x_e one divisor at a time.
pub fn from_ghost(g: &GhostTuple) -> Result<WittVector> {
    let mut coords: BTreeMap<u64, RElement> = BTreeMap::new();
    for e in divisors(g.m) {
        let lower = divisors(e)
            .into_iter()
            .filter(|&d| d < e)
            .fold(RElement::zero(&g.ring), |acc, d| {
                acc.cadd(&coords[&d].pow(e / d).cscale(&rat(d as i64)))
            });
        let x = g.coords[&e].csub(&lower).cscale(&crate::exactalg::rat_frac(1, e as i64));
        if !x.is_integral() {
            return Err(Error::NotInImage { e });
        }
        coords.insert(e, x);
    }
    Ok(WittVector { ring: g.ring.clone(), m: g.m, coords })
}

/// A failed Dwork congruence: gh_e ≢ φ_p(gh_{e/p}) mod p^{v_p(e)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DworkWitness {
    pub p: u64,
    pub e: u64,
}

/// Frobenius lifts for the primes dividing m that are not inverted in R.
pub fn lifts_for_level(ring: &RingRef, m: u64) -> Result<Vec<FrobeniusLift>> {
    prime_factors(m)
        .into_iter()
        .filter(|&p| !ring.inverts(p))
        .map(|p| FrobeniusLift::for_level(ring, p, m))
        .collect()
}

/// Checks the congruences gh_e ≡ φ_p(gh_{e/p}) mod p^{v_p(e)}.
pub fn dwork_witness(g: &GhostTuple) -> Result<Option<DworkWitness>> {
    for lift in lifts_for_level(&g.ring, g.m)? {
        let p = lift.p();
        for e in divisors(g.m).into_iter().filter(|e| e % p == 0) {
            let k = vp(p, e);
            let lhs = lift.reduce(&g.coords[&e], k);
            let rhs = lift.apply(&g.coords[&(e / p)], k);
            match (lhs, rhs) {
                (Some(a), Some(b)) if a == b => {}
                _ => return Ok(Some(DworkWitness { p, e })),
            }
        }
    }
    Ok(None)
}

pub fn dwork_check(g: &GhostTuple) -> bool {
    matches!(dwork_witness(g), Ok(None))
}

fn zip_ghost(
    a: &GhostTuple,
    b: &GhostTuple,
    f: impl Fn(&RElement, &RElement) -> RElement,
) -> Result<GhostTuple> {
    if a.m != b.m {
        return Err(Error::LevelMismatch { left: a.m, right: b.m });
    }
    let coords = a.coords.iter().map(|(e, x)| (*e, f(x, &b.coords[e]))).collect();
    Ok(GhostTuple { ring: a.ring.clone(), m: a.m, coords })
}

impl GhostTuple {
    pub fn add(&self, o: &Self) -> Result<Self> {
        zip_ghost(self, o, |x, y| x.cadd(y))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        zip_ghost(self, o, |x, y| x.cmul(y))
    }

    /// Multiplication by an integer.
    pub fn scale_int(&self, k: i64) -> Self {
        let coords = self.coords.iter().map(|(e, x)| (*e, x.cscale(&rat(k)))).collect();
        GhostTuple { ring: self.ring.clone(), m: self.m, coords }
    }

    /// F_d in ghost coordinates: level dm → m, (gh_{de})_{e|m}.
    pub fn frobenius(&self, d: u64) -> Self {
        assert!(d >= 1 && self.m % d == 0, "F_d needs d | m");
        let m = self.m / d;
        let coords = divisors(m).into_iter().map(|e| (e, self.coords[&(d * e)].clone())).collect();
        GhostTuple { ring: self.ring.clone(), m, coords }
    }

    /// V_d in ghost coordinates: level m → dm, (d·gh_{e/d}·𝟙_{d|e}).
    pub fn verschiebung(&self, d: u64) -> Self {
        assert!(d >= 1);
        let m = self.m * d;
        let coords = divisors(m)
            .into_iter()
            .map(|e| {
                let v = if e % d == 0 {
                    self.coords[&(e / d)].cscale(&rat(d as i64))
                } else {
                    RElement::zero(&self.ring)
                };
                (e, v)
            })
            .collect();
        GhostTuple { ring: self.ring.clone(), m, coords }
    }

    /// Index truncation to a divisor level.
    pub fn truncate(&self, m: u64) -> Self {
        assert!(self.m % m == 0, "truncation needs m | m'");
        let coords = divisors(m).into_iter().map(|e| (e, self.coords[&e].clone())).collect();
        GhostTuple { ring: self.ring.clone(), m, coords }
    }
}

impl WittVector {
    pub fn zero(ring: &RingRef, m: u64) -> Self {
        let coords = divisors(m).into_iter().map(|e| (e, RElement::zero(ring))).collect();
        WittVector { ring: ring.clone(), m, coords }
    }

    pub fn one(ring: &RingRef, m: u64) -> Self {
        teichmuller(&RElement::one(ring), m)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        from_ghost(&ghost(self).add(&ghost(o))?)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        from_ghost(&ghost(self).mul(&ghost(o))?)
    }

    pub fn neg(&self) -> Self {
        from_ghost(&ghost(self).scale_int(-1)).expect("negation stays in the image")
    }

    pub fn scale_int(&self, k: i64) -> Self {
        from_ghost(&ghost(self).scale_int(k)).expect("integer multiples stay in the image")
    }
}

/// F_d : 𝕎_{dm}(R) → 𝕎_m(R)
pub fn witt_frobenius(w: &WittVector, d: u64) -> WittVector {
    from_ghost(&ghost(w).frobenius(d)).expect("Frobenius image satisfies Dwork")
}

/// V_d : 𝕎_m(R) → 𝕎_{dm}(R)
pub fn witt_verschiebung(w: &WittVector, d: u64) -> WittVector {
    from_ghost(&ghost(w).verschiebung(d)).expect("Verschiebung image satisfies Dwork")
}

/// Restriction 𝕎_{m'}(R) → 𝕎_m(R): keep the coordinates x_e with e | m.
pub fn restriction(w: &WittVector, m: u64) -> WittVector {
    assert!(w.m % m == 0, "restriction needs m | m'");
    let coords = divisors(m).into_iter().map(|e| (e, w.coords[&e].clone())).collect();
    WittVector { ring: w.ring.clone(), m, coords }
}

/// Teichmüller lift: Witt coordinates (x, 0, …, 0), ghost coordinates x^e.
pub fn teichmuller(x: &RElement, m: u64) -> WittVector {
    let coords = divisors(m)
        .into_iter()
        .map(|e| (e, if e == 1 { x.clone() } else { RElement::zero(x.ring()) }))
        .collect();
    WittVector { ring: x.ring().clone(), m, coords }
}
