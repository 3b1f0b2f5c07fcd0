//! Verification reports with a canonical JSON form: keys in alphabetical
//! order, rationals as "num/den" strings, polynomials lowest degree first.

use crate::error::Error;
use crate::exactalg::arith::render_rational;
use crate::exactalg::{ComponentElement, Poly, RElement};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::time::Instant;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub e: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub left: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub right: Option<Value>,
}

impl Witness {
    pub fn components(e: u64, left: &ComponentElement, right: &ComponentElement) -> Self {
        Witness {
            detail: Some(format!("{} != {}", left.render(), right.render())),
            e: Some(e),
            left: Some(poly_json(left.value())),
            right: Some(poly_json(right.value())),
        }
    }

    pub fn error(err: &Error) -> Self {
        Witness::message(err.to_string())
    }

    pub fn message(s: impl Into<String>) -> Self {
        Witness { detail: Some(s.into()), e: None, left: None, right: None }
    }
}

/// An element of R as its list of coordinates.
pub fn relement_json(x: &RElement) -> Value {
    Value::Array(x.padded().iter().map(|c| Value::String(render_rational(c))).collect())
}

/// A polynomial in q over R as a list of coefficients. Over ℤ each
/// coefficient is a single rational string; otherwise a coordinate list.
pub fn poly_json(p: &Poly<RElement>) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .map(|c| {
                if c.ring().degree() == 1 {
                    Value::String(render_rational(&c.coeff(0)))
                } else {
                    relement_json(c)
                }
            })
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub millis: u64,
    pub params: Map<String, Value>,
    pub status: String,
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        VerificationReport {
            millis: 0,
            params: Map::new(),
            status: "pass".into(),
            suite: suite.into(),
            witness: None,
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Value>) {
        self.params.insert(key.into(), v.into());
    }

    pub fn pass(&mut self) {
        self.status = "pass".into();
        self.witness = None;
    }

    pub fn fail(&mut self, w: Witness) {
        self.status = "fail".into();
        self.witness = Some(w);
    }

    pub fn finish(mut self, start: Instant) -> Self {
        self.millis = start.elapsed().as_millis() as u64;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{NumberRing, RingRef};

    #[test]
    fn canonical_key_order_and_round_trip() {
        let mut r = VerificationReport::new("demo");
        r.param("m", 4);
        r.param("d", 2);
        let z: RingRef = NumberRing::integers();
        let a = ComponentElement::from_int(&z, 2, 2, 3);
        let b = ComponentElement::q(&z, 2, 2);
        r.fail(Witness::components(2, &a, &b));
        let s = r.to_json();
        assert!(s.starts_with("{\"millis\":0,\"params\":{\"d\":2,\"m\":4},\"status\":\"fail\",\"suite\":\"demo\",\"witness\":{"));
        assert!(s.contains("\"left\":[\"3\"]"));
        assert!(s.contains("\"right\":[\"0\",\"1\"]"));
        let back = VerificationReport::from_json(&s).unwrap();
        assert_eq!(back.to_json(), s);
    }
}
