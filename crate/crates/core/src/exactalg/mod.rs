//! Exact arithmetic: rationals, polynomials, cyclotomic polynomials,
//! number rings with Frobenius lifts and the component rings R[q]/Φ_e(q)^n.

pub mod arith;
pub mod component;
pub mod cyclotomic;
pub mod frobenius;
pub mod numring;
pub mod poly;

pub use arith::{divisors, rat, rat_frac, Rational};
pub use component::{component_invert, exact_divide, ComponentElement};
pub use cyclotomic::{cyclotomic_poly, in_p_qminus1_power, q_integer, q_integer_at};
pub use frobenius::{frobenius_lift, FrobeniusLift};
pub use numring::{NumberRing, RElement, RingRef, RingSpec};
pub use poly::{Coeff, Poly, Var};
