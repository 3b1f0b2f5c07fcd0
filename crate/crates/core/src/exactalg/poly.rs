//! Dense univariate polynomials over an exact coefficient ring.

use super::arith::{render_rational, Rational};
use num_traits::{One, Zero};
use std::fmt;

/// Which indeterminate a polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Q,
    T,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Var::X => "x",
            Var::Q => "q",
            Var::T => "T",
        };
        f.write_str(s)
    }
}

/// Coefficient rings. Zero and one are produced from an existing element
/// because some rings (number rings, component rings) carry context.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn c_is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn cadd(&self, o: &Self) -> Self;
    fn csub(&self, o: &Self) -> Self;
    fn cmul(&self, o: &Self) -> Self;
    fn cneg(&self) -> Self;
    fn cscale(&self, r: &Rational) -> Self;
    fn render(&self) -> String;
}

/// Coefficient rings in which some nonzero elements can be inverted.
pub trait TryInv: Coeff {
    fn try_inv(&self) -> Option<Self>;
}

impl Coeff for Rational {
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn cadd(&self, o: &Self) -> Self {
        self + o
    }
    fn csub(&self, o: &Self) -> Self {
        self - o
    }
    fn cmul(&self, o: &Self) -> Self {
        self * o
    }
    fn cneg(&self) -> Self {
        -self
    }
    fn cscale(&self, r: &Rational) -> Self {
        self * r
    }
    fn render(&self) -> String {
        render_rational(self)
    }
}

impl TryInv for Rational {
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// A polynomial with coefficients listed lowest degree first. The zero
/// polynomial has no coefficients; trailing zeros are always trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C: Coeff = Rational> {
    var: Var,
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn new(var: Var, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.c_is_zero()) {
            coeffs.pop();
        }
        Poly { var, coeffs }
    }

    pub fn zero(var: Var) -> Self {
        Poly { var, coeffs: Vec::new() }
    }

    pub fn constant(var: Var, c: C) -> Self {
        Poly::new(var, vec![c])
    }

    /// `c * var^k`
    pub fn monomial(var: Var, c: C, k: usize) -> Self {
        let mut v = vec![c.zero_like(); k];
        v.push(c);
        Poly::new(var, v)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&C> {
        self.coeffs.get(i)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a.cadd(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(self.var, v)
    }

    pub fn neg(&self) -> Self {
        Poly { var: self.var, coeffs: self.coeffs.iter().map(|c| c.cneg()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.var);
        }
        let z = self.coeffs[0].zero_like();
        let mut v = vec![z; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.c_is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.c_is_zero() {
                    continue;
                }
                v[i + j] = v[i + j].cadd(&a.cmul(b));
            }
        }
        Poly::new(self.var, v)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Poly::new(self.var, self.coeffs.iter().map(|c| c.cscale(r)).collect())
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        Poly::new(self.var, self.coeffs.iter().map(|a| a.cmul(c)).collect())
    }

    pub fn pow(&self, k: u64, one: &C) -> Self {
        let mut acc = Poly::constant(self.var, one.clone());
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

    /// Remainder modulo a monic polynomial with rational coefficients.
    pub fn rem_monic(&self, modulus: &Poly<Rational>) -> Self {
        let dm = modulus.degree().expect("modulus must be nonzero");
        assert!(modulus.lead().is_some_and(|l| l.is_one()), "modulus must be monic");
        if self.coeffs.len() <= dm {
            return self.clone();
        }
        let mut v = self.coeffs.clone();
        for top in (dm..v.len()).rev() {
            let c = v[top].clone();
            if c.c_is_zero() {
                continue;
            }
            let shift = top - dm;
            for (j, m) in modulus.coeffs.iter().enumerate().take(dm) {
                if !Zero::is_zero(m) {
                    v[shift + j] = v[shift + j].csub(&c.cscale(m));
                }
            }
            v[top] = c.zero_like();
        }
        v.truncate(dm);
        Poly::new(self.var, v)
    }

    /// Substitute `var -> var^d`.
    pub fn substitute_power(&self, d: usize) -> Self {
        assert!(d >= 1);
        if self.is_zero() || d == 1 {
            return self.clone();
        }
        let z = self.coeffs[0].zero_like();
        let mut v = vec![z; (self.coeffs.len() - 1) * d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * d] = c.clone();
        }
        Poly::new(self.var, v)
    }

    /// Map coefficients into another ring.
    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.var, self.coeffs.iter().map(f).collect())
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    /// Horner evaluation at a coefficient.
    pub fn eval(&self, at: &C) -> Option<C> {
        let mut it = self.coeffs.iter().rev();
        let mut acc = it.next()?.clone();
        for c in it {
            acc = acc.cmul(at).cadd(c);
        }
        Some(acc)
    }

    /// Lowest-first coefficient list, e.g. `[-1, 0, 1]`.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.render()).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl<C: TryInv> Poly<C> {
    /// Euclidean division; fails if a leading coefficient is not invertible.
    pub fn divrem(&self, b: &Self) -> Option<(Self, Self)> {
        let db = b.degree()?;
        let inv = b.lead()?.try_inv()?;
        if self.coeffs.len() <= db {
            return Some((Poly::zero(self.var), self.clone()));
        }
        let z = inv.zero_like();
        let mut r = self.coeffs.clone();
        let mut qv = vec![z.clone(); self.coeffs.len() - db];
        for top in (db..r.len()).rev() {
            if r[top].c_is_zero() {
                continue;
            }
            let c = r[top].cmul(&inv);
            let shift = top - db;
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[shift + j] = r[shift + j].csub(&c.cmul(bc));
            }
            qv[shift] = c;
        }
        r.truncate(db);
        Some((Poly::new(self.var, qv), Poly::new(self.var, r)))
    }

    pub fn make_monic(&self) -> Option<Self> {
        let inv = self.lead()?.try_inv()?;
        Some(self.mul_coeff(&inv))
    }

    /// Returns `(g, s)` with `g` monic and `s * self = g` modulo `m`.
    pub fn ext_gcd_mod(&self, m: &Self) -> Option<(Self, Self)> {
        let var = self.var;
        let one = m.lead()?.one_like();
        let (mut r0, mut r1) = (m.clone(), self.divrem(m)?.1);
        let (mut s0, mut s1) = (Poly::zero(var), Poly::constant(var, one));
        while !r1.is_zero() {
            let (qt, r2) = r0.divrem(&r1)?;
            let s2 = s0.sub(&qt.mul(&s1));
            r0 = std::mem::replace(&mut r1, r2);
            s0 = std::mem::replace(&mut s1, s2);
        }
        let inv = r0.lead()?.try_inv()?;
        Some((r0.mul_coeff(&inv), s0.mul_coeff(&inv)))
    }
}

impl Poly<Rational> {
    pub fn from_ints(var: Var, v: &[i64]) -> Self {
        Poly::new(var, v.iter().map(|&c| super::arith::rat(c)).collect())
    }

    pub fn one(var: Var) -> Self {
        Poly::constant(var, Rational::one())
    }

    /// The monomial `var^k`.
    pub fn x_pow(var: Var, k: usize) -> Self {
        Poly::monomial(var, Rational::one(), k)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * super::arith::rat(i as i64))
            .collect();
        Poly::new(self.var, v)
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, b: &Self) -> Self {
        let (qt, r) = self.divrem(b).expect("division by zero polynomial");
        assert!(r.is_zero(), "inexact polynomial division");
        qt
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Poly::zero(g.var);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(g.var, c.clone()));
        }
        acc
    }
}

/// Resultant of two polynomials over the rationals.
pub fn resultant(a: &Poly<Rational>, b: &Poly<Rational>) -> Rational {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return Rational::zero();
    };
    if db == 0 {
        return num_traits::pow(b.coeffs[0].clone(), da);
    }
    let (_, r) = a.divrem(b).expect("nonzero divisor");
    let Some(dr) = r.degree() else {
        return Rational::zero();
    };
    let sign = if (da * db) % 2 == 1 { -Rational::one() } else { Rational::one() };
    sign * num_traits::pow(b.lead().unwrap().clone(), da - dr) * resultant(b, &r)
}
