//! Frobenius lifts φ_p on R/p^r, found by Hensel iteration from x ↦ x^p.

use super::arith::{mod_inverse, rational_mod, vp};
use super::numring::{RElement, RingRef};
use super::poly::{Poly, Var};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Arithmetic in (ℤ/M)[x]/(f) for the monic integer polynomial f of a ring.
#[derive(Clone, Debug)]
pub struct ModRing {
    f: Vec<BigInt>,
    modulus: BigInt,
}

impl ModRing {
    pub fn new(ring: &RingRef, modulus: BigInt) -> Self {
        let f = ring.f().coeffs().iter().map(|c| c.numer().clone()).collect();
        ModRing { f, modulus }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    /// Reduce an arbitrary integer coefficient vector into canonical form.
    pub fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        for top in (d..v.len()).rev() {
            let c = v[top].mod_floor(&self.modulus);
            if c.is_zero() {
                continue;
            }
            let shift = top - d;
            for j in 0..d {
                v[shift + j] -= &c * &self.f[j];
            }
            v[top] = BigInt::zero();
        }
        v.resize(d, BigInt::zero());
        v.iter().map(|c| c.mod_floor(&self.modulus)).collect()
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.degree()]
    }

    pub fn one(&self) -> Vec<BigInt> {
        self.reduce(vec![BigInt::one()])
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| (x + y).mod_floor(&self.modulus)).collect()
    }

    pub fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| (x - y).mod_floor(&self.modulus)).collect()
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                v[i + j] += x * y;
            }
        }
        self.reduce(v)
    }

    pub fn scale(&self, a: &[BigInt], k: &BigInt) -> Vec<BigInt> {
        a.iter().map(|x| (x * k).mod_floor(&self.modulus)).collect()
    }

    pub fn pow(&self, a: &[BigInt], mut k: u64) -> Vec<BigInt> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Evaluate an integer polynomial (lowest first) at `y`.
    pub fn eval_int_poly(&self, coeffs: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, y);
            let mut cv = self.zero();
            if !cv.is_empty() {
                cv[0] = c.clone();
            }
            acc = self.add(&acc, &self.reduce(cv));
        }
        acc
    }

    /// Residues of an element of R whose denominators are prime to M.
    pub fn from_element(&self, a: &RElement) -> Option<Vec<BigInt>> {
        let v: Option<Vec<BigInt>> =
            a.padded().iter().map(|c| rational_mod(c, &self.modulus)).collect();
        Some(self.reduce(v?))
    }

    /// Inverse modulo (f, p^k) where `self.modulus = p^k`, via an inverse
    /// modulo p followed by Newton steps.
    pub fn inverse(&self, a: &[BigInt], p: u64) -> Option<Vec<BigInt>> {
        let fp = ModRing { f: self.f.clone(), modulus: BigInt::from(p) };
        let a1: Vec<BigInt> = fp.reduce(a.to_vec());
        let mut b = fp.inverse_mod_prime(&a1, p)?;
        let two = self.scale(&self.one(), &BigInt::from(2));
        loop {
            let ab = self.mul(a, &b);
            if ab == self.one() {
                return Some(b);
            }
            b = self.mul(&b, &self.sub(&two, &ab));
        }
    }

    fn inverse_mod_prime(&self, a: &[BigInt], p: u64) -> Option<Vec<BigInt>> {
        let p = BigInt::from(p);
        let to_fp = |v: &[BigInt]| -> FpPoly {
            FpPoly::new(v.iter().map(|c| c.mod_floor(&p)).collect(), &p)
        };
        let f = to_fp(&self.f);
        let a = to_fp(a);
        let (g, s) = a.ext_gcd(&f)?;
        if g.coeffs.len() != 1 {
            return None;
        }
        let ginv = mod_inverse(&g.coeffs[0], &p)?;
        let mut v: Vec<BigInt> = s.coeffs.iter().map(|c| (c * &ginv).mod_floor(&p)).collect();
        v.resize(self.degree().max(v.len()), BigInt::zero());
        Some(self.reduce(v))
    }
}

/// Polynomials over F_p, only what the inverse computation needs.
#[derive(Clone, Debug)]
struct FpPoly {
    coeffs: Vec<BigInt>,
    p: BigInt,
}

impl FpPoly {
    fn new(mut coeffs: Vec<BigInt>, p: &BigInt) -> Self {
        for c in coeffs.iter_mut() {
            *c = c.mod_floor(p);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FpPoly { coeffs, p: p.clone() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_default();
                let b = o.coeffs.get(i).cloned().unwrap_or_default();
                a - b
            })
            .collect();
        FpPoly::new(v, &self.p)
    }

    fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::new(vec![], &self.p);
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        FpPoly::new(v, &self.p)
    }

    fn divrem(&self, b: &FpPoly) -> Option<(FpPoly, FpPoly)> {
        let db = b.coeffs.len().checked_sub(1)?;
        let inv = mod_inverse(b.coeffs.last()?, &self.p)?;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Some((FpPoly::new(vec![], &self.p), self.clone()));
        }
        let mut qv = vec![BigInt::zero(); r.len() - db];
        for top in (db..r.len()).rev() {
            let c = (&r[top] * &inv).mod_floor(&self.p);
            if c.is_zero() {
                continue;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[top - db + j] -= &c * bc;
                r[top - db + j] = r[top - db + j].mod_floor(&self.p);
            }
            qv[top - db] = c;
        }
        r.truncate(db);
        Some((FpPoly::new(qv, &self.p), FpPoly::new(r, &self.p)))
    }

    /// (g, s) with s·self ≡ g mod m.
    fn ext_gcd(&self, m: &FpPoly) -> Option<(FpPoly, FpPoly)> {
        let (mut r0, mut r1) = (m.clone(), self.divrem(m)?.1);
        let (mut s0, mut s1) =
            (FpPoly::new(vec![], &self.p), FpPoly::new(vec![BigInt::one()], &self.p));
        while !r1.is_zero() {
            let (qt, r2) = r0.divrem(&r1)?;
            let s2 = s0.sub(&qt.mul(&s1));
            r0 = std::mem::replace(&mut r1, r2);
            s0 = std::mem::replace(&mut s1, s2);
        }
        Some((r0, s0))
    }
}

/// The unique lift φ_p : R → R/p^r of the p-th power map.
#[derive(Clone, Debug)]
pub struct FrobeniusLift {
    ring: RingRef,
    p: u64,
    r: u32,
    arith: ModRing,
    image: Vec<BigInt>,
}

/// Hensel-lift the Frobenius of R at p to precision p^r.
pub fn frobenius_lift(ring: &RingRef, p: u64, r: u32) -> Result<FrobeniusLift> {
    if ring.inverts(p) {
        return Err(Error::InvalidArgument(format!("p = {p} divides N")));
    }
    let r = r.max(1);
    let modulus = num_traits::pow(BigInt::from(p), r as usize);
    let arith = ModRing::new(ring, modulus);
    let fmod_p = ModRing::new(ring, BigInt::from(p));
    let f: Vec<BigInt> = ring.f().coeffs().iter().map(|c| c.numer().clone()).collect();
    let fprime: Vec<BigInt> =
        ring.f().derivative().coeffs().iter().map(|c| c.numer().clone()).collect();

    let mut x = fmod_p.zero();
    if ring.degree() == 1 {
        x = fmod_p.reduce(vec![BigInt::zero(), BigInt::one()]);
    } else {
        x[1] = BigInt::one();
    }
    let y0 = fmod_p.pow(&x, p);
    let dy0 = fmod_p.eval_int_poly(&fprime, &y0);
    if fmod_p.inverse(&dy0, p).is_none() {
        return Err(Error::NonEtaleAtP { p });
    }

    let mut y = arith.reduce(y0);
    for _ in 0..=(2 * r + 2) {
        let fy = arith.eval_int_poly(&f, &y);
        if fy.iter().all(|c| c.is_zero()) {
            return Ok(FrobeniusLift { ring: ring.clone(), p, r, arith, image: y });
        }
        let dy = arith.eval_int_poly(&fprime, &y);
        let inv = arith.inverse(&dy, p).ok_or(Error::NonEtaleAtP { p })?;
        y = arith.sub(&y, &arith.mul(&fy, &inv));
    }
    Err(Error::NonEtaleAtP { p })
}

impl FrobeniusLift {
    /// Precision large enough for all congruences mod p^{v_p(m/e)} at level m.
    pub fn for_level(ring: &RingRef, p: u64, m: u64) -> Result<Self> {
        frobenius_lift(ring, p, vp(p, m) + 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.r
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    /// Image of x as an integer polynomial with coefficients in [0, p^r).
    pub fn image(&self) -> &[BigInt] {
        &self.image
    }

    pub fn image_poly(&self) -> Poly {
        Poly::new(
            Var::X,
            self.image.iter().map(|c| super::arith::Rational::from_integer(c.clone())).collect(),
        )
    }

    /// The same lift at a lower precision.
    pub fn truncate(&self, r: u32) -> FrobeniusLift {
        assert!(r >= 1 && r <= self.r);
        let modulus = num_traits::pow(BigInt::from(self.p), r as usize);
        let arith = ModRing::new(&self.ring, modulus);
        let image = arith.reduce(self.image.clone());
        FrobeniusLift { ring: self.ring.clone(), p: self.p, r, arith, image }
    }

    /// Arithmetic modulo p^k, k ≤ r.
    pub fn arith(&self, k: u32) -> ModRing {
        assert!(k <= self.r);
        ModRing::new(&self.ring, num_traits::pow(BigInt::from(self.p), k as usize))
    }

    /// a mod p^k
    pub fn reduce(&self, a: &RElement, k: u32) -> Option<Vec<BigInt>> {
        self.arith(k).from_element(a)
    }

    /// φ_p(a) mod p^k
    pub fn apply(&self, a: &RElement, k: u32) -> Option<Vec<BigInt>> {
        let ar = self.arith(k);
        let coeffs: Option<Vec<BigInt>> =
            a.padded().iter().map(|c| rational_mod(c, ar.modulus())).collect();
        let y = ar.reduce(self.image.clone());
        Some(ar.eval_int_poly(&coeffs?, &y))
    }

    /// φ_p applied to an integer residue vector modulo p^k.
    pub fn apply_residues(&self, a: &[BigInt], k: u32) -> Vec<BigInt> {
        let ar = self.arith(k);
        let y = ar.reduce(self.image.clone());
        ar.eval_int_poly(a, &y)
    }

    /// The p-adic precision as a machine integer, for reporting.
    pub fn modulus_u64(&self) -> Option<u64> {
        self.arith.modulus().to_u64()
    }
}
