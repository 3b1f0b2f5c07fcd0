//! Verification suites. Each suite sweeps a parameter grid and returns one
//! report, carrying the first failing case in grid order.

use crate::cyclosyn::{
    can_minus_frob, chern_cocycle, cross_level_check, integer_unit_lift, lift_independence, s_d, EmPair,
};
use crate::error::Error;
use crate::exactalg::arith::{euler_phi, gcd};
use crate::exactalg::component::rpoly_from_rational;
use crate::exactalg::cyclotomic::{in_p_qminus1_power, q_integer, q_pow_minus_one, qconst};
use crate::exactalg::{divisors, Coeff, NumberRing, Poly, RElement, RingRef};
use crate::habiro::{exp_twist, exp_twist_mixed, lifted_norm, log_unit, HabiroTruncElement};
use crate::polylog::{
    canonical_unit_lift, key_identity_check_signed, li1_class, li1_symmetry_check, teichmuller_root_lift,
    zeta_class, RootOfUnity,
};
use crate::qwitt::{
    cyclotomic_frobenius, cyclotomic_norm, lambda_embed, lambda_embed_at_d, lambda_extract, mul_q_integer,
    q_dwork_membership, q_frobenius, q_teichmuller, q_verschiebung, verify_q_dwork_lifts, LambdaZPresentation,
    QWittElement,
};
use crate::report::{VerificationReport, Witness};
use crate::sample::{self, TestRng};
use crate::witt::{dwork_check, from_ghost, ghost, witt_frobenius, witt_verschiebung, GhostTuple, WittVector};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::time::Instant;

pub const SUITES: [&str; 11] = [
    "dwork",
    "frobenius_verschiebung",
    "norms",
    "ideal_membership",
    "exp_log",
    "homotopy",
    "key_identity",
    "main_theorem",
    "cross_level",
    "lambda_ring",
    "li1_symmetry",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Rings for the Witt and q-Witt suites.
    pub rings: Vec<RingRef>,
    /// Ring for the Habiro and twist suites.
    pub ring: RingRef,
    /// Roots of unity for the polylogarithm suites.
    pub roots: Vec<RootOfUnity>,
    /// Replaces the level grid of every suite when set.
    pub levels: Option<Vec<u64>>,
    /// Replaces the d grid of every suite when set.
    pub divisors: Option<Vec<u64>>,
    /// Replaces the per-case sample counts when set.
    pub samples: Option<usize>,
    pub seed: u64,
    pub jobs: usize,
    /// Compare the Chern cocycle with +Li_1 instead of -Li_1.
    pub li1_sign_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let z5 = NumberRing::cyclotomic(5);
        let z7 = NumberRing::cyclotomic(7);
        SuiteConfig {
            rings: vec![NumberRing::integers(), NumberRing::gaussian(), z5.clone()],
            ring: z5.clone(),
            roots: vec![
                RootOfUnity::new(&z5, 5, 1).expect("ζ5 in Z[ζ5]"),
                RootOfUnity::new(&z7, 7, 1).expect("ζ7 in Z[ζ7]"),
            ],
            levels: None,
            divisors: None,
            samples: None,
            seed: 2024,
            jobs: 1,
            li1_sign_fault: false,
        }
    }
}

impl SuiteConfig {
    fn levels_or(&self, default: &[u64]) -> Vec<u64> {
        self.levels.clone().unwrap_or_else(|| default.to_vec())
    }

    fn divisors_or(&self, default: &[u64]) -> Vec<u64> {
        self.divisors.clone().unwrap_or_else(|| default.to_vec())
    }

    fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn rng(&self, case: usize) -> TestRng {
        sample::rng(self.seed ^ (case as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

type CaseResult = std::result::Result<(), Witness>;

fn fail(label: &str, detail: impl std::fmt::Display) -> Witness {
    Witness::message(format!("{label}: {detail}"))
}

fn error(label: &str, err: &Error) -> Witness {
    fail(label, err)
}

fn expect(label: &str, ok: bool, what: &str) -> CaseResult {
    if ok {
        Ok(())
    } else {
        Err(fail(label, what))
    }
}

fn expect_ok(label: &str, r: crate::Result<bool>, what: &str) -> CaseResult {
    match r {
        Ok(b) => expect(label, b, what),
        Err(e) => Err(error(label, &e)),
    }
}

fn labels(rings: &[RingRef]) -> Value {
    Value::from(rings.iter().map(|r| r.label().to_string()).collect::<Vec<_>>())
}

fn root_labels(roots: &[RootOfUnity]) -> Value {
    Value::from(
        roots
            .iter()
            .map(|z| format!("{}:{}:{}", z.ring().label(), z.order(), z.exponent()))
            .collect::<Vec<_>>(),
    )
}

fn run<T: Sync>(
    name: &str,
    cfg: &SuiteConfig,
    params: Map<String, Value>,
    cases: Vec<T>,
    check: impl Fn(usize, &T) -> CaseResult + Sync,
) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new(name);
    report.params = params;
    report.param("cases", cases.len());
    report.param("seed", cfg.seed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .expect("thread pool");
    let outcomes: Vec<CaseResult> =
        pool.install(|| cases.par_iter().enumerate().map(|(i, c)| check(i, c)).collect());
    match outcomes.into_iter().find_map(|o| o.err()) {
        Some(w) => report.fail(w),
        None => report.pass(),
    }
    report.finish(start)
}

/// Runs one suite by name.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Option<VerificationReport> {
    Some(match name {
        "dwork" => dwork_suite(cfg),
        "frobenius_verschiebung" => frobenius_verschiebung_suite(cfg),
        "norms" => norms_suite(cfg),
        "ideal_membership" => ideal_membership_suite(cfg),
        "exp_log" => exp_log_suite(cfg),
        "homotopy" => homotopy_suite(cfg),
        "key_identity" => key_identity_suite(cfg),
        "main_theorem" => main_theorem_suite(cfg),
        "cross_level" => cross_level_suite(cfg),
        "lambda_ring" => lambda_ring_suite(cfg),
        "li1_symmetry" => li1_symmetry_suite(cfg),
        _ => return None,
    })
}

fn random_witt(ring: &RingRef, m: u64, rng: &mut TestRng) -> WittVector {
    let v = divisors(m).iter().map(|_| sample::relement(ring, rng, 3)).collect();
    WittVector::new(ring, m, v).expect("one entry per divisor")
}

fn random_qwitt(ring: &RingRef, m: u64, rng: &mut TestRng) -> QWittElement {
    let polys = divisors(m)
        .into_iter()
        .map(|e| sample::rpoly(ring, rng, euler_phi(e) as usize, 3))
        .collect();
    QWittElement::from_polys(ring, m, polys)
}

/// A ghost tuple that is valid, arbitrary, or valid with one entry moved.
fn random_ghost(ring: &RingRef, m: u64, kind: usize, rng: &mut TestRng) -> GhostTuple {
    let valid = ghost(&random_witt(ring, m, rng));
    match kind % 3 {
        0 => valid,
        1 => {
            let v = divisors(m).iter().map(|_| sample::relement(ring, rng, 5)).collect();
            GhostTuple::new(ring, m, v).expect("one entry per divisor")
        }
        _ => {
            let ds = divisors(m);
            let e = ds[rng.gen_range(0..ds.len())];
            let k = [1, 2, 3, e as i64, 2 * e as i64][rng.gen_range(0..5)];
            let shift = sample::relement(ring, rng, 1).cscale(&crate::exactalg::rat(k));
            let v = ds
                .iter()
                .map(|d| if *d == e { valid.get(*d).cadd(&shift) } else { valid.get(*d).clone() })
                .collect();
            GhostTuple::new(ring, m, v).expect("one entry per divisor")
        }
    }
}

/// dwork_check(g) holds exactly when from_ghost(g) succeeds.
pub fn dwork_suite(cfg: &SuiteConfig) -> VerificationReport {
    let levels = cfg.levels_or(&(1..=12).collect::<Vec<_>>());
    let samples = cfg.samples_or(200);
    let mut params = Map::new();
    params.insert("levels".into(), json!(levels));
    params.insert("rings".into(), labels(&cfg.rings));
    params.insert("samples".into(), json!(samples));
    let cases: Vec<(RingRef, u64)> =
        cfg.rings.iter().flat_map(|r| levels.iter().map(move |m| (r.clone(), *m))).collect();
    run("dwork", cfg, params, cases, |i, (ring, m)| {
        let mut rng = cfg.rng(i);
        for k in 0..samples {
            let g = random_ghost(ring, *m, k, &mut rng);
            let label = format!("{} m={m} ghost={}", ring.label(), g.render());
            expect(&label, dwork_check(&g) == from_ghost(&g).is_ok(), "dwork_check disagrees with from_ghost")?;
        }
        Ok(())
    })
}

/// F_d∘V_d = d, V_d∘F_d = V_d(1)·(-) resp. [d]_{q^m}, and F_d∘V_{d'} =
/// V_{d'}∘F_d for coprime d, d', classically and for q-Witt vectors.
pub fn frobenius_verschiebung_suite(cfg: &SuiteConfig) -> VerificationReport {
    let levels = cfg.levels_or(&[1, 2, 3, 4, 5, 6]);
    let ds = cfg.divisors_or(&[2, 3]);
    let samples = cfg.samples_or(10);
    let mut params = Map::new();
    params.insert("divisors".into(), json!(ds));
    params.insert("levels".into(), json!(levels));
    params.insert("rings".into(), labels(&cfg.rings));
    params.insert("samples".into(), json!(samples));
    let mut cases = vec![];
    for r in &cfg.rings {
        for &m in &levels {
            for &d in &ds {
                cases.push((r.clone(), m, d));
            }
        }
    }
    let ds_all = ds.clone();
    run("frobenius_verschiebung", cfg, params, cases, |i, (ring, m, d)| {
        let (m, d) = (*m, *d);
        let mut rng = cfg.rng(i);
        for _ in 0..samples {
            let label = format!("{} m={m} d={d}", ring.label());
            let x = random_witt(ring, m, &mut rng);
            let fv = witt_frobenius(&witt_verschiebung(&x, d), d);
            expect(&label, fv == x.scale_int(d as i64), "F_d V_d != d (classical)")?;
            let y = random_witt(ring, d * m, &mut rng);
            let vf = witt_verschiebung(&witt_frobenius(&y, d), d);
            let v1 = witt_verschiebung(&WittVector::one(ring, m), d).mul(&y).map_err(|e| error(&label, &e))?;
            expect(&label, vf == v1, "V_d F_d != V_d(1) (classical)")?;
            for &d2 in ds_all.iter().filter(|&&d2| gcd(d, d2) == 1) {
                let lhs = witt_frobenius(&witt_verschiebung(&y, d2), d);
                let rhs = witt_verschiebung(&witt_frobenius(&y, d), d2);
                expect(&label, lhs == rhs, "F_d V_d' != V_d' F_d")?;
            }
            let c = random_qwitt(ring, m, &mut rng);
            expect(&label, q_frobenius(&q_verschiebung(&c, d), m) == c.scale_int(d as i64), "F_d V_d != d (q-Witt)")?;
            let c2 = random_qwitt(ring, d * m, &mut rng);
            let lhs = q_verschiebung(&q_frobenius(&c2, m), d);
            expect(&label, lhs == mul_q_integer(&c2, d, m), "V_d F_d != [d]_{q^m} (q-Witt)")?;
        }
        Ok(())
    })
}

fn chains(levels: &[u64]) -> Vec<(u64, u64, u64)> {
    let mut out = vec![];
    for &a in levels {
        for &b in levels.iter().filter(|&&b| b % a == 0) {
            for &c in levels.iter().filter(|&&c| c % b == 0) {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// Transitivity of cyclotomic norms, Π_{m'/m}∘Π_m = Π_{m'}, and
/// preservation of q-Dwork membership.
pub fn norms_suite(cfg: &SuiteConfig) -> VerificationReport {
    let levels = cfg.levels_or(&(1..=12).collect::<Vec<_>>());
    let samples = cfg.samples_or(2);
    let mut params = Map::new();
    params.insert("levels".into(), json!(levels));
    params.insert("rings".into(), labels(&cfg.rings));
    params.insert("samples".into(), json!(samples));
    let cases: Vec<(RingRef, (u64, u64, u64))> = cfg
        .rings
        .iter()
        .flat_map(|r| chains(&levels).into_iter().map(move |c| (r.clone(), c)))
        .collect();
    run("norms", cfg, params, cases, |i, (ring, (m, m1, m2))| {
        let (m, m1, m2) = (*m, *m1, *m2);
        let label = format!("{} m={m} m'={m1} m''={m2}", ring.label());
        let mut rng = cfg.rng(i);
        for _ in 0..samples {
            let c = random_qwitt(ring, m, &mut rng);
            let twice = cyclotomic_norm(&cyclotomic_norm(&c, m1), m2);
            expect(&label, twice == cyclotomic_norm(&c, m2), "norms are not transitive")?;
            let x = sample::relement(ring, &mut rng, 3);
            let t = cyclotomic_norm(&q_teichmuller(&x, m), m1);
            expect(&label, t == q_teichmuller(&x, m1), "Π_{m'/m} Π_m != Π_{m'}")?;
            if m2 == m1 {
                let g = rpoly_from_rational(ring, &sample::int_qpoly(&mut rng, m as usize + 1, 3));
                let h = rpoly_from_rational(ring, &sample::int_qpoly(&mut rng, m as usize + 1, 3));
                let member = QWittElement::from_polynomial(ring, m, &g)
                    .add(&q_teichmuller(&x, m).mul(&QWittElement::from_polynomial(ring, m, &h)).map_err(|e| error(&label, &e))?)
                    .map_err(|e| error(&label, &e))?;
                for c in [cyclotomic_norm(&member, m1), cyclotomic_norm(&q_teichmuller(&x, m), m1)] {
                    let out = q_dwork_membership(&c);
                    let ok = out.member && out.lifts.as_ref().is_some_and(|l| verify_q_dwork_lifts(&c, l));
                    expect(&label, ok, "norm leaves the image of the q-ghost map")?;
                }
            }
        }
        Ok(())
    })
}

/// q^{p^r} - 1 and [p^r]_q lie in (p, q-1)^r; q^2 - 1, 2 and 3 are the
/// negative controls.
pub fn ideal_membership_suite(cfg: &SuiteConfig) -> VerificationReport {
    let mut params = Map::new();
    params.insert("primes".into(), json!([2, 3, 5]));
    params.insert("r_max".into(), json!(4));
    let mut cases: Vec<(String, Poly, u64, u32, bool)> = vec![];
    for p in [2u64, 3, 5] {
        for r in 1..=4u32 {
            let pr = p.pow(r);
            cases.push((format!("q^{pr}-1"), q_pow_minus_one(pr), p, r, true));
            cases.push((format!("[{pr}]_q"), q_integer(pr), p, r, true));
        }
    }
    cases.push(("q^2-1".into(), q_pow_minus_one(2), 2, 3, false));
    cases.push(("q^2-1".into(), q_pow_minus_one(2), 3, 2, false));
    cases.push(("2".into(), qconst(2), 2, 2, false));
    cases.push(("3".into(), qconst(3), 3, 2, false));
    run("ideal_membership", cfg, params, cases, |_, (name, g, p, r, want)| {
        let label = format!("{name} in (p={p}, q-1)^{r}");
        expect(&label, in_p_qminus1_power(g, *p, *r) == *want, if *want { "not a member" } else { "unexpected member" })
    })
}

/// exp and log are inverse and turn products into sums; the lifted norm
/// of exp(x) agrees with exp of (m'/m)·x in the mixed profile.
pub fn exp_log_suite(cfg: &SuiteConfig) -> VerificationReport {
    let levels = cfg.levels_or(&(1..=12).collect::<Vec<_>>());
    let samples = cfg.samples_or(3);
    let ring = cfg.ring.clone();
    let mut params = Map::new();
    params.insert("levels".into(), json!(levels));
    params.insert("ring".into(), json!(ring.label()));
    params.insert("samples".into(), json!(samples));
    let roots: Vec<RootOfUnity> = cfg.roots.iter().filter(|z| z.ring() == &ring).cloned().collect();
    let mut cases = vec![];
    for &m in &levels {
        for &m2 in levels.iter().filter(|&&m2| m2 % m == 0) {
            cases.push((m, m2));
        }
    }
    run("exp_log", cfg, params, cases, |i, (m, m2)| {
        let (m, m2) = (*m, *m2);
        let label = format!("m={m} m'={m2}");
        let mut rng = cfg.rng(i);
        for k in 0..samples {
            let mut x = sample::nygaard_twist(&ring, m, &mut rng);
            if let Some(z) = roots.get(k % (roots.len() + 1)) {
                if gcd(m, z.ring().inverted()) == 1 {
                    let h = HabiroTruncElement::from_polynomial(
                        &ring,
                        &sample::rpoly(&ring, &mut rng, 2, 2),
                        &crate::habiro::ModulusProfile::uniform(m, 2),
                    );
                    let h = h.mul(&zeta_class(z, m).map_err(|e| error(&label, &e))?).map_err(|e| error(&label, &e))?;
                    x = crate::habiro::NygaardTwistElement::from_habiro(&h);
                }
            }
            let y = sample::nygaard_twist(&ring, m, &mut rng);
            let ex = exp_twist(&x);
            expect(&label, log_unit(&ex).as_ref() == Ok(&x), "log(exp(x)) != x")?;
            let prod = ex.mul(&exp_twist(&y)).map_err(|e| error(&label, &e))?;
            let sum = x.add(&y).map_err(|e| error(&label, &e))?;
            expect(&label, log_unit(&prod).as_ref() == Ok(&sum), "log(exp(x)exp(y)) != x + y")?;
            expect(&label, exp_twist(&log_unit(&ex).map_err(|e| error(&label, &e))?) == ex, "exp(log(t)) != t")?;
            let norm = lifted_norm(&ex, m2).map_err(|e| error(&label, &e))?;
            expect(&label, norm == exp_twist_mixed(&x, m2), "exp square does not commute")?;
        }
        Ok(())
    })
}

#[derive(Clone, Debug)]
enum UnitSource {
    Canonical(RootOfUnity),
    Root(RootOfUnity),
    Integer(i64),
}

fn unit_sources(ring: &RingRef, roots: &[RootOfUnity]) -> Vec<UnitSource> {
    let mut out = vec![UnitSource::Integer(-1)];
    for p in ring.n_primes() {
        out.push(UnitSource::Integer(*p as i64));
        out.push(UnitSource::Integer(-(*p as i64)));
    }
    for z in roots.iter().filter(|z| z.ring() == ring) {
        for a in 1..z.order() {
            if gcd(a, z.order()) != 1 {
                continue;
            }
            if let Ok(w) = RootOfUnity::with_base(ring, z.order(), a, z.value()) {
                out.push(UnitSource::Root(w.clone()));
                out.push(UnitSource::Canonical(w));
            }
        }
    }
    out
}

fn source_pair(src: &UnitSource, ring: &RingRef, m: u64) -> crate::Result<EmPair> {
    match src {
        UnitSource::Canonical(z) => EmPair::new(canonical_unit_lift(z, m)?, z.one_minus()),
        UnitSource::Root(z) => EmPair::new(teichmuller_root_lift(z, m)?, z.value()),
        UnitSource::Integer(k) => EmPair::new(integer_unit_lift(ring, *k, m)?, RElement::from_int(ring, *k)),
    }
}

/// A product of one or two basic unit pairs, moved by a random twist.
fn random_pair(ring: &RingRef, sources: &[UnitSource], m: u64, rng: &mut TestRng) -> crate::Result<EmPair> {
    let usable: Vec<&UnitSource> = sources
        .iter()
        .filter(|s| !matches!(s, UnitSource::Canonical(z) | UnitSource::Root(z) if gcd(m, z.ring().inverted()) != 1))
        .collect();
    let mut pair = source_pair(usable[rng.gen_range(0..usable.len())], ring, m)?;
    if rng.gen_bool(0.5) {
        pair = pair.mul(&source_pair(usable[rng.gen_range(0..usable.len())], ring, m)?)?;
    }
    pair.twist_by(&sample::nygaard_twist(ring, m, rng))
}

/// s_d(exp(x)·y, z) - s_d(y, z) = (can - Frob_d)(x).
pub fn homotopy_suite(cfg: &SuiteConfig) -> VerificationReport {
    let levels = cfg.levels_or(&[2, 3, 4, 6]);
    let ds = cfg.divisors_or(&[2, 3]);
    let samples = cfg.samples_or(100);
    let ring = cfg.ring.clone();
    let sources = unit_sources(&ring, &cfg.roots);
    let mut params = Map::new();
    params.insert("divisors".into(), json!(ds));
    params.insert("levels".into(), json!(levels));
    params.insert("ring".into(), json!(ring.label()));
    params.insert("samples".into(), json!(samples));
    let cases: Vec<(u64, u64)> = levels.iter().flat_map(|&m| ds.iter().map(move |&d| (m, d))).collect();
    run("homotopy", cfg, params, cases, |i, (m, d)| {
        let (m, d) = (*m, *d);
        let label = format!("m={m} d={d}");
        let mut rng = cfg.rng(i);
        for _ in 0..samples {
            let mut inner = || -> crate::Result<bool> {
                let pair = random_pair(&ring, &sources, m, &mut rng)?;
                let x = sample::nygaard_twist(&ring, m, &mut rng);
                let moved = s_d(&pair.twist_by(&x)?, d)?;
                Ok(moved.sub(&s_d(&pair, d)?)? == can_minus_frob(&x, d)?)
            };
            expect_ok(&label, inner(), "s_d(exp(x)y) - s_d(y) != (can - Frob_d)(x)")?;
        }
        Ok(())
    })
}

/// The key identity at every d | e | m, with the sign-flipped controls.
pub fn key_identity_suite(cfg: &SuiteConfig) -> VerificationReport {
    let levels = cfg.levels_or(&[2, 3, 4, 6, 8, 12]);
    let ds = cfg.divisors_or(&[2, 3, 4]);
    let mut params = Map::new();
    params.insert("divisors".into(), json!(ds));
    params.insert("levels".into(), json!(levels));
    let mut cases = vec![];
    for &d in &ds {
        for &m in &levels {
            for e in divisors(m).into_iter().filter(|e| e % d == 0) {
                cases.push((d, m, e));
            }
        }
    }
    run("key_identity", cfg, params, cases, |_, (d, m, e)| {
        let label = format!("d={d} m={m} e={e}");
        expect(&label, key_identity_check_signed(*d, *m, *e, false), "identity fails")?;
        expect(&label, !key_identity_check_signed(*d, *m, *e, true), "sign-flipped control passes")
    })
}

fn polylog_grid(cfg: &SuiteConfig) -> (Vec<u64>, Vec<u64>, Vec<(RootOfUnity, u64, u64)>) {
    let levels = cfg.levels_or(&[2, 3, 4, 6, 12]);
    let ds = cfg.divisors_or(&[2, 3, 4, 6]);
    let mut cases = vec![];
    for z in &cfg.roots {
        for &d in &ds {
            for &m in levels.iter().filter(|&&m| gcd(m, z.ring().inverted()) == 1) {
                cases.push((z.clone(), d, m));
            }
        }
    }
    (levels, ds, cases)
}

fn polylog_params(cfg: &SuiteConfig, levels: &[u64], ds: &[u64]) -> Map<String, Value> {
    let mut params = Map::new();
    params.insert("divisors".into(), json!(ds));
    params.insert("levels".into(), json!(levels));
    params.insert("roots".into(), root_labels(&cfg.roots));
    params
}

/// c_1(1 - ζ) with the canonical lift equals -Li_1^{(d)}([ζ])_q.
pub fn main_theorem_suite(cfg: &SuiteConfig) -> VerificationReport {
    let (levels, ds, cases) = polylog_grid(cfg);
    let mut params = polylog_params(cfg, &levels, &ds);
    if cfg.li1_sign_fault {
        params.insert("li1_sign_fault".into(), json!(true));
    }
    run("main_theorem", cfg, params, cases, |_, (z, d, m)| {
        let label = format!("zeta={}:{} d={d} m={m}", z.order(), z.exponent());
        let inner = || -> crate::Result<Option<Witness>> {
            let lift = canonical_unit_lift(z, *m)?;
            let chern = chern_cocycle(&z.one_minus(), *m, *d, &lift)?.value;
            let li = li1_class(z, *d, *m)?;
            let li = if cfg.li1_sign_fault { li } else { li.neg() };
            Ok(chern.first_difference(&li).map(|e| Witness::components(e, chern.component(e), li.component(e))))
        };
        match inner() {
            Ok(None) => Ok(()),
            Ok(Some(mut w)) => {
                w.detail = Some(format!("{label}: {}", w.detail.unwrap_or_default()));
                Err(w)
            }
            Err(e) => Err(error(&label, &e)),
        }
    })
}

/// s_d commutes with the transition maps for canonical and Teichmüller
/// lifts, and the class does not depend on the lift.
pub fn cross_level_suite(cfg: &SuiteConfig) -> VerificationReport {
    let (levels, ds, grid) = polylog_grid(cfg);
    let samples = cfg.samples_or(100);
    let mut params = polylog_params(cfg, &levels, &ds);
    params.insert("samples".into(), json!(samples));
    enum Case {
        Pair(RootOfUnity, u64, u64, u64),
        Independence(usize),
    }
    let mut cases = vec![];
    for (z, d, m) in &grid {
        for &m2 in levels.iter().filter(|&&m2| m2 > *m && m2 % m == 0 && gcd(m2, z.ring().inverted()) == 1) {
            cases.push(Case::Pair(z.clone(), *d, *m, m2));
        }
    }
    if !grid.is_empty() {
        cases.extend((0..samples).map(Case::Independence));
    }
    run("cross_level", cfg, params, cases, |i, case| match case {
        Case::Pair(z, d, m, m2) => {
            let label = format!("zeta={}:{} d={d} m={m} m'={m2}", z.order(), z.exponent());
            let inner = || -> crate::Result<bool> {
                let canonical = cross_level_check(
                    &z.one_minus(),
                    *m,
                    *m2,
                    *d,
                    &canonical_unit_lift(z, *m2)?,
                    &canonical_unit_lift(z, *m)?,
                )?;
                let root = cross_level_check(
                    &z.value(),
                    *m,
                    *m2,
                    *d,
                    &teichmuller_root_lift(z, *m2)?,
                    &teichmuller_root_lift(z, *m)?,
                )?;
                Ok(canonical && root)
            };
            expect_ok(&label, inner(), "transition of s_d at m' differs from s_d at m")
        }
        Case::Independence(k) => {
            let (z, d, m) = &grid[k % grid.len()];
            let label = format!("zeta={}:{} d={d} m={m} sample={k}", z.order(), z.exponent());
            let mut rng = cfg.rng(i);
            let mut inner = || -> crate::Result<bool> {
                let lift = canonical_unit_lift(z, *m)?;
                let other = exp_twist(&sample::nygaard_twist(z.ring(), *m, &mut rng)).mul(&lift)?;
                lift_independence(&z.one_minus(), *m, *d, &lift, &other)
            };
            expect_ok(&label, inner(), "classes of two lifts differ by more than a coboundary")
        }
    })
}

/// Over ℤ: embed/extract round trip and Frob_d∘embed = embed_at_d∘(q ↦ q^d).
pub fn lambda_ring_suite(cfg: &SuiteConfig) -> VerificationReport {
    let levels = cfg.levels_or(&(1..=12).collect::<Vec<_>>());
    let ds = cfg.divisors_or(&[2, 3]);
    let samples = cfg.samples_or(5);
    let z = NumberRing::integers();
    let mut params = Map::new();
    params.insert("divisors".into(), json!(ds));
    params.insert("levels".into(), json!(levels));
    params.insert("samples".into(), json!(samples));
    let cases: Vec<(u64, u64)> = levels.iter().flat_map(|&m| ds.iter().map(move |&d| (m, d))).collect();
    run("lambda_ring", cfg, params, cases, |i, (m, d)| {
        let (m, d) = (*m, *d);
        let mut rng = cfg.rng(i);
        for _ in 0..samples {
            let g = sample::int_qpoly(&mut rng, m as usize, 5);
            let label = format!("m={m} d={d} f={}", g.render());
            let f = LambdaZPresentation::new(m, &g);
            let c = lambda_embed(&z, &f);
            expect(&label, lambda_extract(&c).as_ref() == Ok(&f), "extract(embed(f)) != f")?;
            let out = q_dwork_membership(&c);
            expect(&label, out.member, "embedded tuple fails q-Dwork")?;
            let fd = LambdaZPresentation::new(d * m, &g.substitute_power(d as usize));
            expect(&label, cyclotomic_frobenius(&c, d) == lambda_embed_at_d(&z, &fd, d), "Frobenius square fails")?;
        }
        Ok(())
    })
}

/// Li_1^{(d)} at ζ and ζ^{-1} agree up to the coboundary (can - Frob_d)(x)
/// with c_e(x) = (1 - ζ^{1/e})^{-1}, and bare roots of unity have zero
/// Chern cocycle with the Teichmüller lift.
pub fn li1_symmetry_suite(cfg: &SuiteConfig) -> VerificationReport {
    let (levels, ds, cases) = polylog_grid(cfg);
    let params = polylog_params(cfg, &levels, &ds);
    run("li1_symmetry", cfg, params, cases, |_, (z, d, m)| {
        let label = format!("zeta={}:{} d={d} m={m}", z.order(), z.exponent());
        expect_ok(&label, li1_symmetry_check(z, *d, *m), "Li_1 at ζ^{-1} and ζ differ by more than a coboundary")?;
        for w in [z.clone(), z.inverse()] {
            let inner = || -> crate::Result<bool> {
                let lift = teichmuller_root_lift(&w, *m)?;
                Ok(chern_cocycle(&w.value(), *m, *d, &lift)?.value.is_zero())
            };
            expect_ok(&label, inner(), "Chern cocycle of a root of unity is nonzero")?;
        }
        Ok(())
    })
}

/// Li_1^{(d)}([ζ])_q and Li_1^{(d)}([ζ]^{-1})_q as twists, for a direct
/// comparison.
pub fn li1_pair(z: &RootOfUnity, d: u64, m: u64) -> crate::Result<(crate::habiro::TwistAtDElement, crate::habiro::TwistAtDElement)> {
    Ok((li1_class(z, d, m)?, li1_class(&z.inverse(), d, m)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig { roots: SuiteConfig::default().roots[..1].to_vec(), ..SuiteConfig::default() }
    }

    #[test]
    fn sign_fault_is_caught_at_the_first_case() {
        let cfg = SuiteConfig { levels: Some(vec![2, 4]), divisors: Some(vec![2]), li1_sign_fault: true, ..small() };
        let r = main_theorem_suite(&cfg);
        assert!(!r.passed());
        let w = r.witness.unwrap();
        assert_eq!(w.e, Some(2));
        assert!(w.detail.unwrap().starts_with("zeta=5:1 d=2 m=2"));
        let ok = main_theorem_suite(&SuiteConfig { li1_sign_fault: false, ..cfg });
        assert!(ok.passed());
    }

    #[test]
    fn random_ghosts_hit_both_outcomes() {
        let z = NumberRing::integers();
        let mut rng = sample::rng(1);
        let mut seen = [0, 0];
        for k in 0..60 {
            seen[dwork_check(&random_ghost(&z, 6, k, &mut rng)) as usize] += 1;
        }
        assert!(seen[0] > 5 && seen[1] > 5, "{seen:?}");
    }

    #[test]
    fn unknown_suite_and_report_params() {
        let cfg = small();
        assert!(run_suite("nope", &cfg).is_none());
        let r = run_suite("ideal_membership", &cfg).unwrap();
        assert!(r.passed());
        assert_eq!(r.params["cases"], json!(28));
    }

    #[test]
    fn results_do_not_depend_on_jobs() {
        let base = SuiteConfig { levels: Some(vec![1, 2, 4]), samples: Some(20), ..small() };
        let a = dwork_suite(&SuiteConfig { jobs: 1, ..base.clone() });
        let b = dwork_suite(&SuiteConfig { jobs: 3, ..base });
        assert_eq!((a.status, a.params), (b.status, b.params));
    }
}
