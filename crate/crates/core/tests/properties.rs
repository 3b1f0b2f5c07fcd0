use cyclosyn_core::cyclosyn::lift_independence;
use cyclosyn_core::exactalg::arith::{parse_rational, render_rational};
use cyclosyn_core::exactalg::{divisors, rat_frac, NumberRing, Poly, RElement, RingRef, Var};
use cyclosyn_core::habiro::{exp_twist, log_unit};
use cyclosyn_core::polylog::{canonical_unit_lift, li1_symmetry_check, RootOfUnity};
use cyclosyn_core::qwitt::{cyclotomic_norm, q_dwork_membership, verify_q_dwork_lifts, QWittElement};
use cyclosyn_core::report::{VerificationReport, Witness};
use cyclosyn_core::sample;
use cyclosyn_core::witt::{
    dwork_check, from_ghost, ghost, teichmuller, witt_frobenius, witt_verschiebung, WittVector,
};
use proptest::prelude::*;

const LEVELS: [u64; 8] = [1, 2, 3, 4, 6, 8, 9, 12];

fn level() -> impl Strategy<Value = u64> {
    prop::sample::select(&LEVELS[..])
}

fn level_and_coords(bound: i64) -> impl Strategy<Value = (u64, Vec<i64>)> {
    level().prop_flat_map(move |m| (Just(m), prop::collection::vec(-bound..=bound, divisors(m).len())))
}

fn int_poly(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 1..=max_len)
}

fn qpoly(ring: &RingRef, v: &[i64]) -> Poly<RElement> {
    Poly::new(Var::Q, v.iter().map(|&c| RElement::from_int(ring, c)).collect())
}

fn gaussian(re: i64, im: i64) -> RElement {
    RElement::from_ints(&NumberRing::gaussian(), &[re, im])
}

proptest! {
    #[test]
    fn ghost_round_trip((m, v) in level_and_coords(6)) {
        let z = NumberRing::integers();
        let w = WittVector::from_ints(&z, m, &v).unwrap();
        prop_assert_eq!(from_ghost(&ghost(&w)).unwrap(), w);
    }

    #[test]
    fn ghosts_of_witt_vectors_satisfy_dwork((m, v) in level_and_coords(5), im in -3i64..=3) {
        let ring = NumberRing::gaussian();
        let vals: Vec<RElement> = v.iter().map(|&x| gaussian(x, im - x)).collect();
        let w = WittVector::new(&ring, m, vals).unwrap();
        prop_assert!(dwork_check(&ghost(&w)));
    }

    #[test]
    fn ring_operations_stay_integral((m, a, b) in level_and_coords(4).prop_flat_map(|(m, a)| {
        let n = a.len();
        (Just(m), Just(a), prop::collection::vec(-4i64..=4, n))
    })) {
        let z = NumberRing::integers();
        let x = WittVector::from_ints(&z, m, &a).unwrap();
        let y = WittVector::from_ints(&z, m, &b).unwrap();
        for r in [x.add(&y).unwrap(), x.mul(&y).unwrap(), x.neg()] {
            prop_assert!(r.values().iter().all(|c| c.is_integral()));
        }
    }

    #[test]
    fn frobenius_after_verschiebung_is_multiplication((m, v) in level_and_coords(5), d in 1u64..=4) {
        let z = NumberRing::integers();
        let w = WittVector::from_ints(&z, m, &v).unwrap();
        prop_assert_eq!(witt_frobenius(&witt_verschiebung(&w, d), d), w.scale_int(d as i64));
    }

    #[test]
    fn teichmuller_is_multiplicative(m in level(), a in (-4i64..=4, -4i64..=4), b in (-4i64..=4, -4i64..=4)) {
        let x = gaussian(a.0, a.1);
        let y = gaussian(b.0, b.1);
        let xy = cyclosyn_core::exactalg::Coeff::cmul(&x, &y);
        prop_assert_eq!(teichmuller(&xy, m), teichmuller(&x, m).mul(&teichmuller(&y, m)).unwrap());
    }

    #[test]
    fn rational_rendering_round_trips(n in -10_000i64..10_000, d in 1i64..500) {
        let r = rat_frac(n, d);
        prop_assert_eq!(parse_rational(&render_rational(&r)), Some(r));
    }

    #[test]
    fn report_json_round_trips(suite in "[a-z_]{1,12}", detail in ".{0,40}", cases in 0usize..1000, fail in any::<bool>()) {
        let mut r = VerificationReport::new(&suite);
        r.param("cases", cases);
        if fail {
            r.fail(Witness::message(detail));
        }
        let s = r.to_json();
        let back = VerificationReport::from_json(&s).unwrap();
        prop_assert_eq!(back.to_json(), s);
        prop_assert_eq!(back, r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integer_polynomials_are_q_dwork(m in level(), v in int_poly(8)) {
        let ring = NumberRing::gaussian();
        let c = QWittElement::from_polynomial(&ring, m, &qpoly(&ring, &v));
        let out = q_dwork_membership(&c);
        prop_assert!(out.member);
        prop_assert!(verify_q_dwork_lifts(&c, out.lifts.as_ref().unwrap()));
    }

    #[test]
    fn cyclotomic_norm_is_multiplicative(m in prop::sample::select(&[1u64, 2, 3][..]), k in 1u64..=4, a in int_poly(5), b in int_poly(5)) {
        let z = NumberRing::integers();
        let x = QWittElement::from_polynomial(&z, m, &qpoly(&z, &a));
        let y = QWittElement::from_polynomial(&z, m, &qpoly(&z, &b));
        let m2 = m * k;
        prop_assert_eq!(
            cyclotomic_norm(&x.mul(&y).unwrap(), m2),
            cyclotomic_norm(&x, m2).mul(&cyclotomic_norm(&y, m2)).unwrap()
        );
    }

    #[test]
    fn exp_and_log_are_inverse(m in level(), seed in any::<u64>()) {
        let ring = NumberRing::gaussian();
        let mut rng = sample::rng(seed);
        let x = sample::nygaard_twist(&ring, m, &mut rng);
        let y = sample::nygaard_twist(&ring, m, &mut rng);
        prop_assert_eq!(log_unit(&exp_twist(&x)).unwrap(), x.clone());
        prop_assert_eq!(exp_twist(&x).mul(&exp_twist(&y)).unwrap(), exp_twist(&x.add(&y).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn chern_class_does_not_depend_on_the_lift(
        (m, d) in prop::sample::select(&[(2u64, 2u64), (3, 3), (4, 2), (6, 3), (6, 6)][..]),
        a in 1u64..=4,
        seed in any::<u64>(),
    ) {
        let ring = NumberRing::cyclotomic(5);
        let z = RootOfUnity::new(&ring, 5, a).unwrap();
        let lift = canonical_unit_lift(&z, m).unwrap();
        let twist = sample::nygaard_twist(&ring, m, &mut sample::rng(seed));
        let other = exp_twist(&twist).mul(&lift).unwrap();
        prop_assert!(lift_independence(&z.one_minus(), m, d, &lift, &other).unwrap());
    }

    #[test]
    fn inverse_root_changes_li1_by_a_coboundary(
        (m, d) in prop::sample::select(&[(2u64, 2u64), (3, 3), (4, 2), (4, 4), (6, 2), (6, 3)][..]),
        a in 1u64..=6,
    ) {
        let ring = NumberRing::cyclotomic(7);
        let z = RootOfUnity::new(&ring, 7, a).unwrap();
        prop_assert!(li1_symmetry_check(&z, d, m).unwrap());
    }
}
