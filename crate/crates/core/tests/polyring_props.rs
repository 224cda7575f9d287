mod common;

use common::{q, qr, Dense, Q};
use extatica::cli::parse_polynomial;
use extatica::polyring::{rational_mod, Monomial, Polynomial, Ring};
use num_traits::Zero;
use proptest::prelude::*;

fn ring3() -> Ring {
    Ring::standard(3)
}

fn arb_poly(max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (
            (0..=max_exp, 0..=max_exp, 0..=max_exp),
            -20i64..=20,
            1i64..=6,
        ),
        0..=max_terms,
    )
    .prop_map(|terms| {
        Polynomial::from_terms(
            &ring3(),
            terms
                .into_iter()
                .map(|((a, b, c), n, d)| (Monomial::new([a, b, c]), qr(n, d))),
        )
    })
}

fn arb_point() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-9i64..=9, 1i64..=4).prop_map(|(n, d)| qr(n, d)), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(f in arb_poly(3, 6), g in arb_poly(3, 6), h in arb_poly(3, 6)) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn multiplication_matches_dense_oracle(f in arb_poly(4, 8), g in arb_poly(4, 8)) {
        let expected = Dense::from_poly(&f).mul(&Dense::from_poly(&g));
        prop_assert_eq!(Dense::from_poly(&(&f * &g)), expected);
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in arb_poly(3, 6), g in arb_poly(3, 6), p in arb_point()) {
        let (fv, gv) = (f.evaluate(&p).unwrap(), g.evaluate(&p).unwrap());
        prop_assert_eq!((&f * &g).evaluate(&p).unwrap(), &fv * &gv);
        prop_assert_eq!((&f + &g).evaluate(&p).unwrap(), &fv + &gv);
        prop_assert_eq!(fv, Dense::from_poly(&f).eval(&p));
    }

    #[test]
    fn modular_evaluation_agrees(f in arb_poly(3, 6), xs in prop::collection::vec(-50i64..=50, 3)) {
        let p = 1_000_000_007u64;
        let point: Vec<Q> = xs.iter().map(|&x| q(x)).collect();
        let point_mod: Vec<u64> = xs.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect();
        let exact = f.evaluate(&point).unwrap();
        prop_assert_eq!(Some(f.evaluate_mod(&point_mod, p).unwrap()), rational_mod(&exact, p));
    }

    #[test]
    fn exact_division_recovers_factor(f in arb_poly(3, 5), g in arb_poly(2, 4)) {
        prop_assume!(!g.is_zero());
        let prod = &f * &g;
        prop_assert_eq!(prod.divide_exact(&g).unwrap(), Some(f.clone()));
    }

    #[test]
    fn inexact_division_is_detected(f in arb_poly(3, 5), g in arb_poly(2, 4)) {
        prop_assume!(!g.is_zero() && !g.is_constant());
        let shifted = &(&f * &g) + &g.ring().one();
        prop_assert_eq!(shifted.divide_exact(&g).unwrap(), None);
    }

    #[test]
    fn product_rule(f in arb_poly(3, 5), g in arb_poly(3, 5), var in 0usize..3) {
        let lhs = (&f * &g).partial_derivative(var).unwrap();
        let rhs = &(&f.partial_derivative(var).unwrap() * &g) + &(&f * &g.partial_derivative(var).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn homogenize_round_trip(f in arb_poly(3, 6), extra in 0u32..3) {
        prop_assume!(!f.is_zero());
        let d = f.total_degree().finite().unwrap() + extra;
        let h = f.homogenize("w", d).unwrap();
        prop_assert!(h.is_homogeneous());
        prop_assert_eq!(h.total_degree().finite(), Some(d));
        let w = h.ring().index_of("w").unwrap();
        let back = h.dehomogenize(w, &q(1)).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn total_degree_is_max_term_degree(f in arb_poly(4, 8)) {
        let expected = Dense::from_poly(&f).degree();
        prop_assert_eq!(f.total_degree().finite(), expected);
    }

    #[test]
    fn terms_are_strictly_descending(f in arb_poly(4, 8)) {
        for w in f.terms().windows(2) {
            prop_assert!(w[0].0 > w[1].0);
        }
        prop_assert!(f.terms().iter().all(|(_, c)| !c.is_zero()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn display_parse_round_trip(f in arb_poly(4, 8)) {
        let text = f.to_string();
        prop_assert_eq!(parse_polynomial(&ring3(), &text).unwrap(), f);
    }
}

#[test]
fn canonical_text_examples() {
    let r = ring3();
    let p = |s: &str| parse_polynomial(&r, s).unwrap().to_string();
    assert_eq!(p("0"), "0");
    assert_eq!(p("y - 3*x"), "-3*x + y");
    assert_eq!(p("x*(y/2 + z)"), "1/2*x*y + x*z");
    assert_eq!(p("(x + y)^2"), "x^2 + 2*x*y + y^2");
    assert_eq!(p("-7/14"), "-1/2");
}

#[test]
fn zero_has_negative_infinite_degree() {
    let z = ring3().zero();
    assert_eq!(z.total_degree().finite(), None);
    assert_eq!(z.total_degree().to_string(), "-inf");
    assert!(z.total_degree() < ring3().one().total_degree());
}
