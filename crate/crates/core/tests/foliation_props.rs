mod common;

use common::{apply_field, q, Dense};
use extatica::corpus::{planted_lines_field, random_field};
use extatica::foliation::{euler_check, radial_field, Mode, VectorField};
use extatica::polyring::{Monomial, Polynomial, Ring};
use extatica::Error;
use proptest::prelude::*;

fn arb_poly(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, nvars), -9i64..=9),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        Polynomial::from_terms(
            &Ring::standard(nvars),
            terms.into_iter().map(|(e, c)| (Monomial::new(e), q(c))),
        )
    })
}

fn arb_homogeneous(nvars: usize, degree: u32) -> impl Strategy<Value = Polynomial> {
    let monomials = Ring::standard(nvars).monomials_of_degree(degree);
    prop::collection::vec(-5i64..=5, monomials.len()).prop_map(move |cs| {
        Polynomial::from_terms(
            &Ring::standard(nvars),
            monomials.iter().cloned().zip(cs.into_iter().map(q)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn leibniz_rule(seed in any::<u64>(), f in arb_poly(3, 3, 5), g in arb_poly(3, 3, 5)) {
        let x = random_field(3, 2, seed, Mode::Homogeneous).unwrap();
        let lhs = x.apply(&(&f * &g)).unwrap();
        let rhs = &(&x.apply(&f).unwrap() * &g) + &(&f * &x.apply(&g).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn apply_matches_oracle(seed in any::<u64>(), f in arb_poly(3, 3, 6)) {
        let x = random_field(3, 2, seed, Mode::Affine).unwrap();
        let dense: Vec<Dense> = x.components().iter().map(Dense::from_poly).collect();
        prop_assert_eq!(Dense::from_poly(&x.apply(&f).unwrap()), apply_field(&dense, &Dense::from_poly(&f)));
    }

    #[test]
    fn cofactors_add_under_products(seed in any::<u64>(), d in 1u32..=3, i in 0usize..3, j in 0usize..3) {
        let entry = planted_lines_field(3, d, seed).unwrap();
        let ring = entry.field.ring().clone();
        let ki = entry.field.check_invariance(&ring.var(i)).unwrap().unwrap().polynomial;
        let kj = entry.field.check_invariance(&ring.var(j)).unwrap().unwrap().polynomial;
        let product = &ring.var(i) * &ring.var(j);
        let k = entry.field.check_invariance(&product).unwrap().unwrap().polynomial;
        prop_assert_eq!(k, &ki + &kj);
    }

    #[test]
    fn reported_cofactors_are_exact(seed in any::<u64>(), f in arb_homogeneous(3, 2)) {
        prop_assume!(!f.is_zero());
        let x = random_field(3, 2, seed, Mode::Homogeneous).unwrap();
        if let Some(k) = x.check_invariance(&f).unwrap() {
            prop_assert_eq!(x.apply(&f).unwrap(), &k.polynomial * &f);
        }
    }

    #[test]
    fn euler_relation(f in arb_homogeneous(3, 3)) {
        prop_assume!(!f.is_zero());
        prop_assert!(euler_check(&f).unwrap());
        let r = radial_field(f.ring()).unwrap();
        prop_assert_eq!(r.apply(&f).unwrap(), f.scale(&q(3)));
    }

    #[test]
    fn non_homogeneous_fails_euler(f in arb_homogeneous(3, 2)) {
        prop_assume!(!f.is_zero());
        let g = &f + &f.ring().var(0);
        prop_assert!(!euler_check(&g).unwrap());
    }

    #[test]
    fn homogeneous_degree_is_component_degree(seed in any::<u64>(), d in 1u32..=4) {
        let x = random_field(3, d, seed, Mode::Homogeneous).unwrap();
        prop_assert_eq!(x.foliation_degree().unwrap().degree, d as i64);
    }

    #[test]
    fn adding_radial_multiple_keeps_invariance(seed in any::<u64>(), g in arb_homogeneous(3, 1)) {
        let entry = planted_lines_field(3, 2, seed).unwrap();
        let ring = entry.field.ring().clone();
        let shifted = entry.field.checked_add(&radial_field(&ring).unwrap().multiply(&g).unwrap()).unwrap();
        for i in 0..3 {
            prop_assert!(shifted.check_invariance(&ring.var(i)).unwrap().is_some());
        }
    }
}

#[test]
fn invariance_preconditions() {
    let r = Ring::standard(3);
    let x = VectorField::new(vec![r.var(0), r.var(1), r.var(2)], Mode::Homogeneous).unwrap();
    assert!(matches!(
        x.check_invariance(&r.one()),
        Err(Error::InvalidDivisor(_))
    ));
    assert!(matches!(
        x.check_invariance(&r.zero()),
        Err(Error::InvalidDivisor(_))
    ));
    assert!(matches!(
        x.check_invariance(&(&r.var(0) + &r.one())),
        Err(Error::InvalidDivisor(_))
    ));
}

#[test]
fn degree_examples() {
    let r = Ring::standard(2);
    let (x, y) = (r.var(0), r.var(1));
    let linear = VectorField::new(vec![x.clone(), y.scale(&q(2))], Mode::Affine).unwrap();
    assert_eq!(linear.foliation_degree().unwrap().degree, 1);
    // Radial top part drops one degree.
    let radial_top = VectorField::new(vec![&x * &x, &x * &y], Mode::Affine).unwrap();
    assert_eq!(radial_top.foliation_degree().unwrap().degree, 1);
    let zero = VectorField::new(vec![r.zero(), r.zero()], Mode::Affine).unwrap();
    assert!(matches!(
        zero.foliation_degree(),
        Err(Error::DegenerateField(_))
    ));
}
