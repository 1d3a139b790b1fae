use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use subspace_core::transcendence::{
    abl_pipeline, default_places, digits_of_rational, periodic_value, subspace_product, AbcbPattern,
};

fn pattern(base: u32) -> impl Strategy<Value = AbcbPattern> {
    (
        prop::collection::vec(0..base, 0..4),
        prop::collection::vec(0..base, 1..4),
        prop::collection::vec(0..base, 0..3),
    )
        .prop_filter("not all b-1", move |(_, b, c)| !b.iter().chain(c).all(|&d| d == base - 1))
        .prop_map(|(a, b, c)| AbcbPattern::new(a, b, c).unwrap())
}

fn in_unit_interval() -> impl Strategy<Value = BigRational> {
    (1i64..10_000).prop_flat_map(|d| (1..d).prop_map(move |n| BigRational::new(n.into(), d.into())))
}

proptest! {
    #[test]
    fn linear_form_identity(p in pattern(10), alpha in in_unit_interval()) {
        let (xi, m) = periodic_value(&p, 10).unwrap();
        let b = BigRational::from_integer(10.into());
        let br = num_traits::pow(b.clone(), p.r());
        let bs = num_traits::pow(b.clone(), p.s());
        let lhs = &br * &bs * &alpha - &br * &alpha - BigRational::from_integer(m.clone());
        let rhs = &br * (bs - BigRational::from_integer(1.into())) * (&alpha - &xi);
        prop_assert_eq!(lhs, rhs);
        prop_assert!(m.abs() <= num_traits::pow(BigInt::from(10), p.r() + p.s()));
    }

    #[test]
    fn periodic_round_trip((base, p) in (2u32..=10).prop_flat_map(|b| (Just(b), pattern(b)))) {
        let (xi, _) = periodic_value(&p, base).unwrap();
        prop_assume!(!xi.is_zero());
        for t in 1..4 {
            let w = digits_of_rational(&xi, base, p.r() + t * p.s()).unwrap();
            let mut expect = p.a.clone();
            for _ in 0..t {
                expect.extend(&p.b);
                expect.extend(&p.c);
            }
            prop_assert_eq!(w.symbols(), expect.as_slice());
        }
        let d = subspace_product(&xi, &p, base, &default_places(base), 0).unwrap();
        prop_assert!(d.product_value.is_zero());
    }

    #[test]
    fn plane_recovers_rationals(
        pre in prop::collection::vec(0u32..10, 0..3),
        per in prop::collection::vec(0u32..10, 1..5),
    ) {
        prop_assume!(!per.iter().all(|&d| d == 9));
        prop_assume!(!pre.iter().chain(&per).all(|&d| d == 0));
        let p = AbcbPattern::new(pre, per, vec![]).unwrap();
        let (alpha, _) = periodic_value(&p, 10).unwrap();
        let report = abl_pipeline(&alpha, 10, &[30, 45, 60], &BigRational::new(1.into(), 8.into())).unwrap();
        let plane = report.plane.unwrap();
        prop_assert!((&plane.mu + &plane.nu * &alpha).is_zero());
    }
}
