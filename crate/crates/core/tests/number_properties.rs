use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use subspace_core::exactnum::{
    height_products, height_rational, height_vector, norm_at, product_formula_check, support_primes, Place, Prime,
    DEFAULT_FACTOR_BOUND,
};

fn rational() -> impl Strategy<Value = BigRational> {
    (-100_000i64..=100_000, 1i64..=100_000).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn nonzero() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #[test]
    fn product_formula(a in nonzero()) {
        prop_assert!(product_formula_check(&a).unwrap().is_one());
    }

    #[test]
    fn height_identity(x in rational()) {
        let h = BigRational::from_integer(height_rational(&x));
        let (max_prod, inv_min) = height_products(&x).unwrap();
        prop_assert_eq!(&max_prod, &h);
        if let Some(inv) = inv_min {
            prop_assert_eq!(inv, h);
        }
    }

    #[test]
    fn projective_invariance(x in prop::collection::vec(rational(), 1..5), c in nonzero()) {
        prop_assume!(x.iter().any(|v| !v.is_zero()));
        let cx: Vec<BigRational> = x.iter().map(|v| v * &c).collect();
        prop_assert_eq!(height_vector(&x).unwrap(), height_vector(&cx).unwrap());
    }

    #[test]
    fn coprime_integers_have_sup_norm_height(x in prop::collection::vec(-1000i64..=1000, 1..5)) {
        let g = x.iter().fold(0i64, |g, v| g.gcd(v));
        prop_assume!(g == 1);
        let v: Vec<BigRational> = x.iter().map(|&n| BigRational::from_integer(n.into())).collect();
        let sup = x.iter().map(|n| n.abs()).max().unwrap();
        prop_assert_eq!(height_vector(&v).unwrap(), BigRational::from_integer(sup.into()));
    }

    #[test]
    fn norms_are_multiplicative(a in nonzero(), b in nonzero()) {
        let ab = &a * &b;
        let mut primes = support_primes(&a, DEFAULT_FACTOR_BOUND).unwrap();
        primes.extend(support_primes(&b, DEFAULT_FACTOR_BOUND).unwrap());
        primes.push(7);
        let places = primes.into_iter().map(|p| Place::Finite(Prime::new(p).unwrap())).chain([Place::Infinite]);
        for pl in places {
            prop_assert_eq!(norm_at(&ab, pl), norm_at(&a, pl) * norm_at(&b, pl));
        }
    }

    #[test]
    fn infinite_norm_is_absolute_value(a in rational()) {
        prop_assert_eq!(norm_at(&a, Place::Infinite), a.abs());
    }
}
