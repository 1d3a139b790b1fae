use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subspace_core::surface::{
    autissier_check, common_filtration_basis, curve_budget, cz_check, filtration_certificate, fixed_point_weights,
    min_positive_n, IntersectionMatrix, Pairings, QuadraticScalar, WeightVector,
};
use subspace_core::verify::random_filtration;

fn matrix(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = IntersectionMatrix> {
    sizes.prop_flat_map(|r| {
        prop::collection::vec(1i64..=10, r * (r + 1) / 2).prop_map(move |upper| {
            let mut rows = vec![vec![0; r]; r];
            let mut it = upper.into_iter();
            for i in 0..r {
                for j in i..r {
                    let v = it.next().unwrap();
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            IntersectionMatrix::from_integers(&rows).unwrap()
        })
    })
}

fn instance() -> impl Strategy<Value = (IntersectionMatrix, WeightVector)> {
    matrix(2..=5).prop_flat_map(|m| {
        let r = m.r();
        (Just(m), prop::collection::vec(1u64..=5, r).prop_map(|a| WeightVector::from_u64(&a).unwrap()))
    })
}

fn q(x: BigRational) -> QuadraticScalar {
    QuadraticScalar::rational(x)
}

/// Hodge index holds at every index, so every γ_i is defined.
fn valid(m: &IntersectionMatrix, a: &WeightVector) -> bool {
    (1..=m.r()).all(|i| !Pairings::at(m, a, i).unwrap().discriminant().is_negative())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gamma_brackets_alpha((m, a) in instance()) {
        for i in 1..=m.r() {
            let p = Pairings::at(&m, &a, i).unwrap();
            prop_assume!(!p.discriminant().is_negative());
            let (g, g2) = p.gamma_pair().unwrap();
            let alpha = q(&p.dc / &p.c2);
            prop_assert!(g <= alpha && alpha <= g2);
            let two_alpha = &alpha + &alpha;
            prop_assert_eq!((&(&g + &g2) - &two_alpha).signum(), Ordering::Equal);
        }
    }

    #[test]
    fn gamma_beats_half_beta((m, a) in instance()) {
        for i in 1..=m.r() {
            let p = Pairings::at(&m, &a, i).unwrap();
            prop_assume!(p.discriminant().is_positive());
            let f_gamma = p.f_theta(&p.gamma().unwrap()).unwrap();
            let half_beta = q(p.beta().unwrap() / BigRational::from_integer(2.into()));
            let f_half = p.f_theta(&half_beta).unwrap();
            prop_assert!(f_gamma >= f_half, "F(gamma) = {} < F(beta/2) = {}", f_gamma, f_half);
        }
    }

    #[test]
    fn autissier_implies_cz((m, a) in instance()) {
        prop_assume!(valid(&m, &a));
        let aut = autissier_check(&m, &a).unwrap();
        let cz = cz_check(&m, &a).unwrap();
        for (x, y) in aut.iter().zip(&cz) {
            prop_assert!(!x.holds || y.holds, "index {}", x.index);
        }
    }

    #[test]
    fn autissier_homogeneous((m, a) in instance(), t in 1u64..=50) {
        let before: Vec<bool> = autissier_check(&m, &a).unwrap().iter().map(|c| c.holds).collect();
        let after: Vec<bool> = autissier_check(&m, &a.scaled(t)).unwrap().iter().map(|c| c.holds).collect();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn curve_budget_boundary(r in 1u64..=8, g in 0u64..=20) {
        match min_positive_n(r, g) {
            Some(n) => {
                prop_assert!(r >= 3);
                prop_assert!(curve_budget(r, g, n).unwrap().a > 0);
                if n > 0 {
                    if let Ok(b) = curve_budget(r, g, n - 1) {
                        prop_assert!(b.a <= 0);
                    }
                }
            }
            None => {
                prop_assert!(r <= 2);
                for n in 0..=60 {
                    if let Ok(b) = curve_budget(r, g, n) {
                        prop_assert!(b.a <= 0);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fixed_point_certificate(m in matrix(2..=5), k in 2i64..=10) {
        let eps = BigRational::new(1.into(), k.into());
        let fp = fixed_point_weights(&m, &eps, 10_000).unwrap();
        let r = m.r();
        let a: Vec<BigRational> = fp.weights.values().iter().map(|v| BigRational::from_integer(v.clone())).collect();
        prop_assert!(a.iter().all(|v| *v >= BigRational::one()));
        let mut d2 = BigRational::zero();
        for i in 0..r {
            for j in 0..r {
                d2 += &a[i] * &a[j] * m.entry(i, j);
            }
        }
        let rr = BigRational::from_integer(BigInt::from(r));
        for i in 0..r {
            let dc: BigRational = (0..r).map(|j| &a[j] * m.entry(i, j)).sum();
            let v = &rr * &a[i] * dc;
            prop_assert!((BigRational::one() - &eps) * &d2 < v && v < (BigRational::one() + &eps) * &d2);
        }
    }

    #[test]
    fn filtration_basis_certificate(seed in any::<u64>(), d in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f1, f2) = (random_filtration(&mut rng, d), random_filtration(&mut rng, d));
        let basis = common_filtration_basis(&f1, &f2).unwrap();
        prop_assert_eq!(basis.len(), d);
        prop_assert!(filtration_certificate(&basis, &f1, &f2));
    }
}
