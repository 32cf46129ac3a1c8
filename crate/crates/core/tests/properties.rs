use knodel_core::odd::odd_from_even;
use knodel_core::series::{int, rat, Poly, PowerSeries, UPoly};
use knodel_core::walk::{double_step, evolve, single_step, DoubleDist, WalkParams};
use proptest::prelude::*;

const ORDER: usize = 8;

fn series() -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec((-9i64..10, 1i64..6), ORDER + 1)
        .prop_map(|v| PowerSeries::from_coeffs(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
}

fn unit_series() -> impl Strategy<Value = PowerSeries> {
    (series(), 1i64..5, prop::bool::ANY).prop_map(|(mut s, c, neg)| {
        s.set_coeff(0, int(if neg { -c } else { c }));
        s
    })
}

fn alpha() -> impl Strategy<Value = WalkParams> {
    (2i64..40)
        .prop_flat_map(|d| (1..d, Just(d)))
        .prop_map(|(n, d)| WalkParams::new(rat(n, d)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn division_inverts_multiplication(a in series(), b in unit_series()) {
        prop_assert_eq!((&a * &b).div(&b).unwrap(), a.clone());
        prop_assert_eq!(&b * &b.recip().unwrap(), PowerSeries::one(ORDER));
    }

    #[test]
    fn square_root_round_trip(a in unit_series()) {
        let sq = &a * &a;
        let root = sq.sqrt().unwrap();
        prop_assert_eq!(&root * &root, sq);
        prop_assert!(root.coeff(0) > &int(0));
    }

    #[test]
    fn reversion_round_trip(a in series(), lead in 1i64..5) {
        let mut f = a;
        f.set_coeff(0, int(0));
        f.set_coeff(1, int(lead));
        let g = f.revert().unwrap();
        prop_assert_eq!(f.compose(&g).unwrap(), PowerSeries::var(ORDER));
        prop_assert_eq!(g.compose(&f).unwrap(), PowerSeries::var(ORDER));
    }

    #[test]
    fn shift_round_trip(a in series(), k in 0usize..4) {
        prop_assert_eq!(a.shift_mul(k).shift_div(k).unwrap(), a.clone());
    }

    #[test]
    fn polynomial_evaluation_is_a_homomorphism(
        p in prop::collection::vec(-5i64..6, 1..5),
        q in prop::collection::vec(-5i64..6, 1..5),
        x in -4i64..5,
    ) {
        let p = Poly::new(p.into_iter().map(int).collect());
        let q = Poly::new(q.into_iter().map(int).collect());
        let x = int(x);
        prop_assert_eq!(p.mul(&q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!(p.add(&q).eval(&x), p.eval(&x) + q.eval(&x));
    }

    #[test]
    fn bivariate_evaluation_respects_products(a in series(), b in series(), c in series(), x in series()) {
        let mut x = x;
        x.set_coeff(0, int(0));
        let zero = PowerSeries::zero(ORDER);
        let p = UPoly::new(vec![a.clone(), b.clone(), zero.clone()]);
        let q = UPoly::new(vec![c.clone(), a.clone(), zero]);
        let prod = p.mul(&q);
        prop_assert_eq!(prod.eval(&x), &p.eval(&x) * &q.eval(&x));
    }

    #[test]
    fn chain_is_stochastic_and_parity_confined(p in alpha()) {
        for (k, d) in evolve(24, &p).iter().enumerate() {
            prop_assert!(d.is_valid());
            prop_assert_eq!(d.is_even_class(), k % 2 == 0);
        }
    }

    #[test]
    fn double_step_is_two_single_steps(p in alpha()) {
        let singles = evolve(24, &p);
        let mut d = DoubleDist::origin();
        for m in 0..=12 {
            prop_assert!(d.to_single().same_masses(&singles[2 * m]));
            d = double_step(&d, &p);
        }
    }

    #[test]
    fn odd_step_matches_single_step(p in alpha()) {
        for d in evolve(20, &p).iter().filter(|d| d.step() % 2 == 0) {
            prop_assert!(odd_from_even(d, &p).unwrap().same_masses(&single_step(d, &p)));
        }
    }
}
