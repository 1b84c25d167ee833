use irrcert_core::poly::{factor, IntPolynomial, Monomial};
use irrcert_core::BigRat;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn poly_strategy(nvars: usize, max_deg: u32, max_coeff: i64, max_terms: usize) -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -max_coeff..=max_coeff), 1..=max_terms).prop_map(
        move |terms| {
            let terms = terms.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= max_deg);
            IntPolynomial::from_terms(nvars, terms.map(|(e, c)| (Monomial(e), BigInt::from(c))))
        },
    )
}

fn rat_strategy(bound: i64) -> impl Strategy<Value = BigRat> {
    (-bound * 16..=bound * 16, 1i64..=16).prop_map(|(n, d)| BigRat::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn colex_leading_is_stable_under_positive_scaling(p in poly_strategy(3, 4, 9, 6), k in 1i64..50) {
        prop_assume!(!p.is_zero());
        let (m, c) = p.colex_leading().unwrap();
        let (m2, c2) = p.scale(&BigInt::from(k)).colex_leading().unwrap();
        prop_assert_eq!(m, m2);
        prop_assert_eq!(c * k, c2);
    }

    #[test]
    fn homogenize_then_dehomogenize_is_identity(p in poly_strategy(2, 5, 9, 6)) {
        prop_assume!(!p.is_zero());
        let h = p.homogenize().unwrap();
        let d = h.degree();
        prop_assert!(h.poly().terms().keys().all(|m| m.degree() == d));
        prop_assert_eq!(h.dehomogenize(), p);
    }

    #[test]
    fn lipschitz_bound_holds(
        p in poly_strategy(2, 4, 9, 6),
        pts in prop::collection::vec(rat_strategy(3), 4),
        r in 1i64..4,
    ) {
        let radius = BigRat::from_integer(r.into());
        let clamp = |x: &BigRat| if x.abs() > radius { radius.clone() } else { x.clone() };
        let a: Vec<BigRat> = pts[..2].iter().map(clamp).collect();
        let b: Vec<BigRat> = pts[2..].iter().map(clamp).collect();
        let c = p.lipschitz_constant(&radius).unwrap();
        let diff = (p.evaluate(&a).unwrap() - p.evaluate(&b).unwrap()).abs();
        let dist = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).max().unwrap();
        prop_assert!(diff <= c * dist);
    }

    #[test]
    fn factorization_multiplies_back(
        f in poly_strategy(2, 2, 5, 4),
        g in poly_strategy(2, 2, 5, 4),
        h in poly_strategy(2, 1, 5, 3),
    ) {
        let p = f.mul(&g).mul(&h);
        prop_assume!(!p.is_zero());
        let fac = factor(&p).unwrap();
        prop_assert_eq!(fac.product(2), p);
        for (q, _) in &fac.factors {
            prop_assert!(!q.is_constant());
            prop_assert_eq!(q.content(), BigInt::from(1));
        }
    }

    #[test]
    fn factors_are_at_least_as_fine_as_the_input_split(
        f in poly_strategy(2, 2, 4, 4),
        g in poly_strategy(2, 2, 4, 4),
    ) {
        prop_assume!(!f.is_constant() && !g.is_constant());
        let fac = factor(&f.mul(&g)).unwrap();
        let n: u32 = fac.factors.iter().map(|(_, m)| *m).sum();
        prop_assert!(n >= 2);
    }
}
