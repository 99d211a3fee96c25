use porder::{parse_poly, Ideal, Monomial, Poly, PolyRing, Ring, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;

fn ring() -> Ring {
    PolyRing::rational(&["x", "y", "z"])
}

/// Terms as (exponents, numerator, denominator).
fn poly_strategy(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Vec<([u32; 3], i64, i64)>> {
    prop::collection::vec(
        ((0..=max_deg, 0..=max_deg, 0..=max_deg).prop_map(|(a, b, c)| [a, b, c]), -9i64..=9, 1i64..=4),
        0..=max_terms,
    )
}

fn build(r: &Ring, terms: &[([u32; 3], i64, i64)]) -> Poly {
    Poly::from_terms(r, terms.iter().map(|(e, p, q)| (Monomial(e.to_vec()), Scalar::frac(*p, *q))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in poly_strategy(3, 4), b in poly_strategy(3, 4), c in poly_strategy(3, 4)) {
        let r = ring();
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(&r), a.clone());
    }

    #[test]
    fn parse_print_roundtrip(a in poly_strategy(4, 6)) {
        let r = ring();
        let p = build(&r, &a);
        let back = parse_poly(&p.to_string(), &r).unwrap();
        prop_assert_eq!(back, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn groebner_presentation_invariance(seed in any::<u64>()) {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 1 + (seed % 3) as usize;
        let gens: Vec<Poly> = (0..n).map(|_| common::random_poly(&mut rng, &r, 2, 3)).collect();
        let a = Ideal::new(&r, gens.clone()).unwrap();
        let b = Ideal::new(&r, common::recombine(&mut rng, &gens)).unwrap();
        prop_assert_eq!(a.canonical_strings().unwrap(), b.canonical_strings().unwrap());
        for g in &gens {
            prop_assert!(b.contains(g).unwrap());
        }
    }
}
