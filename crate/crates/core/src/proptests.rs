//! Randomized checks of the algebraic invariants.

use proptest::prelude::*;

use crate::aut;
use crate::{seeded_rng, Field, LeftIdeal, Matrix, RelationGraph};

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::prime(2).unwrap()),
        Just(Field::prime(5).unwrap()),
        Just(Field::new(2, 2, None).unwrap()),
        Just(Field::new(2, 3, None).unwrap()),
        Just(Field::new(3, 2, None).unwrap()),
    ]
}

fn matrix(n: usize, f: &Field, codes: &[u32]) -> Matrix {
    let codes: Vec<u32> = codes.iter().take(n * n).map(|c| c % f.q()).collect();
    Matrix::from_codes(n, f, &codes).unwrap()
}

proptest! {
    #[test]
    fn frobenius_is_a_field_automorphism(f in field_strategy(), a in 0u32..64, b in 0u32..64, t in 0u32..3) {
        let t = t % f.m();
        let (a, b) = (f.element(a % f.q()).unwrap(), f.element(b % f.q()).unwrap());
        let fr = |x| f.frobenius(x, t).unwrap();
        prop_assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
        prop_assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
    }

    #[test]
    fn encoding_roundtrips(f in field_strategy(), codes in prop::collection::vec(0u32..64, 9)) {
        let x = matrix(3, &f, &codes);
        let v = x.encode(&f).unwrap();
        prop_assert_eq!(Matrix::decode(v, 3, &f).unwrap(), x);
    }

    #[test]
    fn ideal_is_invariant_under_left_multiplication_by_units(
        f in field_strategy(),
        codes in prop::collection::vec(0u32..64, 9),
        seed in any::<u64>(),
    ) {
        let x = matrix(3, &f, &codes);
        let w = crate::matrix::random_invertible(3, &f, &mut seeded_rng(seed));
        prop_assert_eq!(LeftIdeal::of(&w.mul(&x, &f).unwrap(), &f), LeftIdeal::of(&x, &f));
    }

    #[test]
    fn containment_matches_product_factorization(
        f in field_strategy(),
        a in prop::collection::vec(0u32..64, 4),
        b in prop::collection::vec(0u32..64, 4),
    ) {
        // [WX] is always inside [X]
        let (w, x) = (matrix(2, &f, &a), matrix(2, &f, &b));
        let wx = w.mul(&x, &f).unwrap();
        prop_assert!(LeftIdeal::of(&wx, &f).is_subset(&LeftIdeal::of(&x, &f), &f).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sampled_automorphisms_preserve_rank_and_decompose(seed in any::<u64>()) {
        let f = Field::prime(2).unwrap();
        let g = RelationGraph::full(3, &f, true, 1000).unwrap();
        let s = aut::random_standard(&g, &mut seeded_rng(seed)).unwrap();
        prop_assert!(s.composite.verify(&g).unwrap().is_automorphism());
        prop_assert!(s.composite.preserves_rank());
        let d = aut::decompose(&s.composite, &g).unwrap();
        prop_assert_eq!(d.recompose().unwrap(), s.composite);
    }
}
