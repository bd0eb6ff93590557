mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use sigma_dyn::config::Config;
use sigma_dyn::field::DifferenceField;
use sigma_dyn::geometry::{AffineVariety, SigmaVariety};
use sigma_dyn::invariants::find_polynomial_invariants;
use sigma_dyn::poly::Vars;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sigma_is_a_field_automorphism(seed in any::<u64>()) {
        let r = check_sigma_hom(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reduced_bases_are_canonical(seed in any::<u64>()) {
        let r = check_canonical_forms(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn generic_congruence_matches_closed_forms(seed in any::<u64>()) {
        let r = check_e_congruence(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn invariants_match_the_dense_oracle(seed in any::<u64>(), n in 1usize..=2, kind in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let names: Vec<&str> = ["x", "y"][..n].to_vec();
        let v = Vars::new(&names);
        let f = DifferenceField::rationals();
        let cfg = Config::default();
        let phi = random_structured_map(&mut rng, n, kind);
        let comps = phi.iter().map(|d| rf(&dense_text(d, &names), &v, &f)).collect();
        // non-dominant maps are rejected at construction; nothing to compare
        let Ok(s) = SigmaVariety::new(&f, AffineVariety::affine_space(&v), comps, &cfg) else { return Ok(()) };
        let got = find_polynomial_invariants(&s, 2, &cfg).unwrap();
        prop_assert!(got.complete);
        prop_assert_eq!(library_vectors(&got.basis, n, 2), oracle_invariants(&phi, 2));
    }
}

#[test]
fn graphs_of_equivariant_maps_are_invariant() {
    check_graph_invariance().unwrap();
}
