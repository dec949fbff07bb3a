mod support;

use adams_chart::tau::{poly_gcd, TauPoly};
use proptest::prelude::*;
use support::algebra::*;

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn snf_is_a_divisibility_chain_reached_by_unimodular_transforms(m in matrix(5)) {
        check_snf(&m)?;
    }
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn torsion_homology_has_brute_force_dimension(c in complex(Mode::Torsion)) {
        check_torsion_brute_force(&c)?;
    }

    #[test]
    fn free_summands_match_tau_equals_one(c in complex(Mode::Mixed)) {
        check_tau_one(&c)?;
    }

    #[test]
    fn free_complexes_match_tau_equals_zero(c in complex(Mode::Free)) {
        check_tau_zero(&c)?;
    }

    #[test]
    fn homology_ignores_generator_order(c in complex(Mode::Mixed), seed in any::<u64>()) {
        check_permutation(&c, seed)?;
    }

    #[test]
    fn zero_maps_are_the_identity(
        middle in prop::collection::vec(order_strategy(Mode::Mixed), 0..=5),
        n_in in 0usize..3,
        n_out in 0usize..3,
    ) {
        check_zero_maps(&middle, n_in, n_out)?;
    }
}

#[test]
fn gcd_examples() {
    let p = |e: &[u32]| TauPoly::from_exponents(e);
    // τ² + τ = τ(τ + 1), and τ divides it.
    assert_eq!(poly_gcd(&p(&[2, 1]), &p(&[1])), p(&[1]));
    assert_eq!(poly_gcd(&p(&[2, 0]), &p(&[1, 0])), p(&[1, 0]));
    assert_eq!(poly_gcd(&TauPoly::zero(), &p(&[3])), p(&[3]));
}
