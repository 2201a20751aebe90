use pinchwarp_core::algebra::{
    bracket_level_check, kfold_bracket_witness, random_nilpotent, unitriangular_commutator_check,
};
use pinchwarp_core::certify::{sectional_range, SectionalOptions, SANDWICH_SLACK};
use pinchwarp_core::curvature::full_curvature;
use pinchwarp_core::warp::{profile_check, uniform_grid};
use pinchwarp_core::{graded_frame, validate, FramedMetric, WarpProfile};
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

fn random_frame(seed: u64, dim: usize, max_level: usize) -> pinchwarp_core::GradedFrame {
    let spec = random_nilpotent(&mut ChaCha8Rng::seed_from_u64(seed), dim, max_level);
    graded_frame(&validate(&spec).expect("generator emits valid algebras")).expect("nilpotent")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_algebras_are_graded(seed in any::<u64>(), dim in 1usize..=8, max_level in 1usize..=4) {
        let frame = random_frame(seed, dim, max_level);
        let k = frame.degree();
        prop_assert_eq!(frame.level_dims().iter().sum::<usize>(), dim);
        prop_assert!(frame.level_dims().iter().all(|&d| d > 0));
        // The adapted basis is orthonormal for the base inner product.
        let b = &frame.basis;
        let gram = b.transpose() * &frame.inner0 * b;
        for i in 0..dim {
            for j in 0..dim {
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((gram[(i, j)] - expected).abs() < 1e-9);
            }
        }
        let report = bracket_level_check(&frame).unwrap();
        prop_assert!(report.all_standard);
        prop_assert_eq!(report.entries.len(), k * k);
        let witness = kfold_bracket_witness(&frame).unwrap();
        prop_assert_eq!(witness.indices.len(), k);
        prop_assert!(witness.norm > 1e-9);
        let dims = frame.series.dims();
        prop_assert!(dims.windows(2).all(|w| w[1] < w[0]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_symmetries_on_random_algebras(
        seed in any::<u64>(),
        dim in 2usize..=5,
        eps in 0.1f64..1.0,
        r in -8.0f64..8.0,
        log_s in 0.0f64..8.0,
    ) {
        let frame = random_frame(seed, dim, 3);
        let profile = WarpProfile::build(frame.degree(), eps).unwrap();
        let m = FramedMetric::new(frame, profile, log_s.exp2()).unwrap();
        let t = full_curvature(&m, r);
        let scale = 1.0 + t.max_abs();
        prop_assert!(t.symmetry_residuals().max() < 1e-10 * scale);
    }

    #[test]
    fn envelope_sandwiches_sampled_range(seed in any::<u64>(), dim in 2usize..=4, r in -3.0f64..3.0) {
        let frame = random_frame(seed, dim, 2);
        let profile = WarpProfile::build(frame.degree(), 0.5).unwrap();
        let m = FramedMetric::new(frame, profile, 3.0).unwrap();
        let opts = SectionalOptions { restarts: 6, ..Default::default() };
        let range = sectional_range(&full_curvature(&m, r), &opts, seed).unwrap();
        prop_assert!(range.lambda_min <= range.sec_min + SANDWICH_SLACK);
        prop_assert!(range.sec_min <= range.sec_max);
        prop_assert!(range.sec_max <= range.lambda_max + SANDWICH_SLACK);
    }

    #[test]
    fn profiles_satisfy_their_conditions(k in 1usize..=6, eps in 0.05f64..1.5) {
        let profile = WarpProfile::build(k, eps).unwrap();
        let grid = uniform_grid(-profile.rho - 3.0, profile.rho + 3.0, 0.05);
        let report = profile_check(&profile, &grid).unwrap();
        prop_assert!(report.max_abs_d2u <= report.d2u_bound);
        prop_assert!(report.max_summation_ratio <= 1.0 + 1e-12);
    }

    #[test]
    fn commutator_identity_exact(size in 3usize..=7, seed in any::<u64>()) {
        let w = unitriangular_commutator_check(size, 40, seed);
        prop_assert!(w.identity_holds);
        prop_assert!(w.witness_nontrivial);
        prop_assert!(w.higher_commutators_trivial);
    }
}
