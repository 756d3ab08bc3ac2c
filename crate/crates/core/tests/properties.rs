//! Property tests for the structural invariants: norm axioms and duality,
//! evaluation bounds, curry isometry, crossnorm ordering, the extension
//! chain, and serialization round-trips. Instances are generated from a
//! single seed so every failure replays deterministically.

use bilinext_core::{
    descriptor::BilinearDescriptor, extend_bilinear, gen, linearize, restrict_bilinear,
    NormedSpace, OptimizerConfig, PExp, TensorElement, Vector,
};
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;

const EXACT_P: [f64; 3] = [1.0, 2.0, f64::INFINITY];

fn lp(dim: usize, p: f64) -> NormedSpace {
    NormedSpace::lp(dim, PExp::new(p).unwrap()).unwrap()
}

fn any_p() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(1.0),
        Just(1.5),
        Just(2.0),
        Just(3.0),
        Just(f64::INFINITY),
    ]
}

fn exact_p() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), Just(f64::INFINITY)]
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    gen::trial_rng(seed, salt)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norms_are_homogeneous_and_subadditive(
        seed in any::<u64>(),
        p in any_p(),
        dim in 1usize..=5,
        lambda in -4.0f64..4.0,
    ) {
        let mut rng = rng_for(seed, 1);
        let space = lp(dim, p);
        let a = gen::standard_normal_vector(&mut rng, dim);
        let b = gen::standard_normal_vector(&mut rng, dim);
        let (na, nb) = (space.norm(&a).unwrap(), space.norm(&b).unwrap());
        let scaled = space.norm(&(&a * lambda)).unwrap();
        prop_assert!((scaled - lambda.abs() * na).abs() <= 1e-9 * (1.0 + na));
        let sum = space.norm(&(&a + &b)).unwrap();
        prop_assert!(sum <= na + nb + 1e-9 * (1.0 + na + nb));
        prop_assert!(na >= 0.0 && (na > 0.0 || a.amax() == 0.0));
    }

    #[test]
    fn pairing_respects_the_dual_norm(
        seed in any::<u64>(),
        p in any_p(),
        dim in 1usize..=5,
    ) {
        let mut rng = rng_for(seed, 2);
        let space = lp(dim, p);
        let x = gen::standard_normal_vector(&mut rng, dim);
        let f = gen::standard_normal_vector(&mut rng, dim);
        let pairing = f.dot(&x).abs();
        let bound = space.dual_norm(&f).unwrap() * space.norm(&x).unwrap();
        prop_assert!(pairing <= bound + 1e-9 * (1.0 + bound));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certified_bilinear_norms_bound_every_evaluation(
        seed in any::<u64>(),
        px in exact_p(),
        py in exact_p(),
        pz in exact_p(),
    ) {
        let mut rng = rng_for(seed, 3);
        let n = gen::pick_dim(&mut rng, 1, 3).unwrap();
        let m = gen::pick_dim(&mut rng, 1, 3).unwrap();
        let k = gen::pick_dim(&mut rng, 1, 3).unwrap();
        let phi = gen::random_bilinear(&mut rng, lp(n, px), lp(m, py), lp(k, pz)).unwrap();
        let report = phi.norm_report(&OptimizerConfig::default()).unwrap();
        if !report.exact {
            return Ok(());
        }
        for _ in 0..8 {
            let xv = gen::standard_normal_vector(&mut rng, n);
            let yv = gen::standard_normal_vector(&mut rng, m);
            let lhs = phi.z().norm(&phi.eval(&xv, &yv).unwrap()).unwrap();
            let rhs = report.value
                * phi.x().norm(&xv).unwrap()
                * phi.y().norm(&yv).unwrap();
            prop_assert!(lhs <= rhs + 1e-7 * (1.0 + rhs));
        }
    }

    #[test]
    fn currying_preserves_the_norm(
        seed in any::<u64>(),
        px in exact_p(),
        py in exact_p(),
    ) {
        let mut rng = rng_for(seed, 4);
        let n = gen::pick_dim(&mut rng, 1, 3).unwrap();
        let m = gen::pick_dim(&mut rng, 1, 3).unwrap();
        let k = gen::pick_dim(&mut rng, 1, 2).unwrap();
        let phi = gen::random_bilinear(&mut rng, lp(n, px), lp(m, py), lp(k, 2.0)).unwrap();
        let cfg = OptimizerConfig::default();
        let direct = phi.norm(&cfg).unwrap();
        let curried = phi.curry().operator_norm(&cfg).unwrap();
        prop_assert!(
            (direct - curried).abs() <= 1e-6 * direct.max(1.0),
            "direct {direct} vs curried {curried}"
        );
    }

    #[test]
    fn injective_stays_below_projective_and_single_tensors_collapse(
        seed in any::<u64>(),
        px in exact_p(),
        py in exact_p(),
        terms in 1usize..=3,
    ) {
        let mut rng = rng_for(seed, 5);
        let n = gen::pick_dim(&mut rng, 1, 3).unwrap();
        let m = gen::pick_dim(&mut rng, 1, 3).unwrap();
        let x = lp(n, px);
        let y = lp(m, py);
        let t = gen::random_tensor(&mut rng, x.clone(), y.clone(), terms).unwrap();
        let cfg = OptimizerConfig::default();
        let report = t.projective_norm(&cfg).unwrap();
        prop_assert!(report.injective <= report.projective_upper + 1e-6);
        prop_assert!(report.projective_dual_lower <= report.projective_upper + 1e-9);

        let xv = gen::standard_normal_vector(&mut rng, n);
        let yv = gen::standard_normal_vector(&mut rng, m);
        let single = TensorElement::single(x.clone(), y.clone(), xv.clone(), yv.clone()).unwrap();
        let product = x.norm(&xv).unwrap() * y.norm(&yv).unwrap();
        let s = single.projective_norm(&cfg).unwrap();
        prop_assert!((s.injective - product).abs() <= 1e-6 * (1.0 + product));
        prop_assert!((s.projective_upper - product).abs() <= 1e-6 * (1.0 + product));
    }

    #[test]
    fn linearized_map_agrees_with_the_bilinear_map_pointwise(
        seed in any::<u64>(),
        px in any_p(),
        py in any_p(),
    ) {
        let mut rng = rng_for(seed, 6);
        let n = gen::pick_dim(&mut rng, 1, 4).unwrap();
        let m = gen::pick_dim(&mut rng, 1, 4).unwrap();
        let k = gen::pick_dim(&mut rng, 1, 3).unwrap();
        let phi = gen::random_bilinear(&mut rng, lp(n, px), lp(m, py), lp(k, 2.0)).unwrap();
        let lifted = linearize(&phi);
        let xv = gen::standard_normal_vector(&mut rng, n);
        let yv = gen::standard_normal_vector(&mut rng, m);
        let t = TensorElement::single(phi.x().clone(), phi.y().clone(), xv.clone(), yv.clone())
            .unwrap();
        let via_tensor = lifted.apply_to(&t).unwrap();
        let direct = phi.eval(&xv, &yv).unwrap();
        prop_assert!((&via_tensor - &direct).amax() <= 1e-10 * (1.0 + direct.amax()));
    }

    #[test]
    fn serialized_bilinear_maps_round_trip(
        seed in any::<u64>(),
        px in any_p(),
        py in any_p(),
    ) {
        let mut rng = rng_for(seed, 7);
        let n = gen::pick_dim(&mut rng, 1, 4).unwrap();
        let m = gen::pick_dim(&mut rng, 1, 4).unwrap();
        let phi = gen::random_bilinear(&mut rng, lp(n, px), lp(m, py), lp(2, 1.0)).unwrap();
        let json = serde_json::to_string(&BilinearDescriptor::from_bilinear(&phi).unwrap()).unwrap();
        let back: BilinearDescriptor = serde_json::from_str(&json).unwrap();
        let rebuilt = back.to_bilinear().unwrap();
        prop_assert_eq!(rebuilt.x().p(), phi.x().p());
        prop_assert_eq!(rebuilt.y().p(), phi.y().p());
        for (a, b) in rebuilt.coeffs().iter().zip(phi.coeffs().iter()) {
            prop_assert!((a - b).amax() == 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn extensions_satisfy_the_norm_chain(
        seed in any::<u64>(),
        p_ix in 0usize..3,
    ) {
        let mut rng = rng_for(seed, 8);
        let p = EXACT_P[p_ix];
        let nx = gen::pick_dim(&mut rng, 2, 4).unwrap();
        let ny = gen::pick_dim(&mut rng, 2, 4).unwrap();
        let x = lp(nx, p);
        let y = lp(ny, p);
        let m = gen::random_subspace(&mut rng, &x, None).unwrap();
        let n = gen::random_subspace(&mut rng, &y, None).unwrap();
        let e = gen::random_projection(&mut rng, &m).unwrap();
        let pr = gen::random_projection(&mut rng, &n).unwrap();
        let phi = gen::random_bilinear(
            &mut rng,
            m.coordinate_space(),
            n.coordinate_space(),
            lp(2, 2.0),
        )
        .unwrap();
        let cfg = OptimizerConfig::default();
        let out = extend_bilinear(&phi, &m, &n, &e, &pr, &cfg).unwrap();

        prop_assert!(out.restriction_residual <= 1e-10);
        prop_assert!(out.e_norm >= 1.0 - 1e-9);
        prop_assert!(out.p_norm >= 1.0 - 1e-9);
        prop_assert!(
            out.phi_hat_norm >= out.phi_norm - 1e-6,
            "extension lost norm: {} vs {}",
            out.phi_hat_norm,
            out.phi_norm
        );
        prop_assert!(
            out.phi_hat_norm <= out.phi_norm * out.e_norm * out.p_norm + 1e-6,
            "chain violated: {} vs {} * {} * {}",
            out.phi_hat_norm,
            out.phi_norm,
            out.e_norm,
            out.p_norm
        );

        // The extension restricts back to φ in coordinates, at random points
        // and not just on the basis grid.
        let restricted = restrict_bilinear(&out.phi_hat, &m, &n).unwrap();
        let cu = gen::standard_normal_vector(&mut rng, m.dim());
        let cv = gen::standard_normal_vector(&mut rng, n.dim());
        let lhs = restricted.eval(&cu, &cv).unwrap();
        let rhs = phi.eval(&cu, &cv).unwrap();
        prop_assert!((&lhs - &rhs).amax() <= 1e-9 * (1.0 + rhs.amax()));
    }

    #[test]
    fn embedded_projective_norms_never_grow(
        seed in any::<u64>(),
        p_ix in 0usize..3,
    ) {
        let mut rng = rng_for(seed, 9);
        let p = EXACT_P[p_ix];
        let x = lp(gen::pick_dim(&mut rng, 2, 4).unwrap(), p);
        let y = lp(gen::pick_dim(&mut rng, 2, 4).unwrap(), p);
        let m = gen::random_subspace(&mut rng, &x, None).unwrap();
        let n = gen::random_subspace(&mut rng, &y, None).unwrap();
        let terms: Vec<(Vector, Vector)> = (0..2)
            .map(|_| {
                let cu = gen::standard_normal_vector(&mut rng, m.dim());
                let cv = gen::standard_normal_vector(&mut rng, n.dim());
                (m.embed(&cu).unwrap(), n.embed(&cv).unwrap())
            })
            .collect();
        let t = TensorElement::new(x, y, terms).unwrap();
        let pair = t
            .embedded_projective_norms(&m, &n, &OptimizerConfig::default())
            .unwrap();
        prop_assert!(pair.ambient <= pair.subspace + 1e-6);
    }
}
