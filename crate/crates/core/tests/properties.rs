mod common;

use discrim::channel::KrausChannel;
use discrim::classical::{
    adaptive_optimum, example1, nonadaptive_optimum, one_shot_optimum, Prob,
};
use discrim::io::{
    exact_stochastic_to_string, kraus_to_string, parse_channel_file, stochastic_to_string, ChannelData,
    StochasticData,
};
use discrim::matrix::{
    hermitian_eig, min_eigenvalue, partial_trace, singular_values, tensor, trace_norm, ComplexMatrix,
};
use discrim::quantum::{
    diamond_norm_distance, helstrom_success, nonadaptive_impossibility_certificate, CoefficientMatrix,
    DEFAULT_TOL,
};
use num_rational::BigRational;
use proptest::prelude::*;

fn separating_p() -> ComplexMatrix {
    let outcome = nonadaptive_impossibility_certificate(
        &discrim::channel::phi0(),
        &discrim::channel::phi1(),
        &CoefficientMatrix::separating_pair(),
    );
    outcome.certificate().expect("certified").p.clone()
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tensor_matches_index_formula(((r1, c1), (r2, c2)) in (dims(), dims()), seed in any::<u64>()) {
        let a = ComplexMatrix::from_fn(r1, c1, |i, j| discrim::matrix::c64((seed % 7) as f64 + i as f64, j as f64 - 1.0));
        let b = ComplexMatrix::from_fn(r2, c2, |i, j| discrim::matrix::c64(i as f64 * 0.5, (seed % 5) as f64 - j as f64));
        let t = tensor(&a, &b);
        prop_assert_eq!(t.shape(), (r1 * r2, c1 * c2));
        for i in 0..r1 * r2 {
            for j in 0..c1 * c2 {
                prop_assert_eq!(t[(i, j)], a[(i / r2, j / c2)] * b[(i % r2, j % c2)]);
            }
        }
    }

    #[test]
    fn tensor_is_associative(
        (a, b, c) in (dims(), dims(), dims()).prop_flat_map(|((r1, c1), (r2, c2), (r3, c3))| {
            (common::matrix(r1, c1), common::matrix(r2, c2), common::matrix(r3, c3))
        })
    ) {
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-15);
    }

    #[test]
    fn partial_trace_matches_index_sum(
        (m, d0, d1) in (1usize..=3, 1usize..=3).prop_flat_map(|(d0, d1)| {
            (common::matrix(d0 * d1, d0 * d1), Just(d0), Just(d1))
        })
    ) {
        let first = partial_trace(&m, &[d0, d1], &[0]).unwrap();
        let second = partial_trace(&m, &[d0, d1], &[1]).unwrap();
        for a in 0..d0 {
            for b in 0..d0 {
                let s: discrim::matrix::C64 = (0..d1).map(|k| m[(a * d1 + k, b * d1 + k)]).sum();
                prop_assert!((first[(a, b)] - s).norm() <= 1e-14);
            }
        }
        for a in 0..d1 {
            for b in 0..d1 {
                let s: discrim::matrix::C64 = (0..d0).map(|k| m[(k * d1 + a, k * d1 + b)]).sum();
                prop_assert!((second[(a, b)] - s).norm() <= 1e-14);
            }
        }
        let all = partial_trace(&m, &[d0, d1], &[]).unwrap();
        prop_assert_eq!(all.shape(), (1, 1));
        prop_assert!((all[(0, 0)] - m.trace()).norm() <= 1e-14);
    }

    #[test]
    fn trace_norm_bounds(m in (1usize..=6).prop_flat_map(common::hermitian)) {
        let t = trace_norm(&m).unwrap();
        let s: f64 = singular_values(&m).iter().sum();
        prop_assert!(t + 1e-12 >= m.trace().norm());
        prop_assert!((t - s).abs() <= 1e-10 * (1.0 + t));
    }

    #[test]
    fn min_eigenvalue_survives_identity_factor(m in (1usize..=5).prop_flat_map(common::hermitian), k in 1usize..=3) {
        let a = min_eigenvalue(&m).unwrap();
        let b = min_eigenvalue(&tensor(&m, &ComplexMatrix::identity(k))).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn kraus_files_round_trip(c in common::channel_with_dims(3, 3, 3)) {
        let text = kraus_to_string("random", &c);
        let parsed = parse_channel_file(&text).unwrap();
        prop_assert_eq!(parsed.name, "random");
        match parsed.channel {
            ChannelData::Kraus(back) => prop_assert_eq!(back, c),
            other => prop_assert!(false, "parsed as {}", other_kind(&other)),
        }
    }

    #[test]
    fn stochastic_files_round_trip((m, _) in common::stochastic_pair(1..=4, 1..=4)) {
        let text = stochastic_to_string("random", &m);
        match parse_channel_file(&text).unwrap().channel {
            ChannelData::Stochastic(StochasticData::Decimal(back)) => prop_assert_eq!(back, m),
            other => prop_assert!(false, "parsed as {}", other_kind(&other)),
        }
    }

    #[test]
    fn certificate_bounds_every_ancilla_input(psi in common::unit_vector(8), psi2 in common::unit_vector(32)) {
        // ⟨ψ|P^{⊗n} ⊗ 𝟙|ψ⟩ ≥ λⁿ for n = 1, 2 with a qubit ancilla
        let p = separating_p();
        let lambda = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
        let id = ComplexMatrix::identity(2);
        for (op, v, n) in [
            (tensor(&p, &id), &psi, 1),
            (tensor(&tensor(&p, &p), &id), &psi2, 2),
        ] {
            let a = v.amplitudes();
            let q = op.expectation(a, a).re;
            prop_assert!(q >= lambda.powi(n) - 1e-8, "n={}: {} < {}", n, q, lambda.powi(n));
        }
    }

    #[test]
    fn optimal_tree_attains_its_value((m0, m1) in common::stochastic_pair(2..=3, 1..=3), n in 1usize..=3) {
        let o = adaptive_optimum(&m0, &m1, n).unwrap();
        prop_assert!(o.tree.depth() <= n);
        let v = o.tree.success_probability(&m0, &m1).unwrap();
        prop_assert!((v - o.value).abs() <= 1e-12, "tree {} vs value {}", v, o.value);
    }

    #[test]
    fn one_parallel_use_is_one_shot((m0, m1) in common::stochastic_pair(2..=4, 1..=4)) {
        let one = one_shot_optimum(&m0, &m1).unwrap();
        let par = nonadaptive_optimum(&m0, &m1, 1).unwrap();
        let ada = adaptive_optimum(&m0, &m1, 1).unwrap();
        prop_assert_eq!(one.value, par.value);
        prop_assert_eq!(vec![one.input], par.inputs);
        prop_assert!((ada.value - one.value).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigendecomposition_reconstructs(m in prop_oneof![
        9 => (1usize..=16).prop_flat_map(common::hermitian),
        1 => (17usize..=64).prop_flat_map(common::hermitian),
    ]) {
        let eig = hermitian_eig(&m).unwrap();
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let err = eig.reconstruct().max_abs_diff(&m);
        prop_assert!(err < 1e-9, "reconstruction error {:e}", err);
        let v = &eig.eigenvectors;
        let gram = &v.adjoint() * v;
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(m.rows())) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constant_channels_are_as_far_apart_as_their_outputs(rho in common::density(2), sigma in common::density(2)) {
        let c0 = KrausChannel::constant(2, &rho).unwrap();
        let c1 = KrausChannel::constant(2, &sigma).unwrap();
        let r = diamond_norm_distance(&c0, &c1, DEFAULT_TOL).unwrap();
        let t = trace_norm(&(rho.matrix() - sigma.matrix())).unwrap();
        prop_assert!((r.value - t).abs() <= 1e-7, "{} vs {}", r.value, t);
        let h = helstrom_success(&rho, &sigma).unwrap();
        prop_assert!((r.success_probability() - h).abs() <= 1e-7);
    }

    #[test]
    fn noise_after_the_channel_never_helps(p in 0.0f64..=1.0) {
        let dep = KrausChannel::depolarizing(p).unwrap();
        let (a, b) = (discrim::channel::phi0(), discrim::channel::phi1());
        let clean = diamond_norm_distance(&a, &b, DEFAULT_TOL).unwrap().value;
        let noisy = diamond_norm_distance(&a.then(&dep).unwrap(), &b.then(&dep).unwrap(), DEFAULT_TOL).unwrap();
        prop_assert!(noisy.value <= clean + 1e-8);
        prop_assert!(noisy.gap <= DEFAULT_TOL);
    }
}

fn other_kind(c: &ChannelData) -> &'static str {
    match c {
        ChannelData::Kraus(_) => "kraus",
        ChannelData::Stochastic(StochasticData::Exact(_)) => "exact stochastic",
        ChannelData::Stochastic(StochasticData::Decimal(_)) => "decimal stochastic",
    }
}

#[test]
fn exact_example_files_round_trip() {
    let (m0, _) = example1();
    let text = exact_stochastic_to_string("m0", &m0);
    match parse_channel_file(&text).unwrap().channel {
        ChannelData::Stochastic(StochasticData::Exact(back)) => assert_eq!(back, m0),
        other => panic!("parsed as {}", other_kind(&other)),
    }
}

#[test]
fn first_example_exact_optima() {
    // frozen from an independent brute force over guess tables
    let (m0, m1) = example1();
    assert_eq!(one_shot_optimum(&m0, &m1).unwrap().value, BigRational::ratio(7, 9));
    assert_eq!(nonadaptive_optimum(&m0, &m1, 2).unwrap().value, BigRational::ratio(68, 81));
    assert_eq!(adaptive_optimum(&m0, &m1, 2).unwrap().value, BigRational::ratio(139, 162));
}
