//! Cross-module invariants: ordering of the analytic quantities, collapse
//! and scaling laws, equivalence of the two exact solvers, determinism of
//! the Monte Carlo harness, and randomized structural properties.

use approx::assert_relative_eq;
use floodtime::{
    assemble_system, crossover_n, ctmc_exact_flooding, exact_flooding_time, informed_closure,
    lower_bound_flooding_time, monte_carlo, simulate_generative, sparse_flooding_time,
    stationary_probability, upper_bound_flooding_time, ModelParams, OnDurationLaw, SimulatorKind,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(n: usize, lambda: f64, p: f64) -> ModelParams {
    ModelParams::from_edge_probability(n, lambda, p).unwrap()
}

#[test]
fn quantities_are_ordered_across_the_grid() {
    let ps = [0.0, 0.01, 0.05, 0.1, 0.3, 0.5, 0.9, 1.0];
    for n in 2..=100usize {
        for &p in &ps {
            let pr = params(n, 1.0, p);
            let (f, _, _) = exact_flooding_time(&pr);
            let lower = lower_bound_flooding_time(&pr);
            let (upper, _) = upper_bound_flooding_time(&pr);
            let f0 = sparse_flooding_time(&pr);
            if p == 0.0 {
                // all three recursions coincide with F₀ up to rounding
                assert_relative_eq!(f, f0, max_relative = 1e-12);
                assert_relative_eq!(lower, f0, max_relative = 1e-12);
                assert!(f <= upper);
            } else {
                assert!(lower <= f, "lower > exact at ({n}, {p})");
                assert!(f <= upper, "exact > upper at ({n}, {p})");
                assert!(f <= f0, "exact > sparse at ({n}, {p})");
            }
        }
    }
}

#[test]
fn exact_time_decreases_in_p() {
    let n = 30;
    let mut previous = f64::INFINITY;
    for step in 0..=49 {
        let p = step as f64 * 0.02;
        let (f, _, _) = exact_flooding_time(&params(n, 1.0, p));
        assert!(
            f < previous,
            "F not strictly decreasing at p = {p}: {f} vs {previous}"
        );
        previous = f;
    }
}

#[test]
fn all_quantities_scale_inversely_with_lambda() {
    for c in [0.5, 2.0, 10.0] {
        for &(n, p) in &[(5usize, 0.12), (20, 0.5), (40, 0.9)] {
            let base = params(n, 1.0, p);
            let scaled = params(n, c, p);
            let (f1, _, _) = exact_flooding_time(&base);
            let (fc, _, _) = exact_flooding_time(&scaled);
            assert_relative_eq!(fc, f1 / c, max_relative = 1e-12);
            assert_relative_eq!(
                lower_bound_flooding_time(&scaled),
                lower_bound_flooding_time(&base) / c,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                upper_bound_flooding_time(&scaled).0,
                upper_bound_flooding_time(&base).0 / c,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                sparse_flooding_time(&scaled),
                sparse_flooding_time(&base) / c,
                max_relative = 1e-12
            );
        }
    }
}

#[test]
fn finite_difference_slopes_match_expansions() {
    // d F/dp at 0 is −H_{N−1}/λ; the lower bound's slope is −(N−1)/λ
    let h = 1e-6;
    for n in [3usize, 10, 50] {
        for lambda in [1.0, 2.0] {
            let at_zero = params(n, lambda, 0.0);
            let at_h = params(n, lambda, h);
            let (f0, _, _) = exact_flooding_time(&at_zero);
            let (fh, _, _) = exact_flooding_time(&at_h);
            let slope = (fh - f0) / h;
            let expected = -(1..n).map(|k| 1.0 / k as f64).sum::<f64>() / lambda;
            assert!(
                (slope / expected - 1.0).abs() < 1e-3,
                "exact slope {slope} vs {expected} at N={n}, λ={lambda}"
            );
            let lower_slope =
                (lower_bound_flooding_time(&at_h) - lower_bound_flooding_time(&at_zero)) / h;
            let lower_expected = -((n - 1) as f64) / lambda;
            assert!(
                (lower_slope / lower_expected - 1.0).abs() < 1e-3,
                "lower slope {lower_slope} vs {lower_expected} at N={n}, λ={lambda}"
            );
        }
    }
}

#[test]
fn crossover_is_consistent_with_the_upper_table() {
    // spot-check that the reported threshold really separates the regimes
    for (p, n_max) in [(0.35, 120usize), (0.2, 150)] {
        if let Some(n_hat) = crossover_n(1.0, p, n_max).unwrap() {
            let (_, table) = upper_bound_flooding_time(&params(n_max, 1.0, p));
            for k in n_hat + 1..=n_max {
                let f0 = sparse_flooding_time(&params(k, 1.0, 0.0));
                assert!(table.upper_for(k).unwrap() < f0, "violation past N̂ at {k}");
            }
        }
    }
}

#[test]
fn physical_monte_carlo_agrees_with_chain_solver() {
    // N=3, λ=μ=1: ground-truth chain value vs the event-driven simulator
    let ctmc = ctmc_exact_flooding(3, 1.0, 1.0).unwrap();
    let pr = params(3, 1.0, stationary_probability(1.0, 1.0).unwrap());
    let law = OnDurationLaw::exponential(1.0).unwrap();
    let estimate = monte_carlo(SimulatorKind::Physical, &pr, law, 40_000, 2024).unwrap();
    assert!(
        (estimate.mean - ctmc).abs() <= 3.0 * estimate.stderr,
        "mean {} vs chain {} (stderr {})",
        estimate.mean,
        ctmc,
        estimate.stderr
    );
}

#[test]
fn physical_simulator_absorbs_at_moderate_size() {
    let pr = params(20, 1.0, 0.3);
    let law = OnDurationLaw::exponential(pr.mean_contact_duration()).unwrap();
    let estimate = monte_carlo(SimulatorKind::Physical, &pr, law, 2_000, 5).unwrap();
    assert!(estimate.mean.is_finite() && estimate.mean > 0.0);
}

#[test]
fn monte_carlo_is_identical_across_thread_counts() {
    let pr = params(8, 1.0, 0.12);
    let law = OnDurationLaw::exponential(pr.mean_contact_duration()).unwrap();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
    for kind in [SimulatorKind::Generative, SimulatorKind::Physical] {
        let serial = single
            .install(|| monte_carlo(kind, &pr, law, 4_000, 31).unwrap());
        let parallel = many
            .install(|| monte_carlo(kind, &pr, law, 4_000, 31).unwrap());
        assert_eq!(serial.mean.to_bits(), parallel.mean.to_bits(), "{kind}");
        assert_eq!(serial.stderr.to_bits(), parallel.stderr.to_bits(), "{kind}");
    }
}

#[test]
fn on_law_shape_probe_is_recorded() {
    // Whether the physical flooding time depends on the ON-duration shape
    // (beyond its mean) is deliberately left open; record both estimates
    // side by side without asserting a relationship.
    let pr = params(5, 1.0, 0.3);
    let mean = pr.mean_contact_duration();
    let exp = monte_carlo(
        SimulatorKind::Physical,
        &pr,
        OnDurationLaw::exponential(mean).unwrap(),
        30_000,
        77,
    )
    .unwrap();
    let det = monte_carlo(
        SimulatorKind::Physical,
        &pr,
        OnDurationLaw::deterministic(mean).unwrap(),
        30_000,
        77,
    )
    .unwrap();
    let contrast = (exp.mean - det.mean) / exp.stderr.hypot(det.stderr);
    println!(
        "shape probe at (N=5, λ=1, p=0.3): exponential mean {} (stderr {}), \
         deterministic mean {} (stderr {}), contrast {contrast:.2}σ",
        exp.mean, exp.stderr, det.mean, det.stderr
    );
    assert!(exp.mean > 0.0 && det.mean > 0.0);
}

proptest! {
    #[test]
    fn stationary_probability_is_a_probability_and_monotone(
        lambda in 1e-3..1e3f64,
        mu_inv in 0.0..1e3f64,
    ) {
        let p = stationary_probability(lambda, mu_inv).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        let p_more = stationary_probability(lambda, mu_inv + 1.0).unwrap();
        prop_assert!(p_more >= p, "p must grow with the contact mean");
        let p_faster = stationary_probability(lambda * 2.0, mu_inv).unwrap();
        prop_assert!(p_faster >= p, "p must grow with the meeting rate");
    }

    #[test]
    fn triangular_system_matches_dynamic_program(
        n in 3usize..40,
        p in 0.0..=1.0f64,
    ) {
        let pr = params(n, 1.0, p);
        let sys = assemble_system(&pr).unwrap();
        let solved = sys.forward_substitution();
        let (f, _, _) = exact_flooding_time(&pr);
        let root = solved[sys.dimension - 1];
        if f == 0.0 {
            prop_assert!(root.abs() <= 1e-12);
        } else {
            prop_assert!((root - f).abs() / f <= 1e-9, "root {root} vs {f}");
        }
    }

    #[test]
    fn generative_samples_are_nonnegative_and_finite(
        n in 1usize..12,
        p in 0.0..=1.0f64,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sample = simulate_generative(&params(n, 1.0, p), &mut rng);
        prop_assert!(sample.is_finite() && sample >= 0.0);
        if p == 1.0 || n == 1 {
            prop_assert_eq!(sample, 0.0);
        }
    }

    #[test]
    fn closure_is_idempotent_and_contains_its_input(
        n in 2usize..12,
        edge_bits in any::<u64>(),
        start in 0usize..12,
    ) {
        let pairs = floodtime::edge_pairs(n);
        let on: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(k, _)| (edge_bits >> (k % 64)) & 1 == 1)
            .map(|(_, &pair)| pair)
            .collect();
        let mut informed = vec![false; n];
        informed[start % n] = true;
        let once = informed_closure(n, &on, &informed);
        let twice = informed_closure(n, &on, &once);
        prop_assert_eq!(&once, &twice);
        for v in 0..n {
            prop_assert!(!informed[v] || once[v], "closure dropped node {v}");
        }
    }
}
