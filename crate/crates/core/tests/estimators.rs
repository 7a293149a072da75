mod common;

use common::{random_graph, random_recursive_tree};
use indseq::constants::{nat_ratio, planted_expected_unconnected, ratio_to_f64};
use indseq::count::independence_sequence;
use indseq::estimators::{
    change_of_measure_check, counting_lemma_check, enumerate_family, enumerated_ratio, planted_concentration_experiment,
    ratio_estimate, sequence_estimate, DEFAULT_T_GRID,
};
use indseq::generators::{sample_planted, ModelSpec};
use indseq::{Graph, Seed, VertexSet};
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn enumerated_ratio_is_exactly_the_coefficient_ratio() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..60 {
        let n = 3 + trial % 10;
        let g = if trial % 2 == 0 { random_graph(n, 0.3, &mut rng) } else { random_recursive_tree(n, &mut rng) };
        let s = independence_sequence(&g).unwrap();
        for k in 0..=s.alpha() {
            let want = nat_ratio(&s.get(k + 1)) / nat_ratio(&s.get(k));
            assert_eq!(enumerated_ratio(&g, k).unwrap(), want);
        }
        assert!(enumerated_ratio(&g, s.alpha() + 1).is_err());
    }
}

#[test]
fn counting_identity_on_every_graph_up_to_five_vertices() {
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for bits in 0u32..1 << pairs.len() {
            let edges = pairs.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &e)| e);
            let g = Graph::from_edges(n, edges).unwrap();
            assert!(counting_lemma_check(&g).unwrap().holds);
        }
    }
}

#[test]
fn counting_identity_by_both_methods_on_forests() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let small = random_recursive_tree(18, &mut rng);
        let r = counting_lemma_check(&small).unwrap();
        assert!(r.holds);
        assert_eq!(r.method, "enumeration");
        let big = random_recursive_tree(120, &mut rng);
        let r = counting_lemma_check(&big).unwrap();
        assert!(r.holds);
        assert_eq!(r.method, "vertex-deletion");
    }
    assert!(counting_lemma_check(&random_graph(30, 0.2, &mut rng)).is_err());
}

/// `E[N_σ | σ independent]` for `σ = {0, ..., k-1}`, by enumeration.
fn enumerated_planted_mean(model: &ModelSpec, k: usize) -> BigRational {
    let n = model.n();
    let sigma = VertexSet::new(n, (0..k).collect()).unwrap();
    let mut mass = BigRational::zero();
    let mut weighted = BigRational::zero();
    for (g, w) in enumerate_family(model).unwrap() {
        if g.is_independent(&sigma) {
            mass += &w;
            weighted += w * BigRational::from_integer(g.unconnected_count(&sigma).unwrap().into());
        }
    }
    weighted / mass
}

#[test]
fn planted_means_match_enumeration() {
    let models = [
        ModelSpec::gnp_p(5, 0.3),
        ModelSpec::gnp_p(4, 0.5),
        ModelSpec::tree(4),
        ModelSpec::tree(5),
        ModelSpec::tree(6),
    ];
    for model in models {
        let top = match model {
            ModelSpec::Tree { n } => n - 1,
            _ => model.n(),
        };
        for k in 1..=top {
            let want = enumerated_planted_mean(&model, k);
            let got = planted_expected_unconnected(&model, k).unwrap();
            assert_eq!(got.exact.unwrap(), want, "{model:?} k={k}");
        }
    }
}

#[test]
fn planted_gnp_mean_is_within_three_standard_errors() {
    // Repeated independent experiments; allow the rare 3σ excursion.
    let model = ModelSpec::gnp_p(60, 0.05);
    let k = 10;
    let mean = planted_expected_unconnected(&model, k).unwrap().value;
    let mut inside = 0;
    for rep in 0..100u64 {
        let values: Vec<f64> = (0..300u64)
            .map(|i| {
                let s = sample_planted(&model, k, Seed::new(1000 + rep, i)).unwrap();
                s.graph.unconnected_count(&s.sigma).unwrap() as f64
            })
            .collect();
        let (m, se) = indseq::estimators::mean_and_std_error(&values);
        inside += ((m - mean).abs() < 3.0 * se) as usize;
    }
    assert!(inside >= 99, "{inside}/100 within 3σ");
}

#[test]
fn change_of_measure_identities() {
    for (model, k) in [
        (ModelSpec::gnp_p(3, 0.5), 1),
        (ModelSpec::gnp_p(3, 0.5), 2),
        (ModelSpec::gnp_p(4, 0.25), 2),
        (ModelSpec::tree(4), 2),
        (ModelSpec::tree(5), 2),
        (ModelSpec::tree(5), 3),
        (ModelSpec::regular(6, 2), 2),
    ] {
        let r = change_of_measure_check(&model, k, 100, Seed::new(3, 0)).unwrap();
        assert!(r.planted_identity_holds && r.uniform_identity_holds, "{model:?} k={k}");
        assert_eq!(r.planted_mass_total, "1");
        // The uniform law lives on graphs with X_k > 0.
        let reachable: BigRational = enumerate_family(&model)
            .unwrap()
            .into_iter()
            .filter(|(g, _)| independence_sequence(g).unwrap().alpha() >= k)
            .map(|(_, w)| w)
            .sum();
        assert_eq!(r.uniform_mass_total, reachable.to_string());
        assert_eq!(r.inequality_violations, 0);
        assert!(r.empty_event_holds);
    }
    assert!(change_of_measure_check(&ModelSpec::gnp_p(9, 0.5), 2, 1, Seed::new(0, 0)).is_err());
}

#[test]
fn ratio_estimates_are_reproducible_and_accurate() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = random_graph(16, 0.2, &mut rng);
    let s = independence_sequence(&g).unwrap();
    for k in 0..s.alpha() {
        let a = ratio_estimate(&g, k, 4000, Seed::new(9, 0)).unwrap();
        let b = ratio_estimate(&g, k, 4000, Seed::new(9, 0)).unwrap();
        assert_eq!(a, b);
        let exact = ratio_to_f64(&(nat_ratio(&s.get(k + 1)) / nat_ratio(&s.get(k))));
        assert!((a.estimate - exact).abs() <= 4.0 * a.std_error.max(1e-12), "k={k}");
    }
    assert!(ratio_estimate(&g, s.alpha() + 1, 10, Seed::new(0, 0)).is_err());
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let g = Graph::cycle(14);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sequence_estimate(&g, 5, 2000, Seed::new(77, 0)).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn telescoped_sequence_tracks_exact_counts() {
    let g = Graph::path(12);
    let s = independence_sequence(&g).unwrap();
    let est = sequence_estimate(&g, s.alpha(), 20_000, Seed::new(5, 0)).unwrap();
    for k in 0..=s.alpha() {
        let exact = ratio_to_f64(&nat_ratio(&s.get(k)));
        assert!((est.estimates[k] - exact).abs() <= 4.0 * est.std_errors[k] + 1e-9, "k={k}");
    }
}

#[test]
fn concentration_reports_are_reproducible_without_violations() {
    for model in [ModelSpec::gnp_d(300, 2.0), ModelSpec::tree(300), ModelSpec::regular(300, 3)] {
        let a = planted_concentration_experiment(&model, 30, 200, Seed::new(8, 0), &DEFAULT_T_GRID).unwrap();
        let b = planted_concentration_experiment(&model, 30, 200, Seed::new(8, 0), &DEFAULT_T_GRID).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.violations, 0, "{model:?}");
        assert!(!a.rows.is_empty());
    }
}
