mod common;

use common::*;
use noise_lab::cube::{crossing_function, product_measure};
use noise_lab::percolation::rng::{bernoulli_config, stream};
use noise_lab::percolation::*;
use proptest::prelude::*;

#[test]
fn two_by_two_exhaustive() {
    let lat = RectLattice::square(2).unwrap();
    let mut crossings = 0;
    for c in all_configs(lat) {
        let h = has_horizontal_crossing(&c);
        assert_eq!(h, bfs_crossing(&c));
        assert_ne!(h, has_dual_vertical_crossing(&c));
        assert_ne!(has_vertical_crossing(&c), has_dual_horizontal_crossing(&c));
        crossings += h as usize;

        let piv: Vec<usize> = pivotal_edges(&c).ones().collect();
        assert_eq!(piv, pivotal_edges_baseline(&c).ones().collect::<Vec<_>>());
        assert_eq!(piv, bfs_pivotals(&c).into_iter().collect::<Vec<_>>());

        for (side, left) in [(Side::Left, true), (Side::Right, false)] {
            for (stop, early) in [(StopRule::Fixpoint, false), (StopRule::OppositeSide, true)] {
                let t = explore_config(&c, side, stop);
                let lit = literal_exploration(&c, left, early);
                assert_eq!(t.crossing, h);
                assert_eq!(t.crossing, lit.crossing);
                assert_eq!(
                    t.queried.ones().collect::<Vec<_>>(),
                    lit.queried.iter().copied().collect::<Vec<_>>()
                );
                assert_eq!(t.rounds, lit.rounds);
            }
        }
    }
    assert_eq!(crossings, 2752);
}

#[test]
fn one_by_one_hand_cases() {
    let lat = RectLattice::square(1).unwrap();
    let bottom = lat.horizontal_edge(0, 0);
    let top = lat.horizontal_edge(0, 1);
    let only = |edges: &[usize]| EdgeConfig::from_fn(lat, |e| edges.contains(&e));
    assert!(has_horizontal_crossing(&only(&[bottom])));
    let piv = |c: &EdgeConfig| pivotal_edges(c).ones().collect::<Vec<_>>();
    assert_eq!(piv(&only(&[top])), vec![top]);
    assert!(piv(&only(&[top, bottom])).is_empty());
    assert_eq!(piv(&only(&[])), vec![bottom, top]);

    let f = crossing_function(&lat).unwrap();
    assert_eq!(f.values().iter().filter(|&&x| x == 1.0).count(), 12);
}

#[test]
fn early_exit_queries_a_subset() {
    let lat = RectLattice::new(9, 7).unwrap();
    for t in 0..500 {
        let c = bernoulli_config(lat, 0.5, &mut stream(17, 1, t, 0));
        let full = explore_config(&c, Side::Left, StopRule::Fixpoint);
        let early = explore_config(&c, Side::Left, StopRule::OppositeSide);
        assert_eq!(full.crossing, early.crossing);
        assert!(early.queried.is_subset(&full.queried));
        let lit = literal_exploration(&c, true, false);
        assert_eq!(
            full.queried.ones().collect::<Vec<_>>(),
            lit.queried.into_iter().collect::<Vec<_>>()
        );
    }
}

#[test]
fn exploration_sound_on_random_larger_configs() {
    let lats = [
        RectLattice::new(8, 8).unwrap(),
        RectLattice::new(12, 7).unwrap(),
        RectLattice::new(5, 13).unwrap(),
    ];
    for t in 0..10_000u64 {
        let lat = lats[(t % 3) as usize];
        let p = 0.3 + 0.4 * (t % 7) as f64 / 6.0;
        let c = bernoulli_config(lat, p, &mut stream(23, 2, t, 0));
        let h = has_horizontal_crossing(&c);
        for side in [Side::Left, Side::Right] {
            for stop in [StopRule::Fixpoint, StopRule::OppositeSide] {
                assert_eq!(explore_config(&c, side, stop).crossing, h);
            }
        }
    }
}

#[test]
fn pivotal_fast_route_on_eight_by_eight() {
    let lat = RectLattice::square(8).unwrap();
    for t in 0..1000 {
        let c = bernoulli_config(lat, 0.5, &mut stream(5, 3, t, 0));
        assert_eq!(pivotal_edges(&c), pivotal_edges_baseline(&c));
        if t < 50 {
            let expected: Vec<usize> = bfs_pivotals(&c).into_iter().collect();
            assert_eq!(pivotal_edges(&c).ones().collect::<Vec<_>>(), expected);
        }
    }
}

#[test]
fn dichotomy_on_sampled_rectangles() {
    for (t, (w, h)) in [(6, 2), (3, 9), (10, 10), (15, 5)].into_iter().enumerate() {
        let lat = RectLattice::new(w, h).unwrap();
        for k in 0..300 {
            let c = bernoulli_config(lat, 0.5, &mut stream(8, t as u64, k, 0));
            assert_ne!(has_horizontal_crossing(&c), has_dual_vertical_crossing(&c));
            assert_ne!(has_vertical_crossing(&c), has_dual_horizontal_crossing(&c));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coupling_is_nested(seed in any::<u64>(), trial in any::<u64>(), p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        let lat = RectLattice::new(7, 5).unwrap();
        let w = sample_weights(lat, seed, trial);
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        prop_assert!(config_at(&w, lo).is_subset(&config_at(&w, hi)));
    }

    #[test]
    fn adding_edges_keeps_crossings(seed in any::<u64>(), extra in any::<u64>()) {
        let lat = RectLattice::new(6, 6).unwrap();
        let c = bernoulli_config(lat, 0.5, &mut stream(seed, 0, 0, 0));
        let more = EdgeConfig::from_fn(lat, |e| c.is_present(e) || (extra >> (e % 64)) & 1 == 1 && e % 3 == 0);
        prop_assert!(c.is_subset(&more));
        prop_assert!(!has_horizontal_crossing(&c) || has_horizontal_crossing(&more));
    }

    #[test]
    fn mirrored_exploration(seed in any::<u64>()) {
        // Exploring from the right equals exploring the mirror image from the left.
        let lat = RectLattice::new(7, 4).unwrap();
        let c = bernoulli_config(lat, 0.5, &mut stream(seed, 0, 1, 0));
        let mirrored = EdgeConfig::from_fn(lat, |e| c.is_present(lat.mirror_edge(e)));
        let right = explore_config(&c, Side::Right, StopRule::Fixpoint);
        let left = explore_config(&mirrored, Side::Left, StopRule::Fixpoint);
        let mapped: Vec<usize> = {
            let mut v: Vec<usize> = left.queried.ones().map(|e| lat.mirror_edge(e)).collect();
            v.sort();
            v
        };
        prop_assert_eq!(right.queried.ones().collect::<Vec<_>>(), mapped);
        prop_assert_eq!(right.crossing, left.crossing);
    }
}

/// `P(edge queried from the left)` on `Λ_{1,1}`, summed over all `ψ` and `ξ`.
fn exact_query_probabilities(lat: RectLattice, r: f64, inner: f64) -> Vec<f64> {
    let n = lat.edge_count();
    let wp = product_measure(n, r);
    let wx = product_measure(n, inner);
    let mut out = vec![0.0; n];
    for psi in 0..1u64 << n {
        for xi in 0..1u64 << n {
            let c = EdgeConfig::from_mask(lat, psi & xi);
            for e in explore_config(&c, Side::Left, StopRule::Fixpoint)
                .queried
                .ones()
            {
                out[e] += wp[psi as usize] * wx[xi as usize];
            }
        }
    }
    out
}

#[test]
fn one_by_one_revealment_against_enumeration() {
    let lat = RectLattice::square(1).unwrap();
    let r = 0.8;
    let trials = 100_000;
    let rep = estimate_revealment(lat, r, trials, 1, 31).unwrap();
    let exact = exact_query_probabilities(lat, r, 1.0 / (2.0 * r));
    for (e, (&mc, &want)) in rep.per_edge_from_left.iter().zip(&exact).enumerate() {
        let se = (want * (1.0 - want) / trials as f64).sqrt();
        assert!((mc - want).abs() <= 3.0 * se, "edge {e}: {mc} vs {want}");
    }
}

#[test]
fn probe_mode_revealment_is_psi_connectivity() {
    // With ξ all present the query set is a function of ψ alone, so the
    // K_R revealment per ψ is 0 or 1 and its mean is computable exactly.
    let lat = RectLattice::new(2, 1).unwrap();
    let r = 0.7;
    let n = lat.edge_count();
    let wp = product_measure(n, r);
    let k_right = lat.right_half();
    let mut exact = 0.0;
    for psi in 0..1u64 << n {
        let c = EdgeConfig::from_mask(lat, psi);
        let q = explore_config(&c, Side::Left, StopRule::Fixpoint).queried;
        if k_right.iter().any(|&e| q.contains(e)) {
            exact += wp[psi as usize];
        }
    }
    let rep = revealment_with_inner_bias(lat, r, 1.0, 40_000, 3, 12).unwrap();
    assert!(rep
        .delta_right_samples
        .iter()
        .all(|&d| d == 0.0 || d == 1.0));
    let est = rep.delta_right.estimate();
    assert!(est.within(exact, 3.0), "{est:?} vs {exact}");
}

#[test]
fn weights_differ_between_trials() {
    let lat = RectLattice::square(30).unwrap();
    assert!(lat.edge_count() >= 1000);
    let a = sample_weights(lat, 4, 10);
    let b = sample_weights(lat, 4, 11);
    let same = a
        .weights()
        .iter()
        .zip(b.weights())
        .filter(|(x, y)| x == y)
        .count();
    assert!(same * 100 <= lat.edge_count());
    assert_eq!(a, sample_weights(lat, 4, 10));
    assert_eq!(config_at(&a, 0.0).count_present(), 0);
    assert_eq!(config_at(&a, 1.0).count_present(), lat.edge_count());
}
