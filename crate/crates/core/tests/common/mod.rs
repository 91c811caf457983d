//! Slow, literal reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use noise_lab::cube::BoolFn;
use noise_lab::percolation::{EdgeConfig, RectLattice};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn weight(omega: usize, n: usize, p: f64) -> f64 {
    (0..n)
        .map(|i| if omega >> i & 1 == 1 { p } else { 1.0 - p })
        .product()
}

pub fn chi(omega: usize, set: usize, p: f64) -> f64 {
    let hi = -((1.0 - p) / p).sqrt();
    let lo = (p / (1.0 - p)).sqrt();
    (0..64)
        .filter(|i| set >> i & 1 == 1)
        .map(|i| if omega >> i & 1 == 1 { hi } else { lo })
        .product()
}

/// `f̂(S) = Σ_ω P_p(ω) f(ω) χ_S(ω)`, one set at a time.
pub fn direct_transform(values: &[f64], n: usize, p: f64) -> Vec<f64> {
    let size = 1usize << n;
    (0..size)
        .map(|s| {
            (0..size)
                .map(|w| weight(w, n, p) * values[w] * chi(w, s, p))
                .sum()
        })
        .collect()
}

pub fn direct_mean(values: &[f64], n: usize, p: f64) -> f64 {
    (0..values.len()).map(|w| weight(w, n, p) * values[w]).sum()
}

pub fn direct_variance(values: &[f64], n: usize, p: f64) -> f64 {
    let m = direct_mean(values, n, p);
    (0..values.len())
        .map(|w| weight(w, n, p) * (values[w] - m).powi(2))
        .sum()
}

/// `h(ψ) = Σ_ξ P_{p/r}(ξ) f(ψ ∧ ξ)`.
pub fn direct_h(values: &[f64], n: usize, p: f64, r: f64) -> Vec<f64> {
    let q = p / r;
    let size = 1usize << n;
    (0..size)
        .map(|psi| {
            (0..size)
                .map(|xi| weight(xi, n, q) * values[psi & xi])
                .sum()
        })
        .collect()
}

/// `E[f(ω) f(ω^ε)] - E[f]²` by summing over every pair.
pub fn direct_noise(values: &[f64], n: usize, p: f64, eps: f64) -> f64 {
    let size = 1usize << n;
    let mut total = 0.0;
    for a in 0..size {
        let wa = weight(a, n, p);
        for b in 0..size {
            let mut t = 1.0;
            for i in 0..n {
                let (x, y) = (a >> i & 1, b >> i & 1);
                let resampled = eps * if y == 1 { p } else { 1.0 - p };
                t *= if x == y {
                    1.0 - eps + resampled
                } else {
                    resampled
                };
            }
            total += wa * t * values[a] * values[b];
        }
    }
    total - direct_mean(values, n, p).powi(2)
}

pub fn random_function(rng: &mut ChaCha8Rng, n: usize, boolean: bool) -> BoolFn {
    let values = (0..1usize << n)
        .map(|_| {
            if boolean {
                rng.random_bool(0.5) as u8 as f64
            } else {
                rng.random_range(-1.0..1.0)
            }
        })
        .collect();
    BoolFn::from_table(n, values).unwrap()
}

/// Deterministic corpus: mixes boolean and real-valued tables, `1 <= n <= max_n`.
pub fn corpus(count: usize, max_n: usize, seed: u64) -> Vec<BoolFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let n = rng.random_range(1..=max_n);
            random_function(&mut rng, n, k % 2 == 0)
        })
        .collect()
}

pub fn arb_table(max_n: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1..=max_n).prop_flat_map(|n| {
        let size = 1usize << n;
        prop_oneof![
            prop::collection::vec(prop::bool::ANY.prop_map(|b| b as u8 as f64), size),
            prop::collection::vec(-1.0f64..1.0, size),
        ]
        .prop_map(move |v| (n, v))
    })
}

pub fn arb_boolean(max_n: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop::bool::ANY.prop_map(|b| b as u8 as f64), 1usize << n)
            .prop_map(move |v| (n, v))
    })
}

/// Breadth-first search from the left column over present edges.
pub fn bfs_crossing(c: &EdgeConfig) -> bool {
    let lat = *c.lattice();
    let mut adj = vec![Vec::new(); lat.vertex_count()];
    for e in c.present_edges() {
        let (a, b) = lat.endpoints(e);
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; lat.vertex_count()];
    let mut queue: VecDeque<usize> = (0..=lat.height()).map(|y| lat.vertex(0, y)).collect();
    for &v in &queue {
        seen[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        if lat.coords(v).0 == lat.width() {
            return true;
        }
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    false
}

/// Pivotal edges by flipping each edge and re-running the BFS.
pub fn bfs_pivotals(c: &EdgeConfig) -> BTreeSet<usize> {
    let here = bfs_crossing(c);
    (0..c.lattice().edge_count())
        .filter(|&e| {
            let mut d = c.clone();
            d.flip(e);
            bfs_crossing(&d) != here
        })
        .collect()
}

#[derive(Debug, PartialEq)]
pub struct LiteralTrace {
    pub crossing: bool,
    pub queried: BTreeSet<usize>,
    pub rounds: usize,
}

/// The exploration rounds spelled out with sets: every round queries all
/// edges with exactly one endpoint in the current vertex set, including
/// edges already queried in earlier rounds.
pub fn literal_exploration(c: &EdgeConfig, from_left: bool, early_exit: bool) -> LiteralTrace {
    let lat = *c.lattice();
    let (start, goal) = if from_left {
        (0, lat.width())
    } else {
        (lat.width(), 0)
    };
    let mut v: BTreeSet<usize> = (0..=lat.height()).map(|y| lat.vertex(start, y)).collect();
    let mut queried = BTreeSet::new();
    let mut rounds = 0;
    let reached = |v: &BTreeSet<usize>| v.iter().any(|&x| lat.coords(x).0 == goal);
    loop {
        if early_exit && reached(&v) && rounds > 0 {
            break;
        }
        rounds += 1;
        let mut next = v.clone();
        for e in 0..lat.edge_count() {
            let (a, b) = lat.endpoints(e);
            if v.contains(&a) != v.contains(&b) {
                queried.insert(e);
                if c.is_present(e) {
                    next.insert(a);
                    next.insert(b);
                }
            }
        }
        if next == v {
            break;
        }
        v = next;
    }
    LiteralTrace {
        crossing: reached(&v),
        queried,
        rounds,
    }
}

pub fn all_configs(lat: RectLattice) -> impl Iterator<Item = EdgeConfig> {
    (0..1u64 << lat.edge_count()).map(move |m| EdgeConfig::from_mask(lat, m))
}
