//! Counter-based random streams and the uniform coupling of edge states.
//!
//! Every random quantity is a pure function of a key
//! `(seed, purpose, outer, inner)`: the first three words form a ChaCha8
//! key and `inner` selects the stream, so draw `k` of a stream is the
//! `k`-th block output regardless of which thread asks for it.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::percolation::lattice::{EdgeConfig, RectLattice};

/// Purpose tags keep independent uses of one seed apart.
pub mod purpose {
    pub const WEIGHTS: u64 = 0x5745_4947_4854_5300;
    pub const PSI: u64 = 0x5053_4900;
    pub const XI: u64 = 0x5849_0000;
    pub const NOISE: u64 = 0x4e4f_4953_4500;
    pub const BOOTSTRAP: u64 = 0x424f_4f54;
    pub const PROBE: u64 = 0x5052_4f42_4500;
}

pub fn stream(seed: u64, purpose: u64, outer: u64, inner: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&purpose.to_le_bytes());
    key[16..24].copy_from_slice(&outer.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(inner);
    rng
}

/// A uniform draw in the open interval `(0, 1)` with 53 bits of resolution.
#[inline]
pub fn open_uniform(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// One `P_p` configuration drawn from `rng`.
pub fn bernoulli_config(lat: RectLattice, p: f64, rng: &mut impl RngCore) -> EdgeConfig {
    EdgeConfig::from_fn(lat, |_| open_uniform(rng) <= p)
}

/// Coupling weights `U_e`: edge `e` is `p`-present when `U_e <= p`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedConfig {
    lattice: RectLattice,
    weights: Vec<f64>,
}

impl WeightedConfig {
    pub fn lattice(&self) -> &RectLattice {
        &self.lattice
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// The weights of trial `trial` under `seed`. Identical inputs give identical
/// weights on every platform.
pub fn sample_weights(lat: RectLattice, seed: u64, trial: u64) -> WeightedConfig {
    let mut rng = stream(seed, purpose::WEIGHTS, trial, 0);
    WeightedConfig {
        lattice: lat,
        weights: (0..lat.edge_count())
            .map(|_| open_uniform(&mut rng))
            .collect(),
    }
}

/// `η_p = {e : U_e <= p}`; nested in `p` by construction.
pub fn config_at(w: &WeightedConfig, p: f64) -> EdgeConfig {
    EdgeConfig::from_fn(w.lattice, |e| w.weights[e] <= p)
}
