//! Pivotal sets and the spectral sample.
//!
//! For a boolean-valued `f` the marginals of the pivotal set at `p = 1/2`
//! coincide with those of the spectral sample, provided the spectral sample
//! is taken of the `±1` encoding `2f - 1`. Taken of the `{0,1}`-valued `f`
//! itself, `Σ_{S∋i} f̂(S)²` is exactly a quarter of `P(i ∈ 𝒫_f)`, so the
//! normalization by `E[f²]` only agrees when `P(f = 1) = 1/4`.

use crate::cube::bias::{product_measure, Bias};
use crate::cube::boolfn::BoolFn;
use crate::cube::fourier::fourier_transform;
use crate::error::{Error, Result};

/// Bits `i` such that flipping `ω_i` changes `f(ω)`.
pub fn pivotal_set(f: &BoolFn, omega: u64) -> Result<u64> {
    if !f.is_boolean() {
        return Err(Error::NotBoolean);
    }
    Ok(pivotal_unchecked(f, omega))
}

fn pivotal_unchecked(f: &BoolFn, omega: u64) -> u64 {
    let here = f.value(omega);
    (0..f.n())
        .filter(|&i| f.value(omega ^ (1 << i)) != here)
        .fold(0, |acc, i| acc | 1 << i)
}

/// `E_p |𝒫_f|`.
pub fn expected_pivotal_count(f: &BoolFn, p: Bias) -> Result<f64> {
    Ok(pivotal_marginals(f, p)?.iter().sum())
}

/// `P_p(i ∈ 𝒫_f)` for every coordinate.
pub fn pivotal_marginals(f: &BoolFn, p: Bias) -> Result<Vec<f64>> {
    if !f.is_boolean() {
        return Err(Error::NotBoolean);
    }
    let w = product_measure(f.n(), p.get());
    let mut marg = vec![0.0; f.n()];
    for (omega, weight) in w.iter().enumerate() {
        let piv = pivotal_unchecked(f, omega as u64);
        for (i, m) in marg.iter_mut().enumerate() {
            if piv >> i & 1 == 1 {
                *m += weight;
            }
        }
    }
    Ok(marg)
}

/// Law of the spectral sample: `P(𝒮 = S) = f̂^{1/2}(S)² / E_{1/2}[f²]`.
#[derive(Debug, Clone)]
pub struct SpectralSampleDist {
    n: usize,
    weights: Vec<f64>,
}

impl SpectralSampleDist {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mass(&self, set: u64) -> f64 {
        self.weights[set as usize]
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `E|𝒮|`.
    pub fn mean_size(&self) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(s, w)| w * s.count_ones() as f64)
            .sum()
    }

    /// `P(i ∈ 𝒮)` for every coordinate.
    pub fn marginals(&self) -> Vec<f64> {
        let mut marg = vec![0.0; self.n];
        for (s, w) in self.weights.iter().enumerate() {
            for (i, m) in marg.iter_mut().enumerate() {
                if s >> i & 1 == 1 {
                    *m += w;
                }
            }
        }
        marg
    }

    /// Probability that `|𝒮| = k`, for `k = 0..=n`.
    pub fn size_distribution(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n + 1];
        for (s, w) in self.weights.iter().enumerate() {
            out[s.count_ones() as usize] += w;
        }
        out
    }
}

/// Spectral sample of `f` at `p = 1/2`, normalized by `E_{1/2}[f²]`.
pub fn spectral_sample(f: &BoolFn) -> Result<SpectralSampleDist> {
    let second = f.values().iter().map(|v| v * v).sum::<f64>() / f.values().len() as f64;
    if second == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let s = fourier_transform(f, Bias::HALF);
    Ok(SpectralSampleDist {
        n: f.n(),
        weights: s.coeffs().iter().map(|c| c * c / second).collect(),
    })
}

/// Spectral sample of the `±1` encoding of a boolean-valued `f`. Its
/// marginals equal `P_{1/2}(i ∈ 𝒫_f)` and its mean size equals
/// `E_{1/2}|𝒫_f|`.
pub fn spectral_sample_signed(f: &BoolFn) -> Result<SpectralSampleDist> {
    spectral_sample(&f.sign_encoding()?)
}
