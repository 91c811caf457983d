//! Fourier-Walsh analysis under the biased product measure `P_p`.

use crate::cube::bias::{product_measure, Bias};
use crate::cube::boolfn::BoolFn;
use crate::error::{Error, Result};

/// Largest bit count for the pairwise noise-correlation sum, which costs `4^n`.
pub const DIRECT_NOISE_MAX_BITS: usize = 12;

/// `χ_S^p(ω)`: the product over `i ∈ S` of the one-bit characters.
pub fn biased_char(omega: u64, set: u64, p: Bias) -> f64 {
    let ones = (omega & set).count_ones() as i32;
    let zeros = set.count_ones() as i32 - ones;
    if p.is_half() {
        return if ones % 2 == 0 { 1.0 } else { -1.0 };
    }
    p.char_at_one().powi(ones) * p.char_at_zero().powi(zeros)
}

/// Fourier coefficients `f̂^p(S)` indexed by subset mask.
#[derive(Debug, Clone)]
pub struct Spectrum {
    n: usize,
    bias: Bias,
    coeffs: Vec<f64>,
}

impl Spectrum {
    pub fn new(n: usize, bias: Bias, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::Table(format!(
                "spectrum on {n} bits needs {} coefficients, got {}",
                1usize << n,
                coeffs.len()
            )));
        }
        Ok(Spectrum { n, bias, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bias(&self) -> Bias {
        self.bias
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, set: u64) -> f64 {
        self.coeffs[set as usize]
    }

    /// `f̂(∅) = E_p[f]`.
    pub fn mean(&self) -> f64 {
        self.coeffs[0]
    }

    /// `Σ_{S≠∅} f̂(S)²`.
    pub fn variance(&self) -> f64 {
        self.coeffs[1..].iter().map(|c| c * c).sum()
    }

    /// Entry `k` is `Σ_{|S|=k} f̂(S)²`.
    pub fn level_weights(&self) -> Vec<f64> {
        let mut levels = vec![0.0; self.n + 1];
        for (s, c) in self.coeffs.iter().enumerate() {
            levels[s.count_ones() as usize] += c * c;
        }
        levels
    }
}

/// Biased Walsh transform by an `n`-stage butterfly, `O(n 2^n)`.
///
/// Each stage replaces the pair `(a, b) = (f|ω_i=0, f|ω_i=1)` by
/// `((1-p) a + p b, sqrt(p(1-p)) (a - b))`.
pub fn fourier_transform(f: &BoolFn, p: Bias) -> Spectrum {
    let mut c = f.values().to_vec();
    let q = p.get();
    let s = (q * (1.0 - q)).sqrt();
    butterfly(&mut c, |a, b| {
        if p.is_half() {
            (0.5 * (a + b), 0.5 * (a - b))
        } else {
            ((1.0 - q) * a + q * b, s * (a - b))
        }
    });
    Spectrum {
        n: f.n(),
        bias: p,
        coeffs: c,
    }
}

/// `f(ω) = Σ_S f̂(S) χ_S(ω)`, again as a butterfly.
pub fn inverse_transform(s: &Spectrum) -> BoolFn {
    let mut v = s.coeffs.clone();
    let (z, o) = (s.bias.char_at_zero(), s.bias.char_at_one());
    let half = s.bias.is_half();
    butterfly(&mut v, |a, b| {
        if half {
            (a + b, a - b)
        } else {
            (a + b * z, a + b * o)
        }
    });
    BoolFn::from_table(s.n, v).expect("inverse of a finite spectrum")
}

fn butterfly(data: &mut [f64], op: impl Fn(f64, f64) -> (f64, f64)) {
    let len = data.len();
    let mut h = 1;
    while h < len {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = op(*a, *b);
                *a = x;
                *b = y;
            }
        }
        h <<= 1;
    }
}

/// `Var_p(f)` computed directly, by two passes over the table.
pub fn variance(f: &BoolFn, p: Bias) -> f64 {
    let w = product_measure(f.n(), p.get());
    let mean: f64 = w.iter().zip(f.values()).map(|(w, v)| w * v).sum();
    w.iter()
        .zip(f.values())
        .map(|(w, v)| w * (v - mean) * (v - mean))
        .sum()
}

fn check_noise(eps: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::InvalidNoise(eps))
    }
}

/// `E_p[f(ω) f(ω^ε)] - E_p[f]²` from the spectrum:
/// `Σ_{S≠∅} f̂(S)² (1-ε)^{|S|}`.
pub fn noise_correlation(f: &BoolFn, p: Bias, eps: f64) -> Result<f64> {
    check_noise(eps)?;
    Ok(noise_correlation_of(&fourier_transform(f, p), eps))
}

pub(crate) fn noise_correlation_of(spectrum: &Spectrum, eps: f64) -> f64 {
    let keep: Vec<f64> = (0..=spectrum.n as i32)
        .map(|k| (1.0 - eps).powi(k))
        .collect();
    spectrum.coeffs[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c * c * keep[(i + 1).count_ones() as usize])
        .sum()
}

/// The same covariance as [`noise_correlation`], by exact summation over
/// all pairs `(ω, ω^ε)` with the per-bit resampling kernel. Costs `4^n`.
pub fn noise_correlation_direct(f: &BoolFn, p: Bias, eps: f64) -> Result<f64> {
    check_noise(eps)?;
    let n = f.n();
    if n > DIRECT_NOISE_MAX_BITS {
        return Err(Error::TooManyBits {
            bits: n,
            cap: DIRECT_NOISE_MAX_BITS,
        });
    }
    let q = p.get();
    // Joint weight of one coordinate taking (ω_i, ω^ε_i).
    let w11 = q * (1.0 - eps + eps * q);
    let w10 = q * eps * (1.0 - q);
    let w01 = (1.0 - q) * eps * q;
    let w00 = (1.0 - q) * (1.0 - eps + eps * (1.0 - q));
    let pows = |w: f64| -> Vec<f64> { (0..=n as i32).map(|k| w.powi(k)).collect() };
    let (p11, p10, p01, p00) = (pows(w11), pows(w10), pows(w01), pows(w00));

    let full = (1u64 << n) - 1;
    let vals = f.values();
    let mut joint = 0.0;
    for (a, &fa) in vals.iter().enumerate() {
        if fa == 0.0 {
            continue;
        }
        let a = a as u64;
        let mut row = 0.0;
        for (b, &fb) in vals.iter().enumerate() {
            let b = b as u64;
            let c11 = (a & b).count_ones() as usize;
            let c10 = (a & !b).count_ones() as usize;
            let c01 = (!a & b & full).count_ones() as usize;
            let c00 = n - c11 - c10 - c01;
            row += fb * p11[c11] * p10[c10] * p01[c01] * p00[c00];
        }
        joint += fa * row;
    }
    Ok(joint - f.mean(p).powi(2))
}

/// Level weights of `f` under `P_p`.
pub fn level_weights(s: &Spectrum) -> Vec<f64> {
    s.level_weights()
}
