//! The two-scale operator `h_f(ψ) = E_{p/r}[f(ψ·ξ) | ψ]`.
//!
//! Observing the `r`-present set `ψ` and then thinning it by an independent
//! `ξ ~ P_{p/r}` reproduces a `P_p` configuration. Under this coupling every
//! Fourier level `k` of `f` is damped by `ρ^{k/2}`, where
//! `ρ = (p/r)(1-r)/(1-p)`, which pins `Var_r(h_f)` between `ρ^n Var_p(f)` and
//! `ρ Var_p(f)`.

use crate::cube::{fourier_transform, noise_correlation, variance, Bias, BoolFn, Spectrum};
use crate::error::{Error, Result};
use crate::tol;

/// An inner bias `p` and an outer bias `r` with `0 < p < r <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoScalePair {
    p: Bias,
    r: f64,
}

impl TwoScalePair {
    pub fn new(p: f64, r: f64) -> Result<Self> {
        let inner = Bias::new(p)?;
        if !(r.is_finite() && r > p && r <= 1.0) {
            return Err(Error::ScaleOrder { p, r });
        }
        Ok(TwoScalePair { p: inner, r })
    }

    /// The pair whose two-scale variance equals the noise correlation at `eps`:
    /// `r = p / (1 - ε(1 - p))`.
    pub fn from_noise(p: Bias, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "noise level must lie in (0, 1), got {eps}"
            )));
        }
        Self::new(p.get(), p.get() / (1.0 - eps * (1.0 - p.get())))
    }

    pub fn p(&self) -> Bias {
        self.p
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// The thinning bias `p/r`.
    pub fn ratio(&self) -> f64 {
        self.p.get() / self.r
    }

    /// `ρ = (p/r)(1-r)/(1-p)`; zero when `r = 1`.
    pub fn rho(&self) -> f64 {
        self.ratio() * (1.0 - self.r) / (1.0 - self.p.get())
    }

    /// Inverse of [`TwoScalePair::from_noise`]: `ε = (1 - p/r) / (1 - p)`.
    pub fn noise_level(&self) -> f64 {
        (1.0 - self.ratio()) / (1.0 - self.p.get())
    }

    /// `r` as a bias; fails for the degenerate `r = 1`.
    pub fn outer_bias(&self) -> Result<Bias> {
        if self.r >= 1.0 {
            Err(Error::OuterBiasOne)
        } else {
            Bias::new(self.r)
        }
    }
}

/// Tabulate `h_f` over every `ψ`.
///
/// Coordinate by coordinate: where `ψ_i = 0` the bit of `ψ·ξ` is `0` whatever
/// `ξ_i` is, and where `ψ_i = 1` it is `1` with probability `p/r`.
pub fn h_transform(f: &BoolFn, ts: TwoScalePair) -> BoolFn {
    let q = ts.ratio();
    let mut v = f.values().to_vec();
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter().zip(hi.iter_mut()) {
                *b = (1.0 - q) * a + q * *b;
            }
        }
        h <<= 1;
    }
    BoolFn::from_table(f.n(), v).expect("mixture of finite values")
}

/// `ρ^k` for `k = 0..=n`.
fn rho_powers(rho: f64, n: usize) -> Vec<f64> {
    (0..=n as i32).map(|k| rho.powi(k)).collect()
}

/// Both spectra of the coefficient scaling identity and their worst mismatch.
#[derive(Debug, Clone)]
pub struct SpectrumScaling {
    /// `ĥ_f^r`, from the transform of the tabulated `h_f`.
    pub h_spectrum: Spectrum,
    /// `f̂^p`.
    pub f_spectrum: Spectrum,
    /// `max_S |ĥ_f^r(S) - ρ^{|S|/2} f̂^p(S)|`.
    pub max_deviation: f64,
}

pub fn spectrum_scaling(f: &BoolFn, ts: TwoScalePair) -> Result<SpectrumScaling> {
    let r = ts.outer_bias()?;
    let h_spectrum = fourier_transform(&h_transform(f, ts), r);
    let f_spectrum = fourier_transform(f, ts.p());
    let half_powers: Vec<f64> = (0..=f.n()).map(|k| ts.rho().powf(k as f64 / 2.0)).collect();
    let max_deviation = h_spectrum
        .coeffs()
        .iter()
        .zip(f_spectrum.coeffs())
        .enumerate()
        .map(|(s, (h, c))| (h - half_powers[s.count_ones() as usize] * c).abs())
        .fold(0.0, f64::max);
    Ok(SpectrumScaling {
        h_spectrum,
        f_spectrum,
        max_deviation,
    })
}

/// `Var_r(h_f)` alongside its bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoScaleReport {
    pub rho: f64,
    pub var_p_f: f64,
    /// `Var_r(h_f)` computed from the tabulated `h_f`.
    pub two_scale_var: f64,
    /// `Σ_{S≠∅} ρ^{|S|} f̂^p(S)²`.
    pub spectral_two_scale_var: f64,
    /// `ρ Var_p(f)`.
    pub upper: f64,
    /// `ρ^n Var_p(f)`.
    pub lower: f64,
    /// `ρ^k` times the level-`k` weight of `f`; entry 0 is always 0.
    pub per_level: Vec<f64>,
    pub attains_upper: bool,
    pub attains_lower: bool,
}

impl TwoScaleReport {
    /// The two routes to `Var_r(h_f)` agree.
    pub fn routes_agree(&self) -> bool {
        tol::close(self.two_scale_var, self.spectral_two_scale_var)
    }

    /// `lower <= two_scale_var <= upper` up to `slack`.
    pub fn within_bounds(&self, slack: f64) -> bool {
        self.lower - slack <= self.two_scale_var && self.two_scale_var <= self.upper + slack
    }
}

pub fn two_scale_variance(f: &BoolFn, ts: TwoScalePair) -> Result<TwoScaleReport> {
    let r = ts.outer_bias()?;
    let rho = ts.rho();
    let spectrum = fourier_transform(f, ts.p());
    let powers = rho_powers(rho, f.n());
    let mut per_level = spectrum.level_weights();
    per_level[0] = 0.0;
    for (k, w) in per_level.iter_mut().enumerate() {
        *w *= powers[k];
    }
    let spectral_two_scale_var = per_level.iter().sum();
    let two_scale_var = variance(&h_transform(f, ts), r);
    let var_p_f = variance(f, ts.p());
    let upper = rho * var_p_f;
    let lower = powers[f.n()] * var_p_f;
    Ok(TwoScaleReport {
        rho,
        var_p_f,
        two_scale_var,
        spectral_two_scale_var,
        upper,
        lower,
        per_level,
        attains_upper: tol::close(two_scale_var, upper),
        attains_lower: tol::close(two_scale_var, lower),
    })
}

/// Both sides of the noise / two-scale identity at one noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsEquivalence {
    /// `E_p[f(ω) f(ω^ε)] - E_p[f]²`.
    pub lhs: f64,
    /// `Var_r(h_f)` with `r = p / (1 - ε(1 - p))`.
    pub rhs: f64,
    pub gap: f64,
    pub r: f64,
}

pub fn ns_equivalence(f: &BoolFn, p: Bias, eps: f64) -> Result<NsEquivalence> {
    let ts = TwoScalePair::from_noise(p, eps)?;
    let lhs = noise_correlation(f, p, eps)?;
    let rhs = variance(&h_transform(f, ts), ts.outer_bias()?);
    Ok(NsEquivalence {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
        r: ts.r(),
    })
}

/// One function's two-scale variance at two outer scales.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferRow {
    pub var_r1: f64,
    pub var_r2: f64,
    /// `Σ_{0<|S|<=k} f̂^p(S)²` for `k = 1, 2, 3`.
    pub low_level: [f64; 3],
    /// `max(ρ₂/ρ₁, (ρ₂/ρ₁)^n)`: `var_r2` never exceeds this times `var_r1`.
    pub bound_factor: f64,
    pub within_bound: bool,
}

/// Compare the two-scale variance of each function at `r1` and `r2`.
pub fn r_transfer_check(fs: &[BoolFn], p: Bias, r1: f64, r2: f64) -> Result<Vec<TransferRow>> {
    let ts1 = TwoScalePair::new(p.get(), r1)?;
    let ts2 = TwoScalePair::new(p.get(), r2)?;
    ts1.outer_bias()?;
    ts2.outer_bias()?;
    let ratio = ts2.rho() / ts1.rho();
    fs.iter()
        .map(|f| {
            let a = two_scale_variance(f, ts1)?;
            let b = two_scale_variance(f, ts2)?;
            let levels = fourier_transform(f, p).level_weights();
            let mut low_level = [0.0; 3];
            let mut acc = 0.0;
            for (k, slot) in low_level.iter_mut().enumerate() {
                acc += levels.get(k + 1).copied().unwrap_or(0.0);
                *slot = acc;
            }
            let bound_factor = ratio.max(ratio.powi(f.n() as i32));
            let allowed = bound_factor * a.spectral_two_scale_var;
            Ok(TransferRow {
                var_r1: a.spectral_two_scale_var,
                var_r2: b.spectral_two_scale_var,
                low_level,
                bound_factor,
                within_bound: b.spectral_two_scale_var
                    <= allowed + tol::ABS.max(tol::REL * allowed),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::build_function;

    #[test]
    fn pair_validation() {
        assert!(TwoScalePair::new(0.5, 0.5).is_err());
        assert!(TwoScalePair::new(0.5, 0.4).is_err());
        assert!(TwoScalePair::new(0.5, 1.1).is_err());
        assert!(TwoScalePair::new(0.0, 0.5).is_err());
        let one = TwoScalePair::new(0.3, 1.0).unwrap();
        assert_eq!(one.rho(), 0.0);
        assert_eq!(one.outer_bias(), Err(Error::OuterBiasOne));
    }

    #[test]
    fn noise_parameter_mapping() {
        let ts = TwoScalePair::from_noise(Bias::HALF, 0.5).unwrap();
        assert!((ts.r() - 2.0 / 3.0).abs() < 1e-15);
        assert!((ts.noise_level() - 0.5).abs() < 1e-15);
        assert!((ts.rho() - 0.5).abs() < 1e-15);
        assert!(TwoScalePair::from_noise(Bias::HALF, 0.0).is_err());
        assert!(TwoScalePair::from_noise(Bias::HALF, 1.0).is_err());
    }

    #[test]
    fn h_of_dictator_and_and() {
        let ts = TwoScalePair::new(0.3, 0.6).unwrap();
        let h = h_transform(&build_function("dictator:1").unwrap(), ts);
        assert_eq!(h.value(0), 0.0);
        assert!((h.value(1) - 0.5).abs() < 1e-15);

        let h = h_transform(&build_function("and:2").unwrap(), ts);
        for m in 0..4u64 {
            let want = if m == 3 { 0.25 } else { 0.0 };
            assert!((h.value(m) - want).abs() < 1e-15);
        }
        let c = h_transform(&BoolFn::constant(3, 1.7).unwrap(), ts);
        assert!(c.values().iter().all(|v| (v - 1.7).abs() < 1e-15));
    }

    #[test]
    fn h_at_full_outer_scale_is_expectation() {
        let f = build_function("majority:3").unwrap();
        let ts = TwoScalePair::new(0.4, 1.0).unwrap();
        let h = h_transform(&f, ts);
        let mean = f.mean(Bias::new(0.4).unwrap());
        assert!((h.value(0b111) - mean).abs() < 1e-15);
    }

    #[test]
    fn dictator_attains_upper_bound() {
        let f = build_function("dictator:1").unwrap();
        for (p, r) in [(0.25, 0.5), (0.1, 0.9), (0.5, 0.7)] {
            let rep = two_scale_variance(&f, TwoScalePair::new(p, r).unwrap()).unwrap();
            let closed = p * p * (1.0 - r) / r;
            assert!((rep.two_scale_var - closed).abs() < 1e-15);
            assert!(rep.attains_upper && rep.routes_agree());
        }
    }

    #[test]
    fn dictator_scaled_coefficient() {
        let f = build_function("dictator:1").unwrap();
        let ts = TwoScalePair::new(0.25, 0.5).unwrap();
        assert!((ts.rho() - 1.0 / 3.0).abs() < 1e-15);
        let sc = spectrum_scaling(&f, ts).unwrap();
        assert!((sc.h_spectrum.coeff(1) + 0.25).abs() < 1e-15);
        assert!(sc.max_deviation < 1e-15);
    }

    #[test]
    fn chi_attains_lower_bound() {
        for (p, r) in [(0.3, 0.6), (0.5, 0.55), (0.7, 0.8)] {
            let f = build_function(&format!("chi:4:{p}")).unwrap();
            let ts = TwoScalePair::new(p, r).unwrap();
            let rep = two_scale_variance(&f, ts).unwrap();
            assert!((rep.two_scale_var - ts.rho().powi(4)).abs() < 1e-12);
            assert!(rep.attains_lower);
            let sc = spectrum_scaling(&f, ts).unwrap();
            assert!((sc.h_spectrum.coeff(0b1111) - ts.rho().powf(2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_reports_zero() {
        let f = BoolFn::constant(4, 3.0).unwrap();
        let rep = two_scale_variance(&f, TwoScalePair::new(0.2, 0.4).unwrap()).unwrap();
        assert!(rep.two_scale_var.abs() < 1e-14);
        assert!(rep.upper.abs() < 1e-25);
        assert!(rep.lower.abs() < 1e-25);
        let ns = ns_equivalence(&f, Bias::HALF, 0.3).unwrap();
        assert!(ns.lhs.abs() < 1e-14 && ns.rhs.abs() < 1e-14 && ns.gap < 1e-14);
        let rows = r_transfer_check(&[f], Bias::HALF, 0.6, 0.8).unwrap();
        assert!(rows[0].var_r1.abs() < 1e-25);
        assert!(rows[0].var_r2.abs() < 1e-25);
    }

    #[test]
    fn dictator_ns_equivalence() {
        let f = build_function("dictator:1").unwrap();
        let ns = ns_equivalence(&f, Bias::HALF, 0.5).unwrap();
        assert!((ns.lhs - 0.125).abs() < 1e-15);
        assert!(ns.gap < 1e-15);
        assert!(ns_equivalence(&f, Bias::HALF, 1.0).is_err());
    }

    #[test]
    fn outer_scale_one_rejected_for_variance() {
        let f = build_function("dictator:2").unwrap();
        let ts = TwoScalePair::new(0.5, 1.0).unwrap();
        assert_eq!(two_scale_variance(&f, ts), Err(Error::OuterBiasOne));
        assert!(spectrum_scaling(&f, ts).is_err());
        assert!(r_transfer_check(&[f], Bias::HALF, 0.7, 1.0).is_err());
    }

    #[test]
    fn chi_transfer_ratio() {
        let f = build_function("chi:3:0.4").unwrap();
        let p = Bias::new(0.4).unwrap();
        let rows = r_transfer_check(&[f], p, 0.5, 0.8).unwrap();
        let ts1 = TwoScalePair::new(0.4, 0.5).unwrap();
        let ts2 = TwoScalePair::new(0.4, 0.8).unwrap();
        let want = (ts2.rho() / ts1.rho()).powi(3);
        assert!((rows[0].var_r2 / rows[0].var_r1 - want).abs() < 1e-10);
        assert!(rows[0].within_bound);
        let [l1, l2, l3] = rows[0].low_level;
        assert!(l1.abs() < 1e-12 && l2.abs() < 1e-12);
        assert!((l3 - 1.0).abs() < 1e-12);
    }
}
