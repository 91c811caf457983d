//! Monte Carlo estimators on rectangles.
//!
//! Every estimator is a pure function of its parameters and `seed`. Trials
//! run in parallel, each drawing from its own keyed stream, and their
//! results are collected in trial order before any reduction.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::percolation::crossing::{has_dual_horizontal_crossing, has_horizontal_crossing};
use crate::percolation::explore::{explore_config, Side, StopRule};
use crate::percolation::lattice::{EdgeConfig, RectLattice};
use crate::percolation::pivotal::{is_pivotal, pivotal_edges};
use crate::percolation::rng::{
    bernoulli_config, config_at, open_uniform, purpose, sample_weights, stream,
};
use crate::stats::{covariance_estimate, mean, mean_estimate, sample_variance, Estimate, Summary};

/// Default number of bootstrap resamples for the nested variance.
pub const DEFAULT_BOOTSTRAP: usize = 200;

fn collect_trials<T: Send>(count: u64, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    (0..count).into_par_iter().map(f).collect()
}

fn check_trials(name: &str, count: u64, min: u64) -> Result<()> {
    if count < min {
        return Err(Error::InvalidParameter(format!(
            "{name} must be at least {min}, got {count}"
        )));
    }
    Ok(())
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {x}"
        )))
    }
}

/// Outer bias of a subgraph experiment: `r ∈ (1/2, 1]`, inner bias `1/(2r)`.
pub fn subgraph_inner_bias(r: f64) -> Result<f64> {
    if r > 0.5 && r <= 1.0 {
        Ok(1.0 / (2.0 * r))
    } else {
        Err(Error::InvalidParameter(format!(
            "outer bias must lie in (1/2, 1], got {r}"
        )))
    }
}

/// `P_p(horizontal crossing)`.
pub fn estimate_crossing_probability(
    lat: RectLattice,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    check_unit("p", p)?;
    check_trials("trials", trials, 1)?;
    let hits = collect_trials(trials, |t| {
        let c = config_at(&sample_weights(lat, seed, t), p);
        has_horizontal_crossing(&c) as u8 as f64
    });
    Ok(mean_estimate(&hits))
}

/// `E_p |𝒫|` for the horizontal crossing.
pub fn estimate_pivotal_mean(lat: RectLattice, p: f64, trials: u64, seed: u64) -> Result<Estimate> {
    check_unit("p", p)?;
    check_trials("trials", trials, 1)?;
    let counts = collect_trials(trials, |t| {
        let c = config_at(&sample_weights(lat, seed, t), p);
        pivotal_edges(&c).count_ones(..) as f64
    });
    Ok(mean_estimate(&counts))
}

/// The horizontal edge `(n, n)-(n+1, n)` next to the centre of `Λ_{2n,2n}`.
pub fn central_edge(n: usize) -> Result<(RectLattice, usize)> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "scale must be >= 2, got {n}"
        )));
    }
    let lat = RectLattice::square(2 * n)?;
    Ok((lat, lat.horizontal_edge(n, n)))
}

/// Probability that the central edge of `Λ_{2n,2n}` is pivotal at bias `p`.
pub fn central_pivotal_probability(n: usize, p: f64, trials: u64, seed: u64) -> Result<Estimate> {
    check_unit("p", p)?;
    check_trials("trials", trials, 1)?;
    let (lat, e) = central_edge(n)?;
    let hits = collect_trials(trials, |t| {
        let c = config_at(&sample_weights(lat, seed, t), p);
        is_pivotal(&c, e) as u8 as f64
    });
    Ok(mean_estimate(&hits))
}

/// `α̂₄(n)`: the critical pivotality probability of the central edge of
/// `Λ_{2n,2n}`.
pub fn estimate_four_arm(n: usize, trials: u64, seed: u64) -> Result<Estimate> {
    central_pivotal_probability(n, 0.5, trials, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotalScaling {
    pub n: usize,
    /// `E_{1/2}|𝒫_n|` on `Λ_{n,n}`.
    pub pivotal_mean: Estimate,
    pub alpha4: Estimate,
    /// `E|𝒫_n| / (n² α̂₄(n))`.
    pub ratio: Estimate,
}

pub fn pivotal_scaling_ratio(n: usize, trials: u64, seed: u64) -> Result<PivotalScaling> {
    let pivotal_mean = estimate_pivotal_mean(RectLattice::square(n)?, 0.5, trials, seed)?;
    let alpha4 = estimate_four_arm(n, trials, seed ^ purpose::PROBE)?;
    let denom = (n * n) as f64 * alpha4.value;
    let value = pivotal_mean.value / denom;
    let rel = ((pivotal_mean.stderr / pivotal_mean.value).powi(2)
        + (alpha4.stderr / alpha4.value).powi(2))
    .sqrt();
    Ok(PivotalScaling {
        n,
        pivotal_mean,
        alpha4,
        ratio: Estimate {
            value,
            stderr: value * rel,
        },
    })
}

/// Query frequencies of the exploration algorithms, conditioned on `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RevealmentReport {
    pub lattice: RectLattice,
    pub r: f64,
    pub inner_bias: f64,
    /// Per edge, the query probability of left-started exploration,
    /// averaged over `ψ`.
    pub per_edge_from_left: Vec<f64>,
    /// Same for right-started exploration.
    pub per_edge_from_right: Vec<f64>,
    /// Over `ψ`: `max_{e ∈ K_R}` of the conditional query frequency of
    /// left-started exploration.
    pub delta_right: Summary,
    /// Over `ψ`: `max_{e ∈ K_L}` for right-started exploration.
    pub delta_left: Summary,
    /// Over `ψ`: the maximum over edges in the rightmost quarter, for
    /// left-started exploration.
    pub far_quarter: Summary,
    /// The per-`ψ` values behind `delta_right`.
    pub delta_right_samples: Vec<f64>,
}

/// Revealment with the critical inner bias `1/(2r)`.
pub fn estimate_revealment(
    lat: RectLattice,
    r: f64,
    trials_psi: u64,
    trials_xi: u64,
    seed: u64,
) -> Result<RevealmentReport> {
    let inner = subgraph_inner_bias(r)?;
    revealment_with_inner_bias(lat, r, inner, trials_psi, trials_xi, seed)
}

/// Revealment with an arbitrary inner bias.
pub fn revealment_with_inner_bias(
    lat: RectLattice,
    r: f64,
    inner_bias: f64,
    trials_psi: u64,
    trials_xi: u64,
    seed: u64,
) -> Result<RevealmentReport> {
    check_unit("r", r)?;
    check_unit("inner bias", inner_bias)?;
    check_trials("trials_psi", trials_psi, 1)?;
    check_trials("trials_xi", trials_xi, 1)?;
    let edges = lat.edge_count();
    let (k_right, k_left, quarter) = (lat.right_half(), lat.left_half(), lat.right_quarter());
    let per_psi = collect_trials(trials_psi, |i| {
        let psi = bernoulli_config(lat, r, &mut stream(seed, purpose::PSI, i, 0));
        let mut from_left = vec![0u32; edges];
        let mut from_right = vec![0u32; edges];
        for j in 0..trials_xi {
            let xi = bernoulli_config(lat, inner_bias, &mut stream(seed, purpose::XI, i, j));
            let c = psi.and(&xi).expect("same lattice");
            for e in explore_config(&c, Side::Left, StopRule::Fixpoint)
                .queried
                .ones()
            {
                from_left[e] += 1;
            }
            for e in explore_config(&c, Side::Right, StopRule::Fixpoint)
                .queried
                .ones()
            {
                from_right[e] += 1;
            }
        }
        let scale = 1.0 / trials_xi as f64;
        let left: Vec<f64> = from_left.iter().map(|&k| k as f64 * scale).collect();
        let right: Vec<f64> = from_right.iter().map(|&k| k as f64 * scale).collect();
        (left, right)
    });
    let max_over = |freq: &[f64], set: &[usize]| set.iter().map(|&e| freq[e]).fold(0.0, f64::max);
    let delta_right_samples: Vec<f64> =
        per_psi.iter().map(|(l, _)| max_over(l, &k_right)).collect();
    let delta_left: Vec<f64> = per_psi.iter().map(|(_, r)| max_over(r, &k_left)).collect();
    let far: Vec<f64> = per_psi.iter().map(|(l, _)| max_over(l, &quarter)).collect();
    let mut per_edge_from_left = vec![0.0; edges];
    let mut per_edge_from_right = vec![0.0; edges];
    for (l, r) in &per_psi {
        for e in 0..edges {
            per_edge_from_left[e] += l[e];
            per_edge_from_right[e] += r[e];
        }
    }
    let k = trials_psi as f64;
    per_edge_from_left.iter_mut().for_each(|x| *x /= k);
    per_edge_from_right.iter_mut().for_each(|x| *x /= k);
    Ok(RevealmentReport {
        lattice: lat,
        r,
        inner_bias,
        per_edge_from_left,
        per_edge_from_right,
        delta_right: Summary::of(&delta_right_samples),
        delta_left: Summary::of(&delta_left),
        far_quarter: Summary::of(&far),
        delta_right_samples,
    })
}

/// Estimate of `Var(E[g(η_{1/2}) | η_r])` from nested sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestedVariance {
    /// Between-group variance minus mean within-group variance over `m`;
    /// may be negative.
    pub estimate: Estimate,
    pub between: f64,
    pub within: f64,
}

/// Unbiased one-way decomposition of grouped 0/1 outcomes.
pub fn nested_variance(group_means: &[f64], group_vars: &[f64], inner: u64) -> f64 {
    sample_variance(group_means) - mean(group_vars) / inner as f64
}

pub fn two_scale_crossing_variance(
    lat: RectLattice,
    r: f64,
    outer: u64,
    inner: u64,
    seed: u64,
) -> Result<NestedVariance> {
    two_scale_crossing_variance_with(lat, r, outer, inner, seed, DEFAULT_BOOTSTRAP)
}

pub fn two_scale_crossing_variance_with(
    lat: RectLattice,
    r: f64,
    outer: u64,
    inner: u64,
    seed: u64,
    bootstrap: usize,
) -> Result<NestedVariance> {
    if !(r > 0.5 && r < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "outer bias must lie in (1/2, 1), got {r}"
        )));
    }
    check_trials("outer", outer, 2)?;
    check_trials("inner", inner, 2)?;
    check_trials("bootstrap", bootstrap as u64, 2)?;
    let thin = 0.5 / r;
    let groups = collect_trials(outer, |i| {
        let psi = bernoulli_config(lat, r, &mut stream(seed, purpose::PSI, i, 0));
        let ys: Vec<f64> = (0..inner)
            .map(|j| {
                let xi = bernoulli_config(lat, thin, &mut stream(seed, purpose::XI, i, j));
                has_horizontal_crossing(&psi.and(&xi).expect("same lattice")) as u8 as f64
            })
            .collect();
        (mean(&ys), sample_variance(&ys))
    });
    let means: Vec<f64> = groups.iter().map(|g| g.0).collect();
    let vars: Vec<f64> = groups.iter().map(|g| g.1).collect();
    let value = nested_variance(&means, &vars, inner);

    let resampled = collect_trials(bootstrap as u64, |b| {
        let mut rng = stream(seed, purpose::BOOTSTRAP, b, 0);
        let n = means.len();
        let (mut bm, mut bv) = (Vec::with_capacity(n), Vec::with_capacity(n));
        for _ in 0..n {
            let k = ((open_uniform(&mut rng) * n as f64) as usize).min(n - 1);
            bm.push(means[k]);
            bv.push(vars[k]);
        }
        nested_variance(&bm, &bv, inner)
    });
    Ok(NestedVariance {
        estimate: Estimate {
            value,
            stderr: sample_variance(&resampled).sqrt(),
        },
        between: sample_variance(&means),
        within: mean(&vars),
    })
}

/// A configuration and its `ε`-noised copy: each edge is resampled from
/// `P_p` with probability `ε`.
fn noisy_pair(
    lat: RectLattice,
    p: f64,
    eps: f64,
    rng: &mut impl rand::RngCore,
) -> (EdgeConfig, EdgeConfig) {
    let mut a = EdgeConfig::empty(lat);
    let mut b = EdgeConfig::empty(lat);
    for e in 0..lat.edge_count() {
        let x = open_uniform(rng) <= p;
        let resample = open_uniform(rng) <= eps;
        let fresh = open_uniform(rng) <= p;
        a.set(e, x);
        b.set(e, if resample { fresh } else { x });
    }
    (a, b)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 || eps == 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "noise level must lie in (0, 1], got {eps}"
        )))
    }
}

/// `E_p[g(ω) g(ω^ε)] - E_p[g]²` for the horizontal crossing.
pub fn noise_correlation_crossing(
    lat: RectLattice,
    p: f64,
    eps: f64,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    check_unit("p", p)?;
    check_eps(eps)?;
    check_trials("trials", trials, 2)?;
    let pairs = collect_trials(trials, |t| {
        let (a, b) = noisy_pair(lat, p, eps, &mut stream(seed, purpose::NOISE, t, 0));
        (
            has_horizontal_crossing(&a) as u8 as f64,
            has_horizontal_crossing(&b) as u8 as f64,
        )
    });
    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    Ok(covariance_estimate(&xs, &ys))
}

/// Noise correlation of `ξ ↦ g(ψ·ξ)` at the inner bias `1/(2r)`, for
/// several sampled `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalNoise {
    /// Mean over `ψ`; the standard error reflects the spread across `ψ`.
    pub mean: Estimate,
    pub per_psi: Vec<Estimate>,
}

pub fn conditional_noise_correlation_crossing(
    lat: RectLattice,
    r: f64,
    eps: f64,
    psi_draws: u64,
    trials_per_psi: u64,
    seed: u64,
) -> Result<ConditionalNoise> {
    let inner = subgraph_inner_bias(r)?;
    check_eps(eps)?;
    check_trials("psi draws", psi_draws, 2)?;
    check_trials("trials", trials_per_psi, 2)?;
    let per_psi = collect_trials(psi_draws, |i| {
        let psi = bernoulli_config(lat, r, &mut stream(seed, purpose::PSI, i, 0));
        let mut xs = Vec::with_capacity(trials_per_psi as usize);
        let mut ys = Vec::with_capacity(trials_per_psi as usize);
        for t in 0..trials_per_psi {
            let (a, b) = noisy_pair(lat, inner, eps, &mut stream(seed, purpose::NOISE, i, t));
            xs.push(has_horizontal_crossing(&psi.and(&a).expect("same lattice")) as u8 as f64);
            ys.push(has_horizontal_crossing(&psi.and(&b).expect("same lattice")) as u8 as f64);
        }
        covariance_estimate(&xs, &ys)
    });
    let values: Vec<f64> = per_psi.iter().map(|e| e.value).collect();
    Ok(ConditionalNoise {
        mean: mean_estimate(&values),
        per_psi,
    })
}

/// Crossing disagreement between `η_{1/2}` and `η_{r_n}` under the coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearCritical {
    /// `P(g(η_{1/2}) ≠ g(η_{r_n}))`.
    pub flip: Estimate,
    /// `E_{1/2}|𝒫|` from the same trials.
    pub pivotal_mean: Estimate,
    /// `|r_n - 1/2| · E_{1/2}|𝒫|`.
    pub union_bound: Estimate,
}

impl NearCritical {
    /// `flip <= union_bound + k·sqrt(se_flip² + se_bound²)`.
    pub fn respects_union_bound(&self, k: f64) -> bool {
        let se = self.flip.stderr.hypot(self.union_bound.stderr);
        self.flip.value <= self.union_bound.value + k * se
    }
}

pub fn near_critical_flip_probability(
    lat: RectLattice,
    r_n: f64,
    trials: u64,
    seed: u64,
) -> Result<NearCritical> {
    check_unit("r_n", r_n)?;
    check_trials("trials", trials, 1)?;
    let rows = collect_trials(trials, |t| {
        let w = sample_weights(lat, seed, t);
        let crit = config_at(&w, 0.5);
        let shifted = config_at(&w, r_n);
        let flip = has_horizontal_crossing(&crit) != has_horizontal_crossing(&shifted);
        (
            flip as u8 as f64,
            pivotal_edges(&crit).count_ones(..) as f64,
        )
    });
    let (flips, pivots): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    let flip = mean_estimate(&flips);
    let pivotal_mean = mean_estimate(&pivots);
    let gap = (r_n - 0.5).abs();
    Ok(NearCritical {
        flip,
        pivotal_mean,
        union_bound: Estimate {
            value: gap * pivotal_mean.value,
            stderr: gap * pivotal_mean.stderr,
        },
    })
}

/// Conditional probabilities of a dual left-right crossing of `Λ_{3n,n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RswReport {
    pub n: usize,
    pub r: f64,
    /// One conditional probability per sampled `ψ`.
    pub conditional: Vec<f64>,
    /// Counts of `conditional` in ten equal bins of `[0, 1]`.
    pub histogram: [u64; 10],
    /// `(c, fraction of ψ with conditional probability in (c, 1 - c))`.
    pub fraction_within: Vec<(f64, f64)>,
    pub mean: Estimate,
    /// Set for rectangles too small to say anything.
    pub low_confidence: bool,
}

pub const RSW_MARGINS: [f64; 2] = [0.01, 0.05];

pub fn rsw_two_scale_check(
    n: usize,
    r: f64,
    trials_psi: u64,
    trials_xi: u64,
    seed: u64,
) -> Result<RswReport> {
    let inner = subgraph_inner_bias(r)?;
    check_trials("trials_psi", trials_psi, 1)?;
    check_trials("trials_xi", trials_xi, 1)?;
    let lat = RectLattice::new(3 * n, n)?;
    let conditional = collect_trials(trials_psi, |i| {
        let psi = bernoulli_config(lat, r, &mut stream(seed, purpose::PSI, i, 0));
        let hits = (0..trials_xi)
            .filter(|&j| {
                let xi = bernoulli_config(lat, inner, &mut stream(seed, purpose::XI, i, j));
                has_dual_horizontal_crossing(&psi.and(&xi).expect("same lattice"))
            })
            .count();
        hits as f64 / trials_xi as f64
    });
    let mut histogram = [0u64; 10];
    for &x in &conditional {
        histogram[((x * 10.0) as usize).min(9)] += 1;
    }
    let fraction_within = RSW_MARGINS
        .iter()
        .map(|&c| {
            let inside = conditional
                .iter()
                .filter(|&&x| x > c && x < 1.0 - c)
                .count();
            (c, inside as f64 / conditional.len() as f64)
        })
        .collect();
    Ok(RswReport {
        n,
        r,
        mean: mean_estimate(&conditional),
        histogram,
        fraction_within,
        conditional,
        low_confidence: n < 4,
    })
}
