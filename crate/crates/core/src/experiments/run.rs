//! Executes a parsed config over its parameter grid.

use std::collections::HashMap;
use std::io::Write;
use std::time::Instant;

use crate::cube::{
    build_function, crossing_function, fourier_transform, noise_correlation, pivotal_set,
    product_measure, variance, Bias, BoolFn,
};
use crate::error::{Error, Result};
use crate::experiments::config::{ExperimentConfig, Kind};
use crate::experiments::diagnostic::diagnostic_revealment_criterion;
use crate::partial::{ns_equivalence, two_scale_variance, TwoScalePair};
use crate::percolation::estimate::*;
use crate::percolation::RectLattice;
use crate::stats::Estimate;

/// Largest lattice, in edges, for which rows carry an exact value.
pub const EXACT_MAX_EDGES: usize = 16;

pub const CSV_HEADER: [&str; 13] = [
    "experiment",
    "status",
    "function",
    "lattice",
    "n",
    "p",
    "r",
    "eps",
    "quantity",
    "estimate",
    "stderr",
    "exact",
    "elapsed_s",
];

/// Parameters of one grid point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    pub function: Option<String>,
    pub lattice: Option<RectLattice>,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub r: Option<f64>,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: String,
    pub params: Params,
    pub quantity: String,
    /// `Err` carries the message of a failed grid point.
    pub outcome: std::result::Result<Estimate, String>,
    pub exact: Option<f64>,
    pub elapsed_s: Option<f64>,
}

impl Row {
    pub fn is_error(&self) -> bool {
        self.outcome.is_err()
    }
}

/// One parameter axis of the grid; `None` when the kind does not use it.
type Axis = Vec<Option<f64>>;

/// Rows of one grid point, before the shared columns are filled in.
type PointRows = Vec<(String, Estimate, Option<f64>)>;

fn exact_row(q: &str, v: f64) -> (String, Estimate, Option<f64>) {
    (q.to_string(), Estimate::exact(v), None)
}

/// `E_p[f]` for `p ∈ [0, 1]`.
fn mean_at(f: &BoolFn, p: f64) -> f64 {
    let w = product_measure(f.n(), p);
    w.iter().zip(f.values()).map(|(w, v)| w * v).sum()
}

/// `E_p|𝒫_f|` for `p ∈ [0, 1]`.
fn pivotal_mean_at(f: &BoolFn, p: f64) -> Result<f64> {
    let w = product_measure(f.n(), p);
    let mut total = 0.0;
    for (omega, weight) in w.iter().enumerate() {
        if *weight != 0.0 {
            total += weight * pivotal_set(f, omega as u64)?.count_ones() as f64;
        }
    }
    Ok(total)
}

struct Runner<'a> {
    cfg: &'a ExperimentConfig,
    crossing: HashMap<RectLattice, Option<BoolFn>>,
}

impl<'a> Runner<'a> {
    fn crossing_fn(&mut self, lat: RectLattice) -> Option<&BoolFn> {
        self.crossing
            .entry(lat)
            .or_insert_with(|| {
                (lat.edge_count() <= EXACT_MAX_EDGES)
                    .then(|| crossing_function(&lat).ok())
                    .flatten()
            })
            .as_ref()
    }

    fn grid(&self) -> Vec<Params> {
        let c = self.cfg;
        let mut out = Vec::new();
        let opt = |v: &[f64]| -> Vec<Option<f64>> {
            if v.is_empty() {
                vec![None]
            } else {
                v.iter().copied().map(Some).collect()
            }
        };
        let base = |lattice: Option<RectLattice>, n: Option<usize>| Params {
            function: c.function.clone(),
            lattice,
            n,
            ..Params::default()
        };
        let geometry: Vec<Params> = match c.kind {
            Kind::Spectrum | Kind::TwoScale | Kind::NsCheck => vec![base(None, None)],
            Kind::RswCheck | Kind::FourArm => {
                c.scales.iter().map(|&n| base(None, Some(n))).collect()
            }
            _ => c.lattices.iter().map(|&l| base(Some(l), None)).collect(),
        };
        let (ps, rs, es): (Axis, Axis, Axis) = match c.kind {
            Kind::Spectrum | Kind::PercCrossing | Kind::PercPivotal => {
                (opt(&c.p), vec![None], vec![None])
            }
            Kind::TwoScale => (opt(&c.p), opt(&c.r), vec![None]),
            Kind::NsCheck => (opt(&c.p), vec![None], opt(&c.eps)),
            Kind::PercNoise if !c.r.is_empty() => (vec![None], opt(&c.r), opt(&c.eps)),
            Kind::PercNoise => (opt(&c.p), vec![None], opt(&c.eps)),
            Kind::PercRevealment | Kind::PercTwoScale | Kind::RswCheck => {
                (vec![None], opt(&c.r), vec![None])
            }
            Kind::PercNearCritical => (vec![Some(0.5)], opt(&c.r), vec![None]),
            Kind::FourArm => (vec![Some(0.5)], vec![None], vec![None]),
        };
        for g in &geometry {
            for &p in &ps {
                for &r in &rs {
                    for &eps in &es {
                        out.push(Params {
                            p,
                            r,
                            eps,
                            ..g.clone()
                        });
                    }
                }
            }
        }
        out
    }

    fn main_quantity(&self) -> &'static str {
        match self.cfg.kind {
            Kind::Spectrum => "variance",
            Kind::TwoScale => "two_scale_var",
            Kind::NsCheck | Kind::PercNoise => "noise_correlation",
            Kind::PercCrossing => "crossing_probability",
            Kind::PercPivotal => "pivotal_mean",
            Kind::PercRevealment => "delta_right",
            Kind::PercNearCritical => "flip_probability",
            Kind::PercTwoScale => "two_scale_var",
            Kind::RswCheck => "conditional_mean",
            Kind::FourArm => "alpha4",
        }
    }

    fn point(&mut self, f: Option<&BoolFn>, pt: &Params) -> Result<PointRows> {
        let c = self.cfg;
        let seed = c.seed;
        let p = pt.p.unwrap_or(0.5);
        let mut rows: PointRows = Vec::new();
        match c.kind {
            Kind::Spectrum => {
                let f = f.expect("function built");
                let bias = Bias::new(p)?;
                let s = fourier_transform(f, bias);
                rows.push(("mean".into(), Estimate::exact(s.mean()), Some(f.mean(bias))));
                rows.push((
                    "variance".into(),
                    Estimate::exact(s.variance()),
                    Some(variance(f, bias)),
                ));
                for (k, w) in s.level_weights().iter().enumerate() {
                    rows.push(exact_row(&format!("level_{k}"), *w));
                }
            }
            Kind::TwoScale => {
                let f = f.expect("function built");
                let rep = two_scale_variance(f, TwoScalePair::new(p, pt.r.unwrap())?)?;
                rows.push((
                    "two_scale_var".into(),
                    Estimate::exact(rep.two_scale_var),
                    Some(rep.spectral_two_scale_var),
                ));
                rows.push(exact_row("upper", rep.upper));
                rows.push(exact_row("lower", rep.lower));
                rows.push(exact_row("rho", rep.rho));
            }
            Kind::NsCheck => {
                let f = f.expect("function built");
                let ns = ns_equivalence(f, Bias::new(p)?, pt.eps.unwrap())?;
                rows.push((
                    "noise_correlation".into(),
                    Estimate::exact(ns.lhs),
                    Some(ns.rhs),
                ));
                rows.push(exact_row("matching_r", ns.r));
            }
            Kind::PercCrossing => {
                let lat = pt.lattice.unwrap();
                let est = estimate_crossing_probability(lat, p, c.trials, seed)?;
                let exact = self.crossing_fn(lat).map(|g| mean_at(g, p));
                rows.push(("crossing_probability".into(), est, exact));
            }
            Kind::PercPivotal => {
                let lat = pt.lattice.unwrap();
                let est = estimate_pivotal_mean(lat, p, c.trials, seed)?;
                let exact = match self.crossing_fn(lat) {
                    Some(g) => Some(pivotal_mean_at(g, p)?),
                    None => None,
                };
                rows.push(("pivotal_mean".into(), est, exact));
            }
            Kind::PercRevealment => {
                let lat = pt.lattice.unwrap();
                let rep = estimate_revealment(lat, pt.r.unwrap(), c.trials_psi, c.trials_xi, seed)?;
                rows.push(("delta_right".into(), rep.delta_right.estimate(), None));
                rows.push(("delta_left".into(), rep.delta_left.estimate(), None));
                rows.push(("far_quarter".into(), rep.far_quarter.estimate(), None));
                rows.push(exact_row("delta_right_max", rep.delta_right.max));
            }
            Kind::PercNearCritical => {
                let lat = pt.lattice.unwrap();
                let r = pt.r.unwrap();
                let nc = near_critical_flip_probability(lat, r, c.trials, seed)?;
                let g = self.crossing_fn(lat);
                let flip_exact = g.map(|g| (mean_at(g, r) - mean_at(g, 0.5)).abs());
                let piv_exact = match g {
                    Some(g) => Some(pivotal_mean_at(g, 0.5)?),
                    None => None,
                };
                rows.push(("flip_probability".into(), nc.flip, flip_exact));
                rows.push(("pivotal_mean".into(), nc.pivotal_mean, piv_exact));
                rows.push((
                    "union_bound".into(),
                    nc.union_bound,
                    piv_exact.map(|m| (r - 0.5).abs() * m),
                ));
            }
            Kind::PercTwoScale => {
                let lat = pt.lattice.unwrap();
                let r = pt.r.unwrap();
                let nv =
                    two_scale_crossing_variance_with(lat, r, c.outer, c.inner, seed, c.bootstrap)?;
                let exact = match self.crossing_fn(lat) {
                    Some(g) => Some(
                        two_scale_variance(g, TwoScalePair::new(0.5, r)?)?.spectral_two_scale_var,
                    ),
                    None => None,
                };
                rows.push(("two_scale_var".into(), nv.estimate, exact));
                rows.push(exact_row("between", nv.between));
                rows.push(exact_row("within", nv.within));
            }
            Kind::PercNoise => {
                let lat = pt.lattice.unwrap();
                let eps = pt.eps.unwrap();
                if let Some(r) = pt.r {
                    let cn = conditional_noise_correlation_crossing(
                        lat, r, eps, c.outer, c.trials, seed,
                    )?;
                    rows.push(("noise_correlation".into(), cn.mean, None));
                } else {
                    let est = noise_correlation_crossing(lat, p, eps, c.trials, seed)?;
                    let exact = match self.crossing_fn(lat) {
                        Some(g) if p > 0.0 && p < 1.0 => {
                            Some(noise_correlation(g, Bias::new(p)?, eps)?)
                        }
                        Some(_) => Some(0.0),
                        None => None,
                    };
                    rows.push(("noise_correlation".into(), est, exact));
                }
            }
            Kind::RswCheck => {
                let n = pt.n.unwrap();
                let rep = rsw_two_scale_check(n, pt.r.unwrap(), c.trials_psi, c.trials_xi, seed)?;
                rows.push(("conditional_mean".into(), rep.mean, None));
                for (margin, frac) in &rep.fraction_within {
                    rows.push(exact_row(&format!("fraction_within_{margin}"), *frac));
                }
                let total = rep.conditional.len() as f64;
                for (b, count) in rep.histogram.iter().enumerate() {
                    rows.push(exact_row(&format!("hist_{b}"), *count as f64 / total));
                }
                rows.push(exact_row("low_confidence", rep.low_confidence as u8 as f64));
            }
            Kind::FourArm => {
                let sc = pivotal_scaling_ratio(pt.n.unwrap(), c.trials, seed)?;
                rows.push(("alpha4".into(), sc.alpha4, None));
                rows.push(("pivotal_mean".into(), sc.pivotal_mean, None));
                rows.push(("ratio".into(), sc.ratio, None));
            }
        }
        for (q, est, _) in &rows {
            if !est.value.is_finite() || !est.stderr.is_finite() {
                return Err(Error::InvalidParameter(format!("{q} is not finite")));
            }
        }
        Ok(rows)
    }
}

/// Runs every grid point. A failing grid point becomes a single error row
/// and the rest of the grid still runs.
pub fn run(cfg: &ExperimentConfig) -> Vec<Row> {
    let mut runner = Runner {
        cfg,
        crossing: HashMap::new(),
    };
    let function = match &cfg.function {
        Some(d) if cfg.kind.is_exact() => Some(build_function(d)),
        _ => None,
    };
    let mut out = Vec::new();
    for pt in runner.grid() {
        let start = Instant::now();
        let result = match &function {
            Some(Err(e)) => Err(e.clone()),
            Some(Ok(f)) => runner.point(Some(f), &pt),
            None => runner.point(None, &pt),
        };
        let elapsed = cfg.timing.then(|| start.elapsed().as_secs_f64());
        match result {
            Ok(rows) => out.extend(rows.into_iter().map(|(quantity, est, exact)| Row {
                experiment: cfg.id.clone(),
                params: pt.clone(),
                quantity,
                outcome: Ok(est),
                exact: exact.filter(|x| x.is_finite()),
                elapsed_s: elapsed,
            })),
            Err(e) => out.push(Row {
                experiment: cfg.id.clone(),
                params: pt.clone(),
                quantity: runner.main_quantity().to_string(),
                outcome: Err(e.to_string()),
                exact: None,
                elapsed_s: elapsed,
            }),
        }
    }
    if cfg.kind == Kind::PercRevealment {
        out.extend(revealment_diagnostic_rows(cfg, &out));
    }
    out
}

/// `δ̂ (ln n)^6` rows for every `r` that was run at two or more sizes.
fn revealment_diagnostic_rows(cfg: &ExperimentConfig, rows: &[Row]) -> Vec<Row> {
    let mut out = Vec::new();
    for &r in &cfg.r {
        let points: Vec<(usize, Estimate)> = rows
            .iter()
            .filter(|row| row.quantity == "delta_right" && row.params.r == Some(r))
            .filter_map(|row| Some((row.params.lattice?.width(), row.outcome.clone().ok()?)))
            .collect();
        let Ok(report) = diagnostic_revealment_criterion(&points) else {
            continue;
        };
        for entry in &report.entries {
            out.push(Row {
                experiment: cfg.id.clone(),
                params: Params {
                    lattice: RectLattice::square(entry.n).ok(),
                    n: Some(entry.n),
                    r: Some(r),
                    ..Params::default()
                },
                quantity: "diagnostic_delta_log6".into(),
                outcome: Ok(entry.scaled),
                exact: None,
                elapsed_s: None,
            });
        }
    }
    out
}

/// Runs inside a pool of `workers` threads, or rayon's global pool.
pub fn run_with_workers(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<Vec<Row>> {
    match workers.or(cfg.workers) {
        None => Ok(run(cfg)),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            Ok(pool.install(|| run(cfg)))
        }
    }
}

/// `%.12g`-style formatting.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

pub fn write_csv(rows: &[Row], out: impl Write) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        let pr = &row.params;
        let (status, estimate, stderr) = match &row.outcome {
            Ok(e) => ("ok".to_string(), fmt_num(e.value), fmt_num(e.stderr)),
            Err(msg) => (format!("error:{msg}"), String::new(), String::new()),
        };
        w.write_record([
            row.experiment.clone(),
            status,
            pr.function.clone().unwrap_or_default(),
            pr.lattice.map(|l| l.to_string()).unwrap_or_default(),
            pr.n.map(|n| n.to_string()).unwrap_or_default(),
            opt_num(pr.p),
            opt_num(pr.r),
            opt_num(pr.eps),
            row.quantity.clone(),
            estimate,
            stderr,
            opt_num(row.exact),
            opt_num(row.elapsed_s),
        ])?;
    }
    w.flush()
}
