//! Flat `key = value` experiment configs.
//!
//! ```text
//! # comments and blank lines are ignored
//! kind = ns-check
//! function = majority:5
//! p = 0.5
//! eps = 0.1,0.3
//! seed = 42
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::percolation::RectLattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Spectrum,
    TwoScale,
    NsCheck,
    PercCrossing,
    PercPivotal,
    PercRevealment,
    PercNearCritical,
    PercTwoScale,
    PercNoise,
    RswCheck,
    FourArm,
}

impl Kind {
    pub const ALL: [Kind; 11] = [
        Kind::Spectrum,
        Kind::TwoScale,
        Kind::NsCheck,
        Kind::PercCrossing,
        Kind::PercPivotal,
        Kind::PercRevealment,
        Kind::PercNearCritical,
        Kind::PercTwoScale,
        Kind::PercNoise,
        Kind::RswCheck,
        Kind::FourArm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Spectrum => "spectrum",
            Kind::TwoScale => "two-scale",
            Kind::NsCheck => "ns-check",
            Kind::PercCrossing => "perc-crossing",
            Kind::PercPivotal => "perc-pivotal",
            Kind::PercRevealment => "perc-revealment",
            Kind::PercNearCritical => "perc-near-critical",
            Kind::PercTwoScale => "perc-two-scale",
            Kind::PercNoise => "perc-noise",
            Kind::RswCheck => "rsw-check",
            Kind::FourArm => "four-arm",
        }
    }

    /// Kinds that evaluate a function descriptor exactly.
    pub fn is_exact(self) -> bool {
        matches!(self, Kind::Spectrum | Kind::TwoScale | Kind::NsCheck)
    }

    /// Kinds whose geometry is a list of scales `n` rather than rectangles.
    fn uses_scales(self) -> bool {
        matches!(self, Kind::RswCheck | Kind::FourArm)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown kind `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub id: String,
    pub kind: Kind,
    pub function: Option<String>,
    /// Rectangles for the percolation kinds; `n = ...` entries add squares.
    pub lattices: Vec<RectLattice>,
    /// Scales for `rsw-check` and `four-arm`.
    pub scales: Vec<usize>,
    pub p: Vec<f64>,
    pub r: Vec<f64>,
    pub eps: Vec<f64>,
    pub trials: u64,
    pub outer: u64,
    pub inner: u64,
    pub trials_psi: u64,
    pub trials_xi: u64,
    pub seed: u64,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
    pub aspect_max: f64,
    /// Fill the `elapsed_s` column. Off by default so reruns are identical.
    pub timing: bool,
    pub bootstrap: usize,
}

/// One problem found while parsing, with its 1-based line when it has one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigError {
    pub issues: Vec<ConfigIssue>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

const KEYS: [&str; 19] = [
    "id",
    "kind",
    "function",
    "lattice",
    "n",
    "p",
    "r",
    "eps",
    "trials",
    "outer",
    "inner",
    "trials_psi",
    "trials_xi",
    "seed",
    "workers",
    "output",
    "aspect_max",
    "timing",
    "bootstrap",
];

struct Raw<'a> {
    key: &'a str,
    value: &'a str,
    line: usize,
}

struct Parser<'a> {
    entries: Vec<Raw<'a>>,
    issues: Vec<ConfigIssue>,
}

impl<'a> Parser<'a> {
    fn issue(&mut self, line: Option<usize>, message: impl Into<String>) {
        self.issues.push(ConfigIssue {
            line,
            message: message.into(),
        });
    }

    fn get(&self, key: &str) -> Option<(&'a str, usize)> {
        self.entries
            .iter()
            .find(|e| e.key == key)
            .map(|e| (e.value, e.line))
    }

    fn list<T: FromStr>(&mut self, key: &str, ok: impl Fn(&T) -> Result<(), String>) -> Vec<T> {
        let Some((value, line)) = self.get(key) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for item in value.split(',').map(str::trim) {
            match item.parse::<T>() {
                Ok(v) => match ok(&v) {
                    Ok(()) => out.push(v),
                    Err(why) => self.issue(Some(line), format!("{key} = {item} {why}")),
                },
                Err(_) => self.issue(Some(line), format!("{key}: cannot parse `{item}`")),
            }
        }
        out
    }

    fn scalar<T: FromStr>(
        &mut self,
        key: &str,
        ok: impl Fn(&T) -> Result<(), String>,
    ) -> Option<T> {
        let (value, line) = self.get(key)?;
        if value.contains(',') {
            self.issue(Some(line), format!("{key} takes a single value"));
            return None;
        }
        let v = self.list(key, ok);
        v.into_iter().next()
    }
}

fn open_unit(x: &f64) -> Result<(), String> {
    if *x > 0.0 && *x < 1.0 {
        Ok(())
    } else {
        Err("is outside (0, 1)".into())
    }
}

fn half_open_unit(x: &f64) -> Result<(), String> {
    if *x > 0.0 && *x <= 1.0 {
        Ok(())
    } else {
        Err("is outside (0, 1]".into())
    }
}

fn closed_unit(x: &f64) -> Result<(), String> {
    if (0.0..=1.0).contains(x) {
        Ok(())
    } else {
        Err("is outside [0, 1]".into())
    }
}

fn positive<T: PartialOrd + Default>(x: &T) -> Result<(), String> {
    if *x > T::default() {
        Ok(())
    } else {
        Err("must be positive".into())
    }
}

fn any<T>(_: &T) -> Result<(), String> {
    Ok(())
}

fn parse_lattice(s: &str) -> Result<RectLattice, String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("lattice `{s}` is not of the form WxH"))?;
    let w: usize = w
        .trim()
        .parse()
        .map_err(|_| format!("bad lattice width in `{s}`"))?;
    let h: usize = h
        .trim()
        .parse()
        .map_err(|_| format!("bad lattice height in `{s}`"))?;
    RectLattice::new(w, h).map_err(|e| e.to_string())
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut parser = Parser {
        entries: Vec::new(),
        issues: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            parser.issue(Some(line), format!("expected `key = value`, got `{body}`"));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            parser.issue(Some(line), format!("unknown key `{key}`"));
        } else if parser.get(key).is_some() {
            parser.issue(Some(line), format!("duplicate key `{key}`"));
        } else if value.is_empty() {
            parser.issue(Some(line), format!("{key} has no value"));
        } else {
            parser.entries.push(Raw { key, value, line });
        }
    }

    let kind = match parser.get("kind") {
        None => {
            parser.issue(None, "kind required");
            None
        }
        Some((v, line)) => match v.parse::<Kind>() {
            Ok(k) => Some(k),
            Err(e) => {
                parser.issue(Some(line), e);
                None
            }
        },
    };
    let seed = parser.scalar::<u64>("seed", any);
    if parser.get("seed").is_none() {
        parser.issue(None, "seed required");
    }

    let p = parser.list::<f64>(
        "p",
        if kind.is_some_and(|k| k.is_exact()) {
            open_unit
        } else {
            closed_unit
        },
    );
    let r = parser.list::<f64>("r", half_open_unit);
    let eps = parser.list::<f64>("eps", open_unit);
    let scales = parser.list::<usize>("n", positive);
    let mut lattices = Vec::new();
    if let Some((value, line)) = parser.get("lattice") {
        for item in value.split(',').map(str::trim) {
            match parse_lattice(item) {
                Ok(l) => lattices.push(l),
                Err(e) => parser.issue(Some(line), e),
            }
        }
    }
    let trials = parser.scalar::<u64>("trials", positive);
    let outer = parser.scalar::<u64>("outer", positive);
    let inner = parser.scalar::<u64>("inner", positive);
    let trials_psi = parser.scalar::<u64>("trials_psi", positive);
    let trials_xi = parser.scalar::<u64>("trials_xi", positive);
    let workers = parser.scalar::<usize>("workers", positive);
    let aspect_max = parser
        .scalar::<f64>("aspect_max", |a| {
            if *a >= 1.0 {
                Ok(())
            } else {
                Err("must be at least 1".into())
            }
        })
        .unwrap_or(3.0);
    let timing = parser.scalar::<bool>("timing", any).unwrap_or(false);
    let bootstrap = parser
        .scalar::<usize>("bootstrap", |b| {
            if *b >= 2 {
                Ok(())
            } else {
                Err("must be at least 2".into())
            }
        })
        .unwrap_or(crate::percolation::estimate::DEFAULT_BOOTSTRAP);
    let function = parser.get("function").map(|(v, _)| v.to_string());
    let output = parser.get("output").map(|(v, _)| PathBuf::from(v));
    let id = parser.get("id").map(|(v, _)| v.to_string());

    let Some(kind) = kind else {
        return Err(ConfigError {
            issues: parser.issues,
        });
    };

    let mut need = |name: &str, present: bool| {
        if !present {
            parser.issues.push(ConfigIssue {
                line: None,
                message: format!("{name} required for kind {kind}"),
            });
        }
    };
    use Kind::*;
    match kind {
        Spectrum => need("function", function.is_some()),
        TwoScale => {
            need("function", function.is_some());
            need("r", !r.is_empty());
        }
        NsCheck => {
            need("function", function.is_some());
            need("eps", !eps.is_empty());
        }
        PercCrossing | PercPivotal => need("trials", trials.is_some()),
        PercRevealment => {
            need("r", !r.is_empty());
            need("trials_psi", trials_psi.is_some());
            need("trials_xi", trials_xi.is_some());
        }
        PercNearCritical => {
            need("r", !r.is_empty());
            need("trials", trials.is_some());
        }
        PercTwoScale => {
            need("r", !r.is_empty());
            need("outer", outer.is_some());
            need("inner", inner.is_some());
        }
        PercNoise => {
            need("eps", !eps.is_empty());
            need("trials", trials.is_some());
            if !r.is_empty() {
                need("outer", outer.is_some());
            }
        }
        RswCheck => {
            need("n", !scales.is_empty());
            need("r", !r.is_empty());
            need("trials_psi", trials_psi.is_some());
            need("trials_xi", trials_xi.is_some());
        }
        FourArm => {
            need("n", !scales.is_empty());
            need("trials", trials.is_some());
        }
    }
    if !kind.is_exact() && !kind.uses_scales() {
        need("lattice or n", !lattices.is_empty() || !scales.is_empty());
    }
    if kind.is_exact() {
        for key in ["lattice", "n"] {
            if let Some((_, line)) = parser.get(key) {
                parser.issue(Some(line), format!("{key} does not apply to kind {kind}"));
            }
        }
    } else if let Some((_, line)) = parser.get("function") {
        parser.issue(
            Some(line),
            format!("function does not apply to kind {kind}"),
        );
    }

    if !kind.is_exact() && !kind.uses_scales() {
        for &n in &scales {
            if let Ok(l) = RectLattice::square(n) {
                lattices.push(l);
            }
        }
    }
    let lattice_line = parser.get("lattice").map(|(_, l)| l);
    for l in &lattices {
        if l.aspect() > aspect_max {
            parser.issue(
                lattice_line,
                format!("lattice {l} has aspect ratio outside [1/{aspect_max}, {aspect_max}]"),
            );
        }
    }

    if !parser.issues.is_empty() {
        return Err(ConfigError {
            issues: parser.issues,
        });
    }
    let p = if p.is_empty() { vec![0.5] } else { p };
    Ok(ExperimentConfig {
        id: id.unwrap_or_else(|| kind.name().to_string()),
        kind,
        function,
        lattices,
        scales,
        p,
        r,
        eps,
        trials: trials.unwrap_or(0),
        outer: outer.unwrap_or(0),
        inner: inner.unwrap_or(0),
        trials_psi: trials_psi.unwrap_or(0),
        trials_xi: trials_xi.unwrap_or(0),
        seed: seed.unwrap_or(0),
        workers,
        output,
        aspect_max,
        timing,
        bootstrap,
    })
}
