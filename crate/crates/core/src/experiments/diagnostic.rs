//! Revealment decay diagnostic.
//!
//! This only reports numbers. A decreasing sequence at desk-scale sizes is
//! neither necessary nor sufficient for the limit statement it is modelled
//! on.

use crate::error::{Error, Result};
use crate::stats::Estimate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Decreasing,
    Increasing,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticEntry {
    pub n: usize,
    pub delta: Estimate,
    /// `δ̂ (ln n)^6`, with the standard error scaled alike.
    pub scaled: Estimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RevealmentDiagnostic {
    /// Sorted by `n`.
    pub entries: Vec<DiagnosticEntry>,
    /// Direction of the point values of `scaled`, ignoring error bars.
    pub trend: Trend,
}

impl RevealmentDiagnostic {
    pub const LABEL: &'static str =
        "diagnostic only: finite-size revealment scaled by (ln n)^6, not evidence of a limit";
}

pub fn diagnostic_revealment_criterion(
    points: &[(usize, Estimate)],
) -> Result<RevealmentDiagnostic> {
    let mut entries: Vec<DiagnosticEntry> = points
        .iter()
        .map(|&(n, delta)| {
            let factor = (n as f64).ln().powi(6);
            DiagnosticEntry {
                n,
                delta,
                scaled: Estimate {
                    value: delta.value * factor,
                    stderr: delta.stderr * factor,
                },
            }
        })
        .collect();
    entries.sort_by_key(|e| e.n);
    entries.dedup_by_key(|e| e.n);
    if entries.len() < 2 {
        return Err(Error::InvalidParameter(
            "revealment diagnostic needs at least two lattice sizes".into(),
        ));
    }
    let values: Vec<f64> = entries.iter().map(|e| e.scaled.value).collect();
    let trend = if values.windows(2).all(|w| w[1] < w[0]) {
        Trend::Decreasing
    } else if values.windows(2).all(|w| w[1] > w[0]) {
        Trend::Increasing
    } else {
        Trend::Mixed
    };
    Ok(RevealmentDiagnostic { entries, trend })
}
