//! Config-driven experiment runs.

pub mod config;
pub mod diagnostic;
pub mod run;

pub use config::{parse_config, ConfigError, ConfigIssue, ExperimentConfig, Kind};
pub use diagnostic::{
    diagnostic_revealment_criterion, DiagnosticEntry, RevealmentDiagnostic, Trend,
};
pub use run::{
    fmt_num, run, run_with_workers, write_csv, Params, Row, CSV_HEADER, EXACT_MAX_EDGES,
};
