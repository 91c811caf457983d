use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use noise_lab::cube::{build_function, fourier_transform, Bias};
use noise_lab::experiments::{fmt_num, parse_config, run_with_workers, write_csv};

#[derive(Parser)]
#[command(
    name = "noise-lab",
    version,
    about = "Biased Fourier analysis and two-scale percolation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write CSV rows.
    Run {
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        /// Output file; overrides `output` in the config. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact one-shot query on a function descriptor.
    Fn {
        descriptor: String,
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Spectrum,
    Variance,
    Levels,
}

const CONFIG_ERROR: u8 = 1;
const ROW_ERRORS: u8 = 2;

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            config,
            workers,
            out,
        } => run(config, workers, out),
        Command::Fn { descriptor, op, p } => exact_query(&descriptor, op, p),
    }
}

fn run(path: PathBuf, workers: Option<usize>, out: Option<PathBuf>) -> ExitCode {
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: config error\n{e}", path.display());
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    let rows = match run_with_workers(&cfg, workers) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    let written = match out.or(cfg.output.clone()) {
        Some(p) => fs::File::create(&p).and_then(|f| write_csv(&rows, io::BufWriter::new(f))),
        None => write_csv(&rows, io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("error: writing results: {e}");
        return ExitCode::FAILURE;
    }
    let failed = rows.iter().filter(|r| r.is_error()).count();
    if failed > 0 {
        eprintln!("{failed} of {} rows failed", rows.len());
        return ExitCode::from(ROW_ERRORS);
    }
    ExitCode::SUCCESS
}

fn exact_query(descriptor: &str, op: Op, p: f64) -> ExitCode {
    let result = Bias::new(p).and_then(|bias| {
        let f = build_function(descriptor)?;
        let s = fourier_transform(&f, bias);
        let table: Vec<(String, f64)> = match op {
            Op::Variance => vec![("variance".into(), s.variance())],
            Op::Levels => s
                .level_weights()
                .into_iter()
                .enumerate()
                .map(|(k, w)| (k.to_string(), w))
                .collect(),
            Op::Spectrum => s
                .coeffs()
                .iter()
                .enumerate()
                .map(|(set, &c)| (set_label(set, f.n()), c))
                .collect(),
        };
        Ok(table)
    });
    match result {
        Ok(table) => {
            let mut out = io::stdout().lock();
            for line in aligned(&table) {
                if writeln!(out, "{line}").is_err() {
                    return ExitCode::FAILURE;
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CONFIG_ERROR)
        }
    }
}

fn set_label(set: usize, n: usize) -> String {
    let items: Vec<String> = (0..n)
        .filter(|i| set >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

/// Labels left-aligned, numbers lined up on the decimal point.
fn aligned(table: &[(String, f64)]) -> Vec<String> {
    let nums: Vec<String> = table.iter().map(|(_, v)| fmt_num(*v)).collect();
    let split = |s: &str| s.find(['.', 'e']).unwrap_or(s.len());
    let label_w = table.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    let int_w = nums.iter().map(|s| split(s)).max().unwrap_or(0);
    table
        .iter()
        .zip(&nums)
        .map(|((label, _), num)| {
            let pad = int_w - split(num);
            format!("{label:<label_w$}  {}{num}", " ".repeat(pad))
                .trim_end()
                .to_string()
        })
        .collect()
}
