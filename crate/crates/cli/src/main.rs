//! `nctorus` command line.
//!
//! Exit status: 0 when every check passes, 1 when a check (or a tolerance
//! guard inside the library) fails, 2 for configuration, input or I/O errors.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nctorus::Error;

use commands::ExportKind;
use config::RunConfig;
use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "nctorus",
    version,
    about = "Gauge theory numerics on the noncommutative 3-torus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

/// Settings mirrored one-to-one by config-file keys; flags win over the file.
#[derive(Args, Debug, Default)]
struct Options {
    /// INI-style config file (`key = value` lines under `[section]` headers)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Emit the report as JSON
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta12: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta13: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta23: Option<f64>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Fourier truncation K of the projection
    #[arg(long, global = true)]
    trunc: Option<usize>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Matrix size N
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Chern-Simons coupling
    #[arg(long, global = true, allow_hyphen_values = true)]
    k: Option<f64>,
    /// Random cases drawn by gauge-check
    #[arg(long, global = true)]
    cases: Option<usize>,
    /// Largest power n in the winding table
    #[arg(long, global = true)]
    max_power: Option<u32>,
    /// Eigenvalue scale factor for the residue
    #[arg(long, global = true)]
    scale: Option<f64>,
    /// Comma-separated heat-trace times
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    tol_winding: Option<f64>,
    #[arg(long, global = true)]
    tol_chern: Option<f64>,
    #[arg(long, global = true)]
    tol_trace: Option<f64>,
    #[arg(long, global = true)]
    tol_gauge: Option<f64>,
    #[arg(long, global = true)]
    tol_residue: Option<f64>,
    #[arg(long, global = true)]
    tol_projection: Option<f64>,
    #[arg(long, global = true)]
    tol_unitary: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Winding numbers of powers of the Powers-Rieffel unitary
    Winding,
    /// Trace, idempotency defect and Chern number of the projection
    Projection,
    /// Gauge-variation identity on seeded random potentials
    GaugeCheck,
    /// Heat-trace residue of the flat Laplacian
    Residue {
        /// Write (t, heat_trace) pairs as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Log-spaced CSV points across the grid range (default: the grid itself)
        #[arg(long, default_value_t = 0)]
        csv_points: usize,
    },
    /// Seeded invariant suites
    Selftest,
    /// Write an element or potential file
    Export {
        #[arg(value_enum)]
        kind: ExportKind,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Read an element (or potential manifest) and summarize it
    Import {
        path: PathBuf,
        /// Multiply by a second element before summarizing
        #[arg(long)]
        with: Option<PathBuf>,
        /// Treat the path as a potential manifest
        #[arg(long)]
        potential: bool,
    },
}

impl Options {
    fn run_config(&self) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.merge_file(path)?;
        }
        let mut set = |key: &str, value: Option<String>| match value {
            Some(v) => cfg.set(key, &v),
            None => Ok(()),
        };
        let s = |x: Option<f64>| x.map(|v| format!("{v:?}"));
        set("theta12", s(self.theta12))?;
        set("theta13", s(self.theta13))?;
        set("theta23", s(self.theta23))?;
        set("alpha", s(self.alpha))?;
        set("eps", s(self.eps))?;
        set("trunc", self.trunc.map(|v| v.to_string()))?;
        set("samples", self.samples.map(|v| v.to_string()))?;
        set("n", self.n.map(|v| v.to_string()))?;
        set("k", s(self.k))?;
        set("cases", self.cases.map(|v| v.to_string()))?;
        set("max_power", self.max_power.map(|v| v.to_string()))?;
        set("scale", s(self.scale))?;
        set("grid", self.grid.clone())?;
        set("seed", self.seed.map(|v| v.to_string()))?;
        set("tol_winding", s(self.tol_winding))?;
        set("tol_chern", s(self.tol_chern))?;
        set("tol_trace", s(self.tol_trace))?;
        set("tol_gauge", s(self.tol_gauge))?;
        set("tol_residue", s(self.tol_residue))?;
        set("tol_projection", s(self.tol_projection))?;
        set("tol_unitary", s(self.tol_unitary))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(value) = std::env::var("NCTORUS_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Config(format!("NCTORUS_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

fn run(cli: &Cli) -> Result<Report, Error> {
    configure_threads()?;
    let cfg = cli.opts.run_config()?;
    match &cli.command {
        Command::Winding => commands::winding(&cfg),
        Command::Projection => commands::projection(&cfg),
        Command::GaugeCheck => commands::gauge_check(&cfg),
        Command::Residue { csv, csv_points } => commands::residue(&cfg, csv.as_deref(), *csv_points),
        Command::Selftest => commands::selftest(&cfg),
        Command::Export { kind, output } => commands::export(&cfg, *kind, output),
        Command::Import { path, with, potential } => commands::import(path, with.as_deref(), *potential),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let out = if cli.opts.json {
                report.to_json()
            } else {
                report.to_text()
            };
            print!("{out}");
            if report.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Precondition { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
