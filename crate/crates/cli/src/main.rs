//! `allpay`: CSV and JSON artifacts for restricted-admission all-pay contests.

mod commands;
mod output;
mod parse;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use allpay_core::beliefs::PosteriorParams;
use allpay_core::designer::sweep_n2;
use allpay_core::oracle::{run_verify_suite, McConfig};
use allpay_core::two_stage::TwoStageSpec;
use allpay_core::{ContestSpec, CostFn, Prior, PrizeTemplate, Quadrature};
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::output::{emit, json_bytes, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<allpay_core::Error> for CliError {
    fn from(e: allpay_core::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "allpay", version, about = "All-pay contests with top-n2 admission")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

#[derive(Args)]
struct Family {
    /// `uniform` or `power:THETA`.
    #[arg(long, default_value = "uniform", value_parser = parse::prior)]
    prior: Prior,
    /// `linear` or `power:K`.
    #[arg(long, default_value = "linear", value_parser = parse::cost)]
    cost: CostFn,
    /// `wta:V1` or a comma-separated prize list.
    #[arg(long, default_value = "wta:1", value_parser = parse::prizes)]
    prizes: PrizeTemplate,
}

#[derive(Args)]
struct Sink {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Prior and marginal posterior of one admitted opponent's ability.
    Beliefs {
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        n2: u32,
        #[arg(long, value_parser = parse::unit_open)]
        a_i: f64,
        #[arg(long, default_value = "uniform", value_parser = parse::prior)]
        prior: Prior,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[command(flatten)]
        sink: Sink,
    },
    /// Equilibrium effort with and without the admission stage.
    Equilibrium {
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        n2: u32,
        #[command(flatten)]
        family: Family,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[command(flatten)]
        sink: Sink,
    },
    /// Designer metrics for every admitted count up to the capacity.
    Sweep {
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        capacity: u32,
        #[command(flatten)]
        family: Family,
        /// JSON summary path; defaults to the CSV path with a `.json` extension.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        sink: Sink,
    },
    /// Monte Carlo and brute-force verification report (JSON).
    Verify {
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deviation gain around the candidate two-stage equilibrium.
    TwoStage {
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        n2: u32,
        #[command(flatten)]
        family: Family,
        /// First-stage cost; the second-stage cost when omitted.
        #[arg(long, value_parser = parse::cost)]
        first_cost: Option<CostFn>,
        #[arg(long, default_value_t = 0.5, value_parser = parse::unit_open)]
        a: f64,
        #[arg(long, default_value_t = 0.05)]
        half_width: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        /// Curve CSV; without it only the verdict is written, to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Verdict JSON path; defaults to the curve path with a `.json` extension.
        #[arg(long)]
        verdict: Option<PathBuf>,
    },
    /// Data behind the published figures.
    Figure {
        #[arg(value_enum)]
        name: Figure,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn check_grid(grid: usize) -> Result<(), CliError> {
    if (2..=1_000_000).contains(&grid) {
        Ok(())
    } else {
        Err(CliError::Validation(format!("grid {grid} outside 2..=1000000")))
    }
}

fn write_table(t: &Table, sink: &Sink) -> Result<(), CliError> {
    let bytes = match sink.format {
        Format::Csv => t.to_csv()?,
        Format::Json => t.to_json()?,
    };
    emit(sink.out.as_deref(), &bytes)
}

fn sibling_json(explicit: Option<PathBuf>, base: Option<&Path>) -> Option<PathBuf> {
    explicit.or_else(|| base.map(|p| p.with_extension("json")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let q = Quadrature::default();
    match cli.command {
        Command::Beliefs { n1, n2, a_i, prior, grid, sink } => {
            check_grid(grid)?;
            let p = PosteriorParams::new(a_i, n1, n2, prior)?;
            write_table(&commands::belief_table(&p, grid)?, &sink)
        }
        Command::Equilibrium { n1, n2, family, grid, sink } => {
            check_grid(grid)?;
            let spec = ContestSpec::new(n1, n2, family.prizes.for_n2(n2), family.prior, family.cost)?;
            let full = family.prizes.for_n2(n1);
            write_table(&commands::equilibrium_table(&spec, &full, grid, &q)?, &sink)
        }
        Command::Sweep { n1, capacity, family, summary, sink } => {
            let r = sweep_n2(n1, capacity, &family.prizes, &family.prior, &family.cost, &q)?;
            match sink.format {
                Format::Json => emit(sink.out.as_deref(), &json_bytes(&r)?),
                Format::Csv => {
                    emit(sink.out.as_deref(), &commands::sweep_table(&r).to_csv()?)?;
                    match sibling_json(summary, sink.out.as_deref()) {
                        Some(path) => emit(Some(&path), &json_bytes(&commands::SweepSummary::of(&r))?),
                        None => Ok(()),
                    }
                }
            }
        }
        Command::Verify { samples, seed, out } => {
            let mc = McConfig::new(seed, samples);
            emit(out.as_deref(), &json_bytes(&run_verify_suite(&mc)?)?)
        }
        Command::TwoStage { n1, n2, family, first_cost, a, half_width, points, out, verdict } => {
            let mut ts = TwoStageSpec::new(n1, n2, family.prizes.for_n2(n2), family.prior, family.cost)?;
            if let Some(c) = first_cost {
                ts = ts.with_first_stage_cost(c);
            }
            let (curve, v) = commands::two_stage(&ts, a, half_width, points, &q)?;
            if let Some(path) = &out {
                emit(Some(path), &curve.to_csv()?)?;
            }
            emit(sibling_json(verdict, out.as_deref()).as_deref(), &json_bytes(&v)?)
        }
        Command::Figure { name, out } => figure(name, &out, &q),
    }
}

fn figure(name: Figure, dir: &Path, q: &Quadrature) -> Result<(), CliError> {
    let csv = |file: &str, t: &Table| emit(Some(&dir.join(file)), &t.to_csv()?);
    match name {
        Figure::Fig1 => {
            for a in [0.3, 0.5, 0.8] {
                let p = PosteriorParams::new(a, 5, 2, Prior::uniform())?;
                let (pdf, cdf) = commands::belief_tables(&p, 400)?;
                csv(&format!("fig1_pdf_a{a}.csv"), &pdf)?;
                csv(&format!("fig1_cdf_a{a}.csv"), &cdf)?;
            }
            Ok(())
        }
        Figure::Fig2 | Figure::Fig3 => {
            let (highest, total) = commands::designer_tables(20, q)?;
            match name {
                Figure::Fig2 => csv("fig2_highest_effort.csv", &highest),
                _ => csv("fig3_total_effort.csv", &total),
            }
        }
        Figure::Fig4 => csv("fig4_jump.csv", &commands::jump_table(20, 100)?),
        Figure::Fig5 => csv("fig5_j.csv", &commands::j_table(20, 200)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("allpay: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
