//! `quditgates`: tables and per-operation reports for diagonal third-level
//! qudit gates.
//!
//! Exit codes: 0 ok, 1 usage or configuration error, 2 domain error,
//! 3 self-check mismatch.

mod commands;
mod matrix_file;
mod report;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quditgates::hierarchy::GateParams;
use quditgates::hull::DistillConfig;
use quditgates::weylheis::PrimeDim;
use quditgates::Error;

#[derive(Parser, Debug)]
#[command(name = "quditgates", version, about = "Diagonal third-level Clifford-hierarchy gates for qudits")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Qudit dimension (2, 3, 5 or 7). Tables default to all four.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Gate labels `z,g,e`; defaults to the dimension's reference gate.
    #[arg(long, global = true, allow_hyphen_values = true)]
    params: Option<String>,
    /// Absolute tolerance for --self-check comparisons (fractions, not percent).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Distillation-threshold config; the shipped defaults are used otherwise.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Compare computed table cells with the published values; exit 3 on mismatch.
    #[arg(long, global = true)]
    self_check: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group structure of the diagonal gates.
    Table1,
    /// Robustness thresholds and negativities of the reference gates.
    Table2(tables::Table2Args),
    /// Lower and upper noise bounds for universality.
    Table3(tables::Table3Args),
    /// Exponent vector and basic data of one gate.
    Gate,
    /// Decide whether a matrix file holds a diagonal third-level gate.
    Verify {
        /// Matrix file, one row per line, entries `a+bi`.
        matrix: PathBuf,
    },
    /// Stabilizer negativity of the gate's equatorial state.
    Negativity(commands::NegativityArgs),
    /// Noise robustness of a gate or its state.
    Threshold(commands::ThresholdArgs),
    /// Map a gate noise rate to the injected-state noise rate.
    Dilute(commands::DiluteArgs),
    /// Teleport the gate onto an input state.
    Inject(commands::InjectArgs),
    /// Spectra of the edge facets.
    Spectra,
    /// Element orders, invariant factors and the M gate.
    Group,
}

/// Validated global settings.
#[derive(Debug)]
pub struct RunConfig {
    pub p: Option<PrimeDim>,
    pub params: Option<String>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub format: Format,
    pub config_path: Option<PathBuf>,
    pub self_check: bool,
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
    SelfCheck(Vec<String>),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Domain(_) => 2,
            Failure::SelfCheck(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::MissingConfig(_) | Error::InvalidArgument(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl RunConfig {
    fn from_args(g: GlobalArgs) -> Result<Self, Failure> {
        let p = g.p.map(PrimeDim::new).transpose()?;
        if let Some(tol) = g.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
            }
        }
        Ok(Self {
            p,
            params: g.params,
            tol: g.tol,
            seed: g.seed,
            format: g.format,
            config_path: g.config,
            self_check: g.self_check,
        })
    }

    pub fn dim(&self) -> Result<PrimeDim, Failure> {
        self.p.ok_or_else(|| Failure::Usage("--p is required".into()))
    }

    /// Dimensions a table covers.
    pub fn dims(&self) -> Vec<PrimeDim> {
        match self.p {
            Some(d) => vec![d],
            None => PrimeDim::SUPPORTED.iter().map(|&p| PrimeDim::new(p).expect("supported")).collect(),
        }
    }

    pub fn gate(&self, d: PrimeDim) -> Result<GateParams, Failure> {
        match &self.params {
            Some(s) => Ok(GateParams::parse(d, s)?),
            None => Ok(GateParams::reference(d)),
        }
    }

    pub fn distill_config(&self) -> Result<DistillConfig, Failure> {
        match &self.config_path {
            None => Ok(DistillConfig::shipped()),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                Ok(text.parse()?)
            }
        }
    }
}

fn run(cli: Cli) -> Result<report::Report, Failure> {
    let cfg = RunConfig::from_args(cli.global)?;
    let start = Instant::now();
    let mut rep = match cli.command {
        Command::Table1 => tables::table1(&cfg)?,
        Command::Table2(a) => tables::table2(&cfg, &a)?,
        Command::Table3(a) => tables::table3(&cfg, &a)?,
        Command::Gate => commands::gate(&cfg)?,
        Command::Verify { matrix } => commands::verify(&cfg, &matrix)?,
        Command::Negativity(a) => commands::negativity(&cfg, &a)?,
        Command::Threshold(a) => commands::threshold(&cfg, &a)?,
        Command::Dilute(a) => commands::dilute(&cfg, &a)?,
        Command::Inject(a) => commands::inject(&cfg, &a)?,
        Command::Spectra => commands::spectra(&cfg)?,
        Command::Group => commands::group(&cfg)?,
    };
    rep.wall_time = start.elapsed().as_secs_f64();
    Ok(rep)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let format = cli.global.format;
    match run(cli) {
        Ok(rep) => {
            print!("{}", rep.render(format));
            if rep.mismatches.is_empty() {
                ExitCode::SUCCESS
            } else {
                let failure = Failure::SelfCheck(rep.mismatches);
                report_failure(&failure);
                ExitCode::from(failure.code())
            }
        }
        Err(failure) => {
            report_failure(&failure);
            ExitCode::from(failure.code())
        }
    }
}

fn report_failure(f: &Failure) {
    match f {
        Failure::Usage(msg) => eprintln!("error: {msg}"),
        Failure::Domain(msg) => eprintln!("error: {msg}"),
        Failure::SelfCheck(misses) => {
            for m in misses {
                eprintln!("self-check mismatch: {m}");
            }
        }
    }
}
