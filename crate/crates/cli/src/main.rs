mod flow_cmd;
mod numeric;
mod report;
mod series_cmd;
mod symbolic;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use diracflow::algebra::{AlgebraError, Generator};
use diracflow::lab::LabError;
use diracflow::series::SeriesError;

#[derive(Parser, Debug)]
#[command(
    name = "diracflow",
    version,
    about = "Block-diagonalization series and their numerical checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Write the canonical series terms, one file per order.
    Series,
    /// Run the exact identity suite.
    VerifySymbolic,
    /// Run the matrix-model checks and convergence sweeps.
    VerifyNumeric,
    /// Integrate the double-bracket flow and write its trajectory.
    Flow,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    E,
    F,
}

impl From<Field> for Generator {
    fn from(f: Field) -> Self {
        match f {
            Field::E => Generator::E,
            Field::F => Generator::F,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum What {
    /// Generator of the beta flow, `omega_n.txt`.
    #[value(name = "omega")]
    Omega,
    /// Magnus-type generator as a function of s, `Omega_s_n.txt`.
    #[value(name = "Omega")]
    OmegaS,
    /// Its limit at infinity, `Omega_inf_n.txt`.
    #[value(name = "Omega_inf")]
    OmegaInf,
    /// Static block-diagonal Hamiltonian, `h_n.txt`.
    #[value(name = "h")]
    H,
    /// Limit of the time-dependent flow in the generator F, `hU_n.txt`.
    #[value(name = "hU")]
    HU,
    All,
}

#[derive(clap::Args, Debug, Clone)]
pub struct RunConfig {
    #[arg(long, global = true, default_value_t = 6)]
    pub max_order: u32,
    #[arg(long, global = true, value_enum, default_value_t = Field::E)]
    pub field: Field,
    #[arg(long, global = true, default_value_t = 8)]
    pub dim: usize,
    /// Model seed; DIRACFLOW_SEED is used when the flag is absent.
    #[arg(long, global = true, env = "DIRACFLOW_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [0.2, 0.1, 0.05, 0.025])]
    pub kappa_list: Vec<f64>,
    /// Coupling of the single-model checks and of the flow.
    #[arg(long, global = true, default_value_t = 0.2)]
    pub kappa: f64,
    #[arg(long, global = true, default_value_t = 6.0)]
    pub s_max: f64,
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub step: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output_format: OutputFormat,
    /// Report file for the verify commands; output directory for `series` and `flow`.
    #[arg(long, global = true)]
    pub output_path: Option<PathBuf>,
    /// Series family for `series`.
    #[arg(long, global = true, value_enum, default_value_t = What::All)]
    pub what: What,
    /// Overwrite existing series files that differ from the computed terms.
    #[arg(long, global = true)]
    pub bless: bool,
    /// Run only the named check.
    #[arg(long, global = true)]
    pub only: Option<String>,
    /// Order parameter for `--only cancellation` and `--only nested_ad_smallness`.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Add a spurious term to the static sixth-order result before the discrepancy check.
    #[arg(long, global = true)]
    pub perturb: bool,
    /// Use models with vanishing even part and run the closed-form special-class checks.
    #[arg(long, global = true)]
    pub special_class: bool,
}

/// Exit codes: 1 failed check or other error, 2 non-convergent coefficient, 3 degenerate model.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<LabError>() {
            match e {
                LabError::Degenerate { .. } => return 3,
                LabError::NonConvergent => return 2,
                _ => {}
            }
        }
        let algebra = cause.downcast_ref::<AlgebraError>().or_else(|| {
            match cause.downcast_ref::<SeriesError>() {
                Some(SeriesError::Algebra(a)) => Some(a),
                _ => None,
            }
        });
        if matches!(
            algebra,
            Some(AlgebraError::NonConvergent { .. } | AlgebraError::NonConvergentTerm { .. })
        ) {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Series => series_cmd::run(&cli.config),
        Command::VerifySymbolic => symbolic::run(&cli.config),
        Command::VerifyNumeric => numeric::run(&cli.config),
        Command::Flow => flow_cmd::run(&cli.config),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
