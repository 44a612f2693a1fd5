//! `multizeta` command-line front end.

mod bench;
mod commands;
mod config;
mod parse;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use multizeta::error::ZetaError;
use serde_json::json;

use config::{CliConfig, OutputFormat, Overrides};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    /// One or more verification cases failed; the report is already printed.
    #[error("{0} verification case(s) failed")]
    Failed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failed(_) => 1,
            CliError::Zeta(e) => match e {
                ZetaError::InvalidParameter(_) | ZetaError::Region(_) => 1,
                ZetaError::PoleProximity { .. } => 2,
                ZetaError::Accuracy { .. } | ZetaError::Conditioning { .. } => 3,
                ZetaError::OffHyperplane { .. } => 4,
                ZetaError::Unsupported(_) => 5,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Failed(_) => "verification-failed",
            CliError::Zeta(e) => match e {
                ZetaError::InvalidParameter(_) => "invalid-parameter",
                ZetaError::Region(_) => "region",
                ZetaError::PoleProximity { .. } => "pole-proximity",
                ZetaError::Conditioning { .. } => "conditioning",
                ZetaError::Accuracy { .. } => "accuracy",
                ZetaError::OffHyperplane { .. } => "off-hyperplane",
                ZetaError::Unsupported(_) => "unsupported",
            },
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "multizeta", version, about = "Multiple Lerch and Hurwitz zeta functions")]
struct Cli {
    /// Plain-text key=value configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[arg(long, global = true)]
    max_k: Option<usize>,
    #[arg(long, global = true)]
    max_terms: Option<u64>,
    #[arg(long, global = true)]
    pole_tolerance: Option<f64>,
    /// Worker threads for independent verification and benchmark cases.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate L_r(λ; α; s).
    Eval(commands::EvalArgs),
    /// Residue of a multiple Hurwitz zeta function along H_{i,k}.
    Residue(commands::ResidueArgs),
    /// Report the hyperplanes that can carry poles.
    Singularities(commands::SingularityArgs),
    /// Run the randomized and exact self-check suites.
    Verify(verify::VerifyArgs),
    /// Time the evaluators on a fixed grid of points.
    Bench(bench::BenchArgs),
}

/// Shared `--depth/--lambda/--alpha` flags.
#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long)]
    pub depth: usize,
    /// Comma-separated λ_j (rationals like 1/3 are exact); zeros if omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Comma-separated α_j; zeros if omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
}

fn run(cli: Cli) -> Result<(), (CliError, OutputFormat)> {
    let overrides = Overrides {
        eps: cli.eps,
        max_k: cli.max_k,
        max_terms: cli.max_terms,
        pole_tolerance: cli.pole_tolerance,
        threads: cli.threads,
        output: cli.output,
    };
    let fallback = cli.output.unwrap_or(OutputFormat::Json);
    let cfg = CliConfig::load(cli.config.as_deref(), &overrides).map_err(|e| (e, fallback))?;
    let fmt = cfg.output.unwrap_or(OutputFormat::Json);
    let out = match cli.command {
        Command::Eval(a) => commands::cmd_eval(&a, &cfg),
        Command::Residue(a) => commands::cmd_residue(&a, &cfg),
        Command::Singularities(a) => commands::cmd_singularities(&a, &cfg),
        Command::Verify(a) => verify::cmd_verify(&a, &cfg),
        Command::Bench(a) => bench::cmd_bench(&a, &cfg),
    };
    out.map_err(|e| (e, fmt))
}

fn report_error(err: &CliError, fmt: OutputFormat) {
    match fmt {
        OutputFormat::Json => {
            let doc = json!({
                "error": { "kind": err.kind(), "message": err.to_string() },
                "exit_code": err.exit_code(),
            });
            println!("{doc}");
        }
        _ => eprintln!("error ({}): {err}", err.kind()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((err, fmt)) => {
            if !matches!(err, CliError::Failed(_)) {
                report_error(&err, fmt);
            }
            ExitCode::from(err.exit_code())
        }
    }
}
