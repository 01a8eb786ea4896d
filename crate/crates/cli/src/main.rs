use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qillum_cli::{config_hash, parse, report_point, run_figure3, run_sweep, CliError, Dataset};

#[derive(Parser)]
#[command(name = "qillum", version, about = "Microwave quantum-illumination sweeps and reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output file (default stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Master seed, overriding `[run] seed`
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Validate closed forms against the Monte-Carlo oracle
    #[arg(long, global = true)]
    mc: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate metrics over a parameter grid
    Sweep { config: PathBuf },
    /// Error probabilities versus the time-bandwidth product
    Fig3 { config: PathBuf },
    /// Detailed report at a single operating point
    Report { config: PathBuf },
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let path = match &cli.command {
        Command::Sweep { config } | Command::Fig3 { config } | Command::Report { config } => config,
    };
    let text = fs::read_to_string(path).map_err(|e| qillum_cli::ConfigError {
        line: None,
        field: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut cfg = parse(&text)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.mc_validation |= cli.mc;
    let hash = config_hash(&text);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;

    match cli.command {
        Command::Sweep { .. } => {
            let result = pool.install(|| run_sweep(&cfg, &hash))?;
            emit(&cli.out, &result.dataset.to_bytes())?;
            if result.mc_failures > 0 {
                return Err(CliError::Validation(format!(
                    "{} grid points failed the oracle check",
                    result.mc_failures
                )));
            }
        }
        Command::Fig3 { .. } => {
            let data: Dataset = run_figure3(&cfg, &hash)?;
            emit(&cli.out, &data.to_bytes())?;
        }
        Command::Report { .. } => {
            let report = report_point(&cfg)?;
            emit(&cli.out, report.text.as_bytes())?;
            if !report.failures.is_empty() {
                return Err(CliError::Validation(report.failures.join("; ")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qillum: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
