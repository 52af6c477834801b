mod check;
mod commands;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gale_core::json::to_pretty;
use gale_core::GeneratorSource;

use commands::{CliError, CliResult};
use report::Report;

#[derive(Parser)]
#[command(name = "gale", version, about = "Superperiodic difference operators, spectral curves and Gale duals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the main artifact here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Truncation order S of the curve series.
    #[arg(long, default_value_t = 10, global = true)]
    series_order: usize,
    /// Tolerance for numeric checks; switches `check` to numeric mode.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a superperiodic operator.
    Gen {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// quiddity | gale-of-quiddity | polygon-lift (default picks by k, n)
        #[arg(long)]
        generator: Option<GeneratorSource>,
    },
    /// Run the certificate suite on an operator file.
    Check { input: PathBuf },
    /// Emit the commuting dual and the Gale dual.
    Dual { input: PathBuf },
    /// Recover and normalize a commuting pair.
    Commuting {
        input: PathBuf,
        /// Partner operator K; without it 𝓛 is scrambled and recovered.
        #[arg(long)]
        partner: Option<PathBuf>,
        /// e.g. "alpha=3,c=2"
        #[arg(long)]
        scramble: Option<String>,
    },
    /// The 5-periodic order 2 / order 3 tower.
    Demo,
}

fn write_out(text: &str, output: Option<&Path>) -> CliResult<()> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(report: &Report, cli: &Cli) -> CliResult<()> {
    let text = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => to_pretty(&report.to_json()),
    };
    write_out(&text, cli.output.as_deref())?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Failure(format!("{}: check failure", report.title)))
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    if cli.series_order == 0 {
        return Err(CliError::Usage("--series-order must be at least 1".into()));
    }
    if let Some(t) = cli.tolerance {
        if t.is_nan() || t <= 0.0 {
            return Err(CliError::Usage("--tolerance must be positive".into()));
        }
    }
    match &cli.command {
        Command::Gen { k, n, seed, generator } => {
            let doc = commands::gen(*k, *n, *seed, *generator)?;
            write_out(&to_pretty(&doc), cli.output.as_deref())
        }
        Command::Check { input } => {
            let input = commands::read_operator(input)?;
            emit_report(&commands::check(&input, cli.series_order, cli.tolerance), cli)
        }
        Command::Dual { input } => {
            let input = commands::read_operator(input)?;
            let (doc, text) = commands::dual(&input.operator)?;
            let body = match cli.format {
                Format::Json => to_pretty(&doc),
                Format::Text if cli.output.is_some() => to_pretty(&doc),
                Format::Text => text,
            };
            write_out(&body, cli.output.as_deref())
        }
        Command::Commuting { input, partner, scramble } => {
            let l = commands::read_operator(input)?.operator;
            let k = partner.as_deref().map(commands::read_operator).transpose()?.map(|i| i.operator);
            emit_report(&commands::commuting(&l, k.as_ref(), scramble.as_deref())?, cli)
        }
        Command::Demo => emit_report(&commands::demo(), cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gale: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
