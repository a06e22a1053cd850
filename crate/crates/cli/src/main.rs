use std::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use coupled_tls_cli::commands::{self, RunOptions};
use coupled_tls_cli::scenario::Format;
use coupled_tls_cli::verify::DEFAULT_SEED;
use coupled_tls_cli::CliError;

/// Steady states, effective temperatures and entanglement of two coupled
/// two-level systems.
#[derive(Debug, Parser)]
#[command(name = "coupled-tls", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the data behind a figure (fig2, fig3a..fig3d, fig4, fig5) as CSV.
    Figure {
        id: String,
        /// Output file [default: $COUPLED_TLS_OUT_DIR/<id>.csv]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the sweep described by a scenario file.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Worker threads [default: all cores]
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a verification suite (oracles, invariants, dynamics) and print a JSON report.
    Verify {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn report(e: &CliError) {
    eprintln!("error: {e}");
    let mut source = e.source();
    while let Some(s) = source {
        eprintln!("  caused by: {s}");
        source = s.source();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Figure { id, out } => commands::figure(&id, out).map(|p| eprintln!("wrote {}", p.display())),
        Command::Run {
            scenario,
            out,
            format,
            threads,
        } => commands::run(&scenario, RunOptions { out, format, threads }).map(|p| eprintln!("wrote {}", p.display())),
        Command::Verify { suite, seed } => commands::verify(&suite, seed, std::io::stdout().lock()).map(|_| ()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report(&e);
            ExitCode::from(e.exit_code())
        }
    }
}
