//! The three subcommands, independent of argument parsing.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};
use crate::figures;
use crate::output;
use crate::scenario::{self, Format, Scenario};
use crate::sweep;
use crate::verify;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "COUPLED_TLS_OUT_DIR";

fn default_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn write_table(path: &Path, format: Format, scenario: &Scenario, threads: Option<usize>) -> Result<()> {
    let table = match threads {
        None => sweep::run(scenario)?,
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| sweep::run(scenario))?,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    output::write(&mut w, format, scenario, &table).map_err(|e| CliError::io(path, e))?;
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Writes a bundled figure as CSV; returns the path written.
pub fn figure(id: &str, out: Option<PathBuf>) -> Result<PathBuf> {
    let text = figures::scenario_text(id).ok_or_else(|| {
        let known: Vec<_> = figures::ids().collect();
        CliError::Usage(format!("unknown figure `{id}` (known: {})", known.join(", ")))
    })?;
    let scenario = scenario::parse(text)?;
    let path = out.unwrap_or_else(|| default_dir().join(format!("{id}.csv")));
    write_table(&path, Format::Csv, &scenario, None)?;
    Ok(path)
}

pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

/// Runs a scenario file; command-line options override its `[output]` table.
pub fn run(path: &Path, opts: RunOptions) -> Result<PathBuf> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let scenario = scenario::parse(&text)?;
    let file_out = scenario.output.clone().unwrap_or_default();
    let format = opts.format.or(file_out.format).unwrap_or_default();
    let out = opts.out.or(file_out.path).unwrap_or_else(|| {
        let stem = scenario
            .name
            .clone()
            .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
            .unwrap_or_else(|| "scenario".into());
        default_dir().join(format!("{stem}.{}", extension(format)))
    });
    write_table(&out, format, &scenario, opts.threads)?;
    Ok(out)
}

/// Prints the JSON report to `out`; fails if any check fails.
pub fn verify<W: Write>(suite: &str, seed: u64, mut out: W) -> Result<verify::Report> {
    let report = verify::run(suite, seed).ok_or_else(|| {
        CliError::Usage(format!("unknown suite `{suite}` (known: {})", verify::SUITES.join(", ")))
    })?;
    let stdout = PathBuf::from("<stdout>");
    serde_json::to_writer_pretty(&mut out, &report).map_err(|e| CliError::io(&stdout, e.into()))?;
    writeln!(out).map_err(|e| CliError::io(&stdout, e))?;
    if report.passed {
        Ok(report)
    } else {
        Err(CliError::Verify {
            suite: suite.to_string(),
            failed: report.failed(),
        })
    }
}
