//! CSV and JSON writers for sweep tables.

use std::io::Write;

use serde_json::{json, Value};

use crate::scenario::{Format, Scenario};
use crate::sweep::{Cell, Table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Num(x) => x.to_string(),
        Cell::Text(s) => s.to_string(),
        Cell::Empty => String::new(),
    }
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Num(x) if x.is_finite() => json!(x),
        Cell::Num(_) | Cell::Empty => Value::Null,
        Cell::Text(s) => json!(s),
    }
}

/// The scenario as TOML, used as provenance in both formats.
pub fn scenario_toml(scenario: &Scenario) -> String {
    toml::to_string(scenario).expect("scenario serializes")
}

pub fn write_csv<W: Write>(out: W, scenario: &Scenario, table: &Table) -> std::io::Result<()> {
    let mut out = out;
    writeln!(out, "# coupled-tls {VERSION}")?;
    for line in scenario_toml(scenario).lines() {
        if line.is_empty() {
            writeln!(out, "#")?;
        } else {
            writeln!(out, "# {line}")?;
        }
    }
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(cell_text))?;
    }
    w.flush()
}

pub fn to_json(scenario: &Scenario, table: &Table) -> Value {
    json!({
        "version": VERSION,
        "scenario": scenario_toml(scenario),
        "columns": table.columns,
        "rows": table
            .rows
            .iter()
            .map(|r| r.iter().map(cell_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn write<W: Write>(mut out: W, format: Format, scenario: &Scenario, table: &Table) -> std::io::Result<()> {
    match format {
        Format::Csv => write_csv(out, scenario, table),
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &to_json(scenario, table))?;
            writeln!(out)
        }
    }
}
