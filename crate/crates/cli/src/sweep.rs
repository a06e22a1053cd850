//! Steady-state observables over the points of a scenario.

use coupled_tls::entangle::steady_concurrence;
use coupled_tls::steady::{steady_state, temperature_report, EigenTemperatures, Regime, Temperature};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::scenario::{BathKind, Model, Scenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(&'static str),
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

fn temperature_columns(out: &mut Vec<String>, names: &[&str]) {
    for n in names {
        out.push(n.to_string());
        out.push(format!("{n}_tag"));
    }
}

pub fn columns(scenario: &Scenario) -> Vec<String> {
    let mut c = Vec::new();
    if let Some(s) = &scenario.series {
        c.push(format!("series_{}", s.variable.key()));
    }
    c.push(format!("sweep_{}", scenario.sweep.variable.key()));
    for n in ["omega1", "omega2", "xi", "theta", "regime", "p1", "p2", "p3", "p4"] {
        c.push(n.into());
    }
    match scenario.bath_kind {
        BathKind::Ihb => temperature_columns(&mut c, &["t_eps1", "t_eps2"]),
        BathKind::Chb => temperature_columns(&mut c, &["t12", "t13", "t34", "t24"]),
    }
    c.push("sigma_z1".into());
    c.push("sigma_z2".into());
    temperature_columns(&mut c, &["t_omega1", "t_omega2"]);
    c.push("concurrence".into());
    c
}

fn push_temperature(row: &mut Vec<Cell>, t: Option<Temperature>) {
    match t {
        Some(t) => {
            row.push(Cell::Num(t.value()));
            row.push(Cell::Text(t.tag()));
        }
        None => {
            row.push(Cell::Empty);
            row.push(Cell::Empty);
        }
    }
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Ihb => "ihb",
        Regime::Chb => "chb",
        Regime::Dark => "dark",
        Regime::Kernel => "kernel",
    }
}

/// Observables at one point, without the leading sweep columns.
pub fn observables(m: &Model) -> coupled_tls::Result<Vec<Cell>> {
    let steady = steady_state(&m.rates, m.tau33_0)?;
    let report = temperature_report(&steady, &m.params)?;
    let mut row = vec![
        Cell::Num(m.params.omega1()),
        Cell::Num(m.params.omega2()),
        Cell::Num(m.params.xi()),
        Cell::Num(m.basis.theta),
        Cell::Text(regime_name(steady.regime)),
    ];
    row.extend(steady.pop.iter().map(|&p| Cell::Num(p)));
    match report.eigen {
        EigenTemperatures::Ihb { eps1, eps2 } => {
            push_temperature(&mut row, Some(eps1));
            push_temperature(&mut row, Some(eps2));
        }
        EigenTemperatures::Chb { t12, t13, t34 } => {
            push_temperature(&mut row, Some(t12));
            push_temperature(&mut row, Some(t13));
            push_temperature(&mut row, Some(t34));
            push_temperature(&mut row, None);
        }
        EigenTemperatures::Dark { t12, t24 } => {
            push_temperature(&mut row, Some(t12));
            push_temperature(&mut row, None);
            push_temperature(&mut row, None);
            push_temperature(&mut row, Some(t24));
        }
    }
    row.push(Cell::Num(report.bare.sigma_z.0));
    row.push(Cell::Num(report.bare.sigma_z.1));
    push_temperature(&mut row, Some(report.bare.t1));
    push_temperature(&mut row, Some(report.bare.t2));
    row.push(Cell::Num(steady_concurrence(&steady, m.basis.theta)));
    Ok(row)
}

/// Evaluates every point in parallel; rows keep the scenario order.
pub fn run(scenario: &Scenario) -> Result<Table> {
    let rows = scenario
        .points()
        .par_iter()
        .map(|p| {
            let physics = |source| CliError::Physics {
                point: scenario.label(p),
                source,
            };
            let model = scenario.model(p).map_err(physics)?;
            let mut row: Vec<Cell> = p.series.map(Cell::Num).into_iter().collect();
            row.push(Cell::Num(p.value));
            row.extend(observables(&model).map_err(physics)?);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        columns: columns(scenario),
        rows,
    })
}
