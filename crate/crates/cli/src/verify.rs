//! Self-checks runnable from the command line.

use coupled_tls::dynamics::{bloch_matrix, default_horizon, evolve, EigenState, Generator};
use coupled_tls::entangle::{concurrence_general, concurrence_x, XStateMatrix};
use coupled_tls::rates::{chb_rates, ihb_rates, ChbBathConfig, IhbBathConfig, RateSet};
use coupled_tls::sample::{self, random_model, ModelKind, RandomModel, SampleRng};
use coupled_tls::spectrum::{bare_to_eigen, eigen_to_bare};
use coupled_tls::steady::{eff_temps_eigen_chb, eff_temps_eigen_ihb, steady_nullspace, steady_state, SteadyPopulations};
use coupled_tls::Result;
use serde::Serialize;

pub const SUITES: [&str; 3] = ["oracles", "invariants", "dynamics"];
pub const DEFAULT_SEED: u64 = 20240611;
const DRAWS: usize = 32;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    pub observed: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, tolerance: f64, observed: f64) -> Self {
        Self {
            name,
            tolerance,
            observed,
            passed: observed <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

/// Runs a named suite; `None` if the name is unknown.
pub fn run(suite: &str, seed: u64) -> Option<Report> {
    let mut rng = sample::rng(seed);
    let checks = match suite {
        "oracles" => oracles(&mut rng),
        "invariants" => invariants(&mut rng),
        "dynamics" => dynamics(&mut rng),
        _ => return None,
    };
    let passed = checks.iter().all(|c| c.passed);
    Some(Report {
        suite: suite.to_string(),
        seed,
        checks,
        passed,
    })
}

fn draws(rng: &mut SampleRng, kind: ModelKind) -> Vec<RandomModel> {
    (0..DRAWS).map(|_| random_model(rng, kind)).collect()
}

/// Largest value of `f` over `items`; a physics error counts as infinite.
fn worst<T>(items: &[T], f: impl Fn(&T) -> Result<f64>) -> f64 {
    items
        .iter()
        .map(|x| f(x).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

fn kernel_deviation(m: &RandomModel) -> Result<f64> {
    let tau = m.tau33_0.unwrap_or(0.0);
    let closed = steady_state(&m.rates, tau)?;
    let kernel = steady_nullspace(&bloch_matrix(&m.rates), m.tau33_0)?;
    Ok(closed.max_deviation(&kernel))
}

fn oracles(rng: &mut SampleRng) -> Vec<Check> {
    let ihb = draws(rng, ModelKind::Ihb);
    let chb = draws(rng, ModelKind::Chb);
    let dark = draws(rng, ModelKind::Dark);

    let states: Vec<_> = (0..DRAWS).map(|_| sample::random_x_state(rng)).collect();
    let wootters = worst(&states, |m| {
        let x = XStateMatrix::from_matrix(m);
        Ok((concurrence_x(&x) - concurrence_general(&x.to_bare())?).abs())
    });

    vec![
        Check::new("ihb_closed_form_vs_kernel", 1e-12, worst(&ihb, kernel_deviation)),
        Check::new("chb_closed_form_vs_kernel", 1e-12, worst(&chb, kernel_deviation)),
        Check::new("dark_closed_form_vs_kernel", 1e-12, worst(&dark, kernel_deviation)),
        Check::new("x_state_vs_wootters_concurrence", 1e-10, wootters),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

/// Bath temperature tied to the draw's mean frequency.
fn check_temperature(m: &RandomModel) -> f64 {
    0.5 + m.params.mean_frequency()
}

fn invariants(rng: &mut SampleRng) -> Vec<Check> {
    let mut models = draws(rng, ModelKind::Ihb);
    models.extend(draws(rng, ModelKind::Chb));
    models.extend(draws(rng, ModelKind::Dark));

    let equal_bath = worst(&models[..DRAWS], |m| {
        let t = check_temperature(m);
        let rates = RateSet::Ihb(ihb_rates(&m.basis, &IhbBathConfig::equal_temperatures(t, 1.0, 0.5)?));
        let (a, b) = eff_temps_eigen_ihb(&steady_state(&rates, 0.0)?, &m.basis)?;
        Ok(rel(a.value(), t).max(rel(b.value(), t)))
    });
    let gibbs = worst(&models[DRAWS..2 * DRAWS], |m| {
        let t = check_temperature(m);
        let r = chb_rates(&m.basis, &ChbBathConfig::equal_couplings(t, 1.0, 0.5)?);
        if r.dark_channel_weight() < sample::NEAR_DARK_WEIGHT * r.total() {
            return Ok(0.0);
        }
        let temps = eff_temps_eigen_chb(&steady_state(&RateSet::Chb(r), 0.0)?, &m.basis)?;
        Ok(temps.iter().map(|x| rel(x.value(), t)).fold(0.0, f64::max))
    });
    let balance = worst(&models, |m| {
        let t = check_temperature(m);
        let r = chb_rates(&m.basis, &ChbBathConfig::equal_couplings(t, 1.0, 0.5)?);
        let e = m.basis.energies;
        let pairs = [(r.g12, r.g21, e[0] - e[1]), (r.g13, r.g31, e[0] - e[2]), (r.g24, r.g42, e[1] - e[3]), (r.g34, r.g43, e[2] - e[3])];
        Ok(pairs
            .iter()
            .filter(|(a, b, _)| a.max(*b) > 0.0)
            .map(|&(a, b, gap)| (a.min(b) / a.max(b) / (-gap.abs() / t).exp() - 1.0).abs())
            .fold(0.0, f64::max))
    });
    let column_sums = worst(&models, |m| {
        let b = bloch_matrix(&m.rates);
        let scale = b.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        Ok((0..4).map(|j| b.column(j).sum().abs() / scale).fold(0.0, f64::max))
    });
    let steady: Vec<SteadyPopulations> = models
        .iter()
        .filter_map(|m| steady_state(&m.rates, m.tau33_0.unwrap_or(0.0)).ok())
        .collect();
    let unsolved = (models.len() - steady.len()) as f64;
    let trace = worst(&steady, |s| Ok((s.pop.iter().sum::<f64>() - 1.0).abs()));
    let negativity = worst(&steady, |s| Ok(0.0 - s.pop.iter().copied().fold(0.0, f64::min)));

    let states: Vec<(EigenState, f64)> = (0..DRAWS)
        .map(|k| (sample::random_eigen_state(rng), 0.05 + 3.0 * k as f64 / DRAWS as f64))
        .collect();
    let round_trip = worst(&states, |(s, theta)| {
        let back = bare_to_eigen(&eigen_to_bare(s, *theta), *theta);
        let pop = (0..4).map(|i| (back.pop[i] - s.pop[i]).abs()).fold(0.0, f64::max);
        let coh = back.coh.iter().zip(&s.coh).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        Ok(pop.max(coh))
    });
    let xs: Vec<_> = (0..DRAWS).map(|_| sample::random_x_state(rng)).collect();
    let bounds = worst(&xs, |m| {
        let c = concurrence_x(&XStateMatrix::from_matrix(m));
        Ok((-c).max(c - 1.0).max(0.0))
    });

    vec![
        Check::new("detailed_balance", 1e-12, balance),
        Check::new("equal_baths_reproduce_temperature", 1e-9, equal_bath),
        Check::new("common_bath_is_gibbs", 1e-9, gibbs),
        Check::new("bloch_columns_sum_to_zero", 1e-13, column_sums),
        Check::new("steady_state_solved", 0.0, unsolved),
        Check::new("steady_trace", 1e-13, trace),
        Check::new("steady_populations_non_negative", 0.0, negativity),
        Check::new("eigen_bare_round_trip", 1e-12, round_trip),
        Check::new("concurrence_in_unit_interval", 0.0, bounds),
    ]
}

fn relaxation_error(m: &RandomModel, s0: &EigenState) -> Result<f64> {
    let g = Generator::new(&m.rates, &m.basis);
    let end = *evolve(s0, &g, &[0.0, default_horizon(&g)])?.last().expect("two grid points");
    let tau = match m.rates {
        RateSet::Chb(r) if r.dark_sector => s0.pop[2],
        _ => 0.0,
    };
    let closed = steady_state(&m.rates, tau)?;
    let pop = (0..4).map(|i| (end.pop[i] - closed.pop[i]).abs()).fold(0.0, f64::max);
    let coh = end.coh.iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(pop.max(coh))
}

fn dynamics(rng: &mut SampleRng) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut all = Vec::new();
    for (name, kind) in [
        ("ihb_relaxes_to_steady_state", ModelKind::Ihb),
        ("chb_relaxes_to_steady_state", ModelKind::Chb),
        ("dark_sector_relaxes_to_steady_state", ModelKind::Dark),
    ] {
        let cases: Vec<(RandomModel, EigenState)> = (0..DRAWS / 4)
            .map(|_| (random_model(rng, kind), sample::random_eigen_state(rng)))
            .collect();
        let err = worst(&cases, |(m, s0)| {
            Ok(relaxation_error(m, s0)?.max(relaxation_error(m, &EigenState::basis_state(0))?))
        });
        checks.push(Check::new(name, 1e-7, err));
        all.extend(cases);
    }
    let grid: Vec<f64> = (0..40).map(|k| 0.25 * k as f64).collect();
    let trace = worst(&all, |(m, s0)| {
        let traj = evolve(s0, &Generator::new(&m.rates, &m.basis), &grid)?;
        Ok(traj.iter().map(|(_, s)| (s.trace() - 1.0).abs()).fold(0.0, f64::max))
    });
    checks.push(Check::new("trace_preserved", 1e-10, trace));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for suite in SUITES {
            let r = run(suite, DEFAULT_SEED).unwrap();
            for c in &r.checks {
                assert!(c.passed, "{suite}/{}: {} > {}", c.name, c.observed, c.tolerance);
            }
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run("nope", 1).is_none());
    }
}
