//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fail.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use coupled_tls::dynamics::phenomenological::phenomenological_sigma_z;
use coupled_tls::dynamics::{bloch_matrix, default_horizon, evolve, EigenState, Generator};
use coupled_tls::entangle::{
    concurrence_general, concurrence_x, steady_concurrence, threshold_temperature, BathTemplate, XStateMatrix,
};
use coupled_tls::rates::{chb_rates, ihb_rates, ChbBathConfig, ChbRateSet, IhbBathConfig, RateSet};
use coupled_tls::sample::{self, random_model, ModelKind, RandomModel};
use coupled_tls::spectrum::{build_eigenbasis, EigenBasis, SystemParams};
use coupled_tls::steady::scans::{
    bare_temperatures_ihb, counterintuitive_scan, crossing_angles, dispersive_prediction_check,
    eigen_temperature_gap, exclude_resonance, ihb_point, linspace, valid_theta_range, THETA_MIN,
};
use coupled_tls::steady::{
    bare_temperatures_from_sigma_z, eff_temps_bare, eff_temps_eigen_chb, eff_temps_eigen_ihb, steady_dark,
    steady_nullspace, steady_state, SteadyPopulations,
};
use coupled_tls::Result;

const OMEGA_M: f64 = 20.0;
const FIG2_XI: f64 = 10.0;
const FIG3_XI: f64 = 0.1;
const FIG5_XI: f64 = 0.1;
const FIG5_T: f64 = 10.0;
const FIG3_PANELS: [(f64, f64); 4] = [(10.0, 10.0), (10.000001, 10.0), (10.000004, 10.0), (10.00002, 10.0)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn fig2_baths(t1: f64, t2: f64) -> IhbBathConfig {
    IhbBathConfig::new(t1, t2, 1.0, 1.0).expect("valid baths")
}

fn fig5_point(theta: f64) -> Result<(SystemParams, SteadyPopulations)> {
    let params = SystemParams::from_mixing_angle(OMEGA_M, FIG5_XI, theta)?;
    let basis = build_eigenbasis(&params)?;
    let bath = ChbBathConfig::equal_couplings(FIG5_T, 1.0, 1.0)?;
    let steady = steady_state(&RateSet::Chb(chb_rates(&basis, &bath)), 0.0)?;
    Ok((params, steady))
}

fn fig5_grid(points: usize) -> Vec<f64> {
    exclude_resonance(&linspace(THETA_MIN, PI - THETA_MIN, points))
}

fn c1_equal_ihb() -> Result<Outcome> {
    let (lo, hi) = valid_theta_range(OMEGA_M, FIG2_XI, THETA_MIN)?;
    let baths = fig2_baths(10.0, 10.0);
    let mut worst = 0.0f64;
    for theta in linspace(lo, hi, 50) {
        let (params, steady) = ihb_point(OMEGA_M, FIG2_XI, theta, &baths)?;
        let (a, b) = eff_temps_eigen_ihb(&steady, &build_eigenbasis(&params)?)?;
        worst = worst.max(rel(a.value(), 10.0)).max(rel(b.value(), 10.0));
    }
    outcome(worst < 1e-9, format!("max rel dev {worst:.2e} (tol 1e-9), 50 angles in [{lo:.4}, {hi:.4}]"))
}

fn c2_bounds_and_crossing() -> Result<Outcome> {
    let (lo, hi) = valid_theta_range(OMEGA_M, FIG2_XI, THETA_MIN)?;
    let baths = fig2_baths(5.0, 10.0);
    let mut in_bounds = true;
    for theta in linspace(lo, hi, 2001) {
        let (params, steady) = ihb_point(OMEGA_M, FIG2_XI, theta, &baths)?;
        let (a, b) = eff_temps_eigen_ihb(&steady, &build_eigenbasis(&params)?)?;
        in_bounds &= [a.value(), b.value()].iter().all(|t| (5.0..=10.0).contains(t));
    }
    let roots = crossing_angles(OMEGA_M, FIG2_XI, &baths)?;
    let gap = eigen_temperature_gap(OMEGA_M, FIG2_XI, roots[0], &baths)?.abs();
    outcome(
        in_bounds && gap < 1e-8,
        format!("bounds [5, 10] held: {in_bounds}; theta0 = {:.10}, |gap| {gap:.2e} (tol 1e-8)", roots[0]),
    )
}

fn c3_resonant_equality() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for &(t1, t2) in &FIG3_PANELS {
        let bare = bare_temperatures_ihb(OMEGA_M, FIG3_XI, FRAC_PI_2, &fig2_baths(t1, t2))?;
        worst = worst.max(rel(bare.t1.value(), bare.t2.value()));
    }
    outcome(worst < 1e-9, format!("max rel dev {worst:.2e} (tol 1e-9) over 4 panels"))
}

fn c4_counterintuitive() -> Result<Outcome> {
    let grid = linspace(THETA_MIN, PI - THETA_MIN, 2001);
    let mut measures = Vec::new();
    for &(t1, t2) in &FIG3_PANELS {
        let r = counterintuitive_scan(OMEGA_M, FIG3_XI, &fig2_baths(t1, t2), &grid)?;
        measures.push(r.measure);
    }
    let nonempty = measures[0] > 0.0;
    let decreasing = measures.windows(2).all(|w| w[1] < w[0]);
    let list: Vec<String> = measures.iter().map(|m| format!("{m:.4}")).collect();
    outcome(nonempty && decreasing, format!("region measures [{}]", list.join(", ")))
}

fn c5_dispersive() -> Result<Outcome> {
    let thetas = [0.05, 0.1, 3.0, 3.09];
    let mut worst = 0.0f64;
    for &(t1, t2) in &FIG3_PANELS {
        let rep = dispersive_prediction_check(OMEGA_M, FIG3_XI, &fig2_baths(t1, t2), &thetas)?;
        worst = worst.max(rep.max_deviation);
    }
    outcome(worst < 1e-2, format!("max rel dev {worst:.2e} (tol 1e-2)"))
}

fn c6_chb_thermal() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let grid = fig5_grid(50);
    for &theta in &grid {
        let (params, steady) = fig5_point(theta)?;
        for t in eff_temps_eigen_chb(&steady, &build_eigenbasis(&params)?)? {
            worst = worst.max(rel(t.value(), FIG5_T));
        }
    }
    outcome(worst < 1e-9, format!("max rel dev {worst:.2e} (tol 1e-9), {} angles", grid.len()))
}

fn c7_chb_ordering() -> Result<Outcome> {
    let mut violations = Vec::new();
    let grid = fig5_grid(2001);
    for &theta in &grid {
        let (params, steady) = fig5_point(theta)?;
        let bare = eff_temps_bare(&steady, &params)?;
        let (a, b) = (bare.t1.value(), bare.t2.value());
        let ok = if theta < FRAC_PI_2 { a < b } else { a > b };
        if !ok {
            violations.push((theta, a, b));
        }
    }
    let detail = match violations.first() {
        None => format!("ordering held at all {} angles", grid.len()),
        Some(&(theta, a, b)) => format!(
            "{} of {} angles violate; first at theta = {theta:.4}: T(w1) = {a:.9}, T(w2) = {b:.9}",
            violations.len(),
            grid.len()
        ),
    };
    outcome(violations.is_empty(), detail)
}

fn dark_rates() -> Result<(EigenBasis, ChbRateSet)> {
    let params = SystemParams::from_mixing_angle(OMEGA_M, FIG5_XI, FRAC_PI_2)?;
    let basis = build_eigenbasis(&params)?;
    let rates = chb_rates(&basis, &ChbBathConfig::equal_couplings(FIG5_T, 1.0, 1.0)?);
    Ok((basis, rates))
}

fn c8_anti_thermalization() -> Result<Outcome> {
    let (basis, rates) = dark_rates()?;
    let g = Generator::new(&RateSet::Chb(rates), &basis);
    let grid = linspace(0.0, 100.0, 101);
    let traj = evolve(&EigenState::basis_state(2), &g, &grid)?;
    let frozen = traj.states.iter().map(|s| (s.pop[2] - 1.0).abs()).fold(0.0, f64::max);

    let mut rng = sample::rng(8);
    let mut s0 = EigenState::from_matrix(&sample::random_density(&mut rng));
    let rest = s0.pop[0] + s0.pop[1] + s0.pop[3];
    for i in [0, 1, 3] {
        s0.pop[i] *= 0.7 / rest;
    }
    s0.pop[2] = 0.3;
    for c in s0.coh.iter_mut() {
        *c *= 0.1;
    }
    let traj = evolve(&s0, &g, &[0.0, default_horizon(&g)])?;
    let want = steady_dark(&rates, 0.3)?;
    let end = traj.last().expect("nonempty grid");
    let dev = end
        .pop
        .iter()
        .zip(&want.pop)
        .map(|(a, b)| (a - b).abs())
        .chain(end.coh.iter().map(|c| c.norm()))
        .fold(0.0, f64::max);
    outcome(
        frozen < 1e-10 && dev < 1e-7,
        format!("|tau33 - 1| max {frozen:.2e} (tol 1e-10); mixed start deviation {dev:.2e} (tol 1e-7)"),
    )
}

fn c9_concurrence() -> Result<Outcome> {
    let template = BathTemplate::EqualIhb { gamma1: 1.0, gamma2: 1.0 };
    let fig4 = |xi: f64| SystemParams::new(OMEGA_M, OMEGA_M, xi);
    let bracket = (0.01, 60.0);

    let p10 = fig4(10.0)?;
    let c_at_2 = steady_concurrence(&template.steady(&p10, 2.0)?, FRAC_PI_2);
    let t_star = threshold_temperature(&p10, &template, bracket)?;
    let dead_above = linspace(t_star + 1e-6, bracket.1, 400)
        .into_iter()
        .map(|t| template.steady(&p10, t).map(|s| steady_concurrence(&s, FRAC_PI_2)))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|&c| c == 0.0);

    let mut stars = Vec::new();
    for xi in [2.0, 4.0, 6.0, 8.0, 10.0] {
        stars.push(threshold_temperature(&fig4(xi)?, &template, bracket)?);
    }
    let monotone = stars.windows(2).all(|w| w[1] >= w[0]);

    let mut rng = sample::rng(9);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x = XStateMatrix::from_matrix(&sample::random_x_state(&mut rng));
        worst = worst.max((concurrence_x(&x) - concurrence_general(&x.to_bare())?).abs());
    }

    let list: Vec<String> = stars.iter().map(|t| format!("{t:.4}")).collect();
    outcome(
        c_at_2 > 0.0 && dead_above && monotone && worst < 1e-10,
        format!(
            "C(T=2) = {c_at_2:.4e}, zero above T* = {t_star:.6}: {dead_above}; T*(xi) = [{}]; X vs general {worst:.2e} (tol 1e-10)",
            list.join(", ")
        ),
    )
}

fn c10_oracles() -> Result<Outcome> {
    let mut kernel_dev = [0.0f64; 3];
    let mut ode_dev = [0.0f64; 3];
    let mut rng = sample::rng(10);
    for (regime, kind) in [ModelKind::Ihb, ModelKind::Chb, ModelKind::Dark].into_iter().enumerate() {
        for _ in 0..100 {
            let RandomModel {
                basis,
                rates,
                tau33_0: tau33,
                ..
            } = random_model(&mut rng, kind);
            let closed = steady_state(&rates, tau33.unwrap_or(0.0))?;
            let kernel = steady_nullspace(&bloch_matrix(&rates), tau33)?;
            kernel_dev[regime] = kernel_dev[regime].max(closed.max_deviation(&kernel));

            let mut s0 = sample::random_eigen_state(&mut rng);
            if let Some(t) = tau33 {
                let rest = s0.pop[0] + s0.pop[1] + s0.pop[3];
                for i in [0, 1, 3] {
                    s0.pop[i] *= (1.0 - t) / rest;
                }
                s0.pop[2] = t;
                for c in s0.coh.iter_mut() {
                    *c = 0.0.into();
                }
            }
            let g = Generator::new(&rates, &basis);
            let traj = evolve(&s0, &g, &[0.0, default_horizon(&g)])?;
            let end = traj.last().expect("nonempty grid");
            let d = end
                .pop
                .iter()
                .zip(&closed.pop)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            ode_dev[regime] = ode_dev[regime].max(d);
        }
    }
    let pass = kernel_dev.iter().all(|&d| d < 1e-12) && ode_dev.iter().all(|&d| d < 1e-7);
    outcome(
        pass,
        format!(
            "kernel dev IHB/CHB/dark {:.1e}/{:.1e}/{:.1e} (tol 1e-12); ODE dev {:.1e}/{:.1e}/{:.1e} (tol 1e-7)",
            kernel_dev[0], kernel_dev[1], kernel_dev[2], ode_dev[0], ode_dev[1], ode_dev[2]
        ),
    )
}

fn c11_phenomenological() -> Result<Outcome> {
    let params = SystemParams::from_mixing_angle(OMEGA_M, FIG3_XI, FRAC_PI_2)?;
    let baths = fig2_baths(10.0, 5.0);
    let local = bare_temperatures_from_sigma_z(&params, phenomenological_sigma_z(&params, &baths)?)?;
    let (l1, l2) = (local.t1.value(), local.t2.value());
    let global = bare_temperatures_ihb(OMEGA_M, FIG3_XI, FRAC_PI_2, &baths)?;
    let (g1, g2) = (global.t1.value(), global.t2.value());
    let equal = rel(g1, g2) < 1e-9;
    outcome(
        l1 > l2 && equal,
        format!("local: T(w1) = {l1:.6} > T(w2) = {l2:.6}; eigenbasis: {g1:.9} vs {g2:.9}"),
    )
}

type Criterion = (&'static str, fn() -> Result<Outcome>, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("equal-temperature IHB thermalization", c1_equal_ihb, Duration::from_secs(1)),
        ("nonequilibrium bounds and crossing", c2_bounds_and_crossing, Duration::from_secs(1)),
        ("resonant bare-temperature equality", c3_resonant_equality, Duration::from_secs(1)),
        ("counterintuitive region shrinks", c4_counterintuitive, Duration::from_secs(5)),
        ("dispersive prediction", c5_dispersive, Duration::from_secs(1)),
        ("CHB three-temperature thermalization", c6_chb_thermal, Duration::from_secs(1)),
        ("CHB bare-state ordering", c7_chb_ordering, Duration::from_secs(1)),
        ("dark-sector anti-thermalization", c8_anti_thermalization, Duration::from_secs(2)),
        ("concurrence sudden death", c9_concurrence, Duration::from_secs(10)),
        ("closed form vs kernel and ODE", c10_oracles, Duration::from_secs(30)),
        ("local master equation contrast", c11_phenomenological, Duration::from_secs(2)),
    ];
    let mut failures = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed <= *budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{:.3} s / {} s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
