//! Mixing-angle sweeps: crossing angles, the counterintuitive region and the
//! dispersive-regime check.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{PhysicsError, Result};
use crate::rates::{ihb_rates, IhbBathConfig};
use crate::spectrum::{build_eigenbasis, dispersive_shift, SystemParams};

use super::temperature::{eff_temps_bare, eff_temps_eigen_ihb, BareTemperatures};
use super::{steady_ihb, SteadyPopulations};

/// Default lower end of θ sweeps; the upper end is `π − THETA_MIN`.
pub const THETA_MIN: f64 = 0.02;
/// Half-width of the window around `π/2` dropped from common-bath sweeps.
pub const RESONANCE_EXCLUSION: f64 = 1e-6;
/// Bracketing grid size for root searches.
pub const ROOT_GRID_POINTS: usize = 2001;
/// Bisection stops once the bracket is this narrow.
pub const ROOT_TOL: f64 = 1e-10;
/// Two bare temperatures within this relative distance count as equal.
pub const EQUALITY_TOL: f64 = 1e-12;
/// Largest `|ξ/Δω|` accepted by [`dispersive_prediction_check`].
pub const DEEP_DISPERSIVE_RATIO: f64 = 0.1;

/// `points` evenly spaced values over `[min, max]`.
pub fn linspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![min],
        n => (0..n)
            .map(|k| {
                if k == n - 1 {
                    max
                } else {
                    min + (max - min) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Drops points within [`RESONANCE_EXCLUSION`] of `π/2`.
pub fn exclude_resonance(grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .copied()
        .filter(|t| (t - FRAC_PI_2).abs() >= RESONANCE_EXCLUSION)
        .collect()
}

/// Angles in `[θ_min, π − θ_min]` that also keep `ε2 > 0`, i.e.
/// `sin θ > ξ/ω_m`, pulled in by `θ_min` from that boundary.
pub fn valid_theta_range(omega_m: f64, xi: f64, theta_min: f64) -> Result<(f64, f64)> {
    let ratio = xi / omega_m;
    if !(ratio < 1.0) {
        return Err(PhysicsError::Positivity { eps2: omega_m - xi });
    }
    let edge = ratio.asin();
    let lo = if edge < theta_min { theta_min } else { edge + theta_min };
    let hi = PI - lo;
    if lo >= hi {
        return Err(PhysicsError::Range {
            name: "theta",
            value: lo,
            min: 0.0,
            max: hi,
        });
    }
    Ok((lo, hi))
}

/// Sign changes of `f` on `[lo, hi]`: brackets from a uniform grid, then
/// bisection to [`ROOT_TOL`]. Monotonicity is not assumed.
pub fn find_roots<F>(mut f: F, lo: f64, hi: f64, grid_points: usize) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let grid = linspace(lo, hi, grid_points.max(2));
    let mut values = Vec::with_capacity(grid.len());
    for &x in &grid {
        values.push(f(x)?);
    }
    let mut roots = Vec::new();
    for k in 0..grid.len() - 1 {
        let (mut a, mut b) = (grid[k], grid[k + 1]);
        let (mut fa, fb) = (values[k], values[k + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() || fb == 0.0 {
            continue;
        }
        while b - a > ROOT_TOL {
            let m = 0.5 * (a + b);
            let fm = f(m)?;
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    if values.last() == Some(&0.0) {
        roots.push(hi);
    }
    Ok(roots)
}

/// Independent-bath steady state at `(ω_m, ξ, θ)`.
pub fn ihb_point(omega_m: f64, xi: f64, theta: f64, baths: &IhbBathConfig) -> Result<(SystemParams, SteadyPopulations)> {
    let params = SystemParams::from_mixing_angle(omega_m, xi, theta)?;
    let basis = build_eigenbasis(&params)?;
    Ok((params, steady_ihb(&ihb_rates(&basis, baths))?))
}

/// `T_eff(ε1) − T_eff(ε2)`
pub fn eigen_temperature_gap(omega_m: f64, xi: f64, theta: f64, baths: &IhbBathConfig) -> Result<f64> {
    let (params, steady) = ihb_point(omega_m, xi, theta, baths)?;
    let (a, b) = eff_temps_eigen_ihb(&steady, &build_eigenbasis(&params)?)?;
    Ok(a.value() - b.value())
}

/// Angles `θ0` where the two eigenbasis temperatures coincide.
pub fn crossing_angles(omega_m: f64, xi: f64, baths: &IhbBathConfig) -> Result<Vec<f64>> {
    let (lo, hi) = valid_theta_range(omega_m, xi, THETA_MIN)?;
    let roots = find_roots(|t| eigen_temperature_gap(omega_m, xi, t, baths), lo, hi, ROOT_GRID_POINTS)?;
    if roots.is_empty() {
        return Err(PhysicsError::NoRoot {
            quantity: "T_eff(eps1) - T_eff(eps2)",
        });
    }
    Ok(roots)
}

pub fn bare_temperatures_ihb(omega_m: f64, xi: f64, theta: f64, baths: &IhbBathConfig) -> Result<BareTemperatures> {
    let (params, steady) = ihb_point(omega_m, xi, theta, baths)?;
    eff_temps_bare(&steady, &params)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterintuitiveRegion {
    /// Closed runs of flagged grid points, `(first θ, last θ)`.
    pub intervals: Vec<(f64, f64)>,
    /// Summed grid cells of flagged points.
    pub measure: f64,
    pub flagged: usize,
    pub points: usize,
}

/// Grid points where `sign(T_eff(ω1) − T_eff(ω2))` contradicts
/// `sign(T1 − T2)`. At `T1 = T2` any difference at all is flagged.
pub fn counterintuitive_scan(
    omega_m: f64,
    xi: f64,
    baths: &IhbBathConfig,
    grid: &[f64],
) -> Result<CounterintuitiveRegion> {
    if baths.t1 < baths.t2 {
        return Err(PhysicsError::InvalidParameter {
            name: "T1",
            value: baths.t1,
            reason: "counterintuitive scan expects T1 >= T2",
        });
    }
    let equal_baths = baths.t1 == baths.t2;
    let mut flags = Vec::with_capacity(grid.len());
    for &theta in grid {
        let bare = bare_temperatures_ihb(omega_m, xi, theta, baths)?;
        let (a, b) = (bare.t1.value(), bare.t2.value());
        let diff = a - b;
        let same = diff.abs() <= EQUALITY_TOL * a.abs().max(b.abs());
        flags.push(if equal_baths { !same } else { !same && diff < 0.0 });
    }

    let mut intervals = Vec::new();
    let mut start: Option<usize> = None;
    for k in 0..=flags.len() {
        let on = k < flags.len() && flags[k];
        match (on, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                intervals.push((grid[s], grid[k - 1]));
                start = None;
            }
            _ => {}
        }
    }
    let measure = (0..grid.len())
        .filter(|&k| flags[k])
        .map(|k| {
            let left = if k > 0 { 0.5 * (grid[k] - grid[k - 1]) } else { 0.0 };
            let right = if k + 1 < grid.len() { 0.5 * (grid[k + 1] - grid[k]) } else { 0.0 };
            left + right
        })
        .sum();
    Ok(CounterintuitiveRegion {
        intervals,
        measure,
        flagged: flags.iter().filter(|&&f| f).count(),
        points: grid.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersivePoint {
    pub theta: f64,
    /// `|ξ/Δω|`
    pub ratio: f64,
    pub simulated: (f64, f64),
    pub predicted: (f64, f64),
    /// `|T_eff(ω_l) − (ω_l/ω̄_l)T_l| / T_l`
    pub deviation: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersiveReport {
    pub points: Vec<DispersivePoint>,
    pub max_deviation: f64,
}

/// Compares simulated bare temperatures with `(ω_l/ω̄_l) T_l`.
pub fn dispersive_prediction_check(
    omega_m: f64,
    xi: f64,
    baths: &IhbBathConfig,
    thetas: &[f64],
) -> Result<DispersiveReport> {
    let mut points = Vec::with_capacity(thetas.len());
    let mut max_deviation = 0.0f64;
    for &theta in thetas {
        let (params, steady) = ihb_point(omega_m, xi, theta, baths)?;
        let shift = dispersive_shift(&params)?;
        let ratio = (xi / params.detuning()).abs();
        if ratio >= DEEP_DISPERSIVE_RATIO {
            return Err(PhysicsError::Range {
                name: "|xi/dw|",
                value: ratio,
                min: 0.0,
                max: DEEP_DISPERSIVE_RATIO,
            });
        }
        let bare = eff_temps_bare(&steady, &params)?;
        let simulated = (bare.t1.value(), bare.t2.value());
        let predicted = shift.predicted_temperatures(&params, baths.t1, baths.t2);
        let deviation = (
            (simulated.0 - predicted.0).abs() / baths.t1,
            (simulated.1 - predicted.1).abs() / baths.t2,
        );
        max_deviation = max_deviation.max(deviation.0).max(deviation.1);
        points.push(DispersivePoint {
            theta,
            ratio,
            simulated,
            predicted,
            deviation,
        });
    }
    Ok(DispersiveReport { points, max_deviation })
}
