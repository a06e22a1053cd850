//! Effective temperatures from population ratios.

use std::fmt;

use crate::error::{PhysicsError, Result};
use crate::rates::IhbRateSet;
use crate::spectrum::{build_eigenbasis, eigen_to_bare, sigma_z_expectations, EigenBasis, SystemParams};

use super::{Regime, SteadyPopulations};

/// Population ratios this close to one read as infinite temperature.
pub const INFINITE_TOL: f64 = 1e-13;
/// Allowed mismatch between `ln(<τ11>/<τ22>)` and `ln(<τ33>/<τ44>)`.
pub const RATIO_CONSISTENCY_TOL: f64 = 1e-8;

/// A temperature that may legitimately be infinite or negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Finite(f64),
    Infinite,
    /// Population inversion; carries the (negative) value.
    Negative(f64),
}

impl Temperature {
    /// `gap / ln(lower/upper)` for two levels split by `gap`.
    pub fn from_populations(gap: f64, lower: f64, upper: f64) -> Self {
        if upper == 0.0 && lower > 0.0 {
            return Temperature::Finite(0.0);
        }
        Self::from_log_ratio(gap, lower.ln() - upper.ln())
    }

    fn from_log_ratio(gap: f64, log_ratio: f64) -> Self {
        if log_ratio.abs() <= INFINITE_TOL {
            Temperature::Infinite
        } else if log_ratio < 0.0 {
            Temperature::Negative(gap / log_ratio)
        } else {
            Temperature::Finite(gap / log_ratio)
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Temperature::Finite(_) => "finite",
            Temperature::Infinite => "infinite",
            Temperature::Negative(_) => "negative",
        }
    }

    /// Signed value, `+∞` for [`Temperature::Infinite`].
    pub fn value(&self) -> f64 {
        match *self {
            Temperature::Finite(t) | Temperature::Negative(t) => t,
            Temperature::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Temperature::Finite(t) => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Temperature::Infinite => write!(f, "inf"),
            Temperature::Finite(t) | Temperature::Negative(t) => write!(f, "{t}"),
        }
    }
}

fn require_positive(pop: &[f64; 4], indices: &[usize]) -> Result<()> {
    for &index in indices {
        if !(pop[index] > 0.0) {
            return Err(PhysicsError::NonPositivePopulation {
                index,
                value: pop[index],
            });
        }
    }
    Ok(())
}

/// `(T_eff(ε1), T_eff(ε2))` from `<τ33>/<τ11>` and `<τ22>/<τ11>`.
pub fn eff_temps_eigen_ihb(steady: &SteadyPopulations, basis: &EigenBasis) -> Result<(Temperature, Temperature)> {
    let p = steady.pop;
    require_positive(&p, &[0, 1, 2, 3])?;
    let mismatch = ((p[0].ln() - p[1].ln()) - (p[2].ln() - p[3].ln())).abs();
    if mismatch > RATIO_CONSISTENCY_TOL {
        return Err(PhysicsError::InconsistentRatios { mismatch });
    }
    Ok((
        Temperature::from_populations(basis.eps1, p[2], p[0]),
        Temperature::from_populations(basis.eps2, p[1], p[0]),
    ))
}

/// `(T12, T13, T34)` with `T_ij = (E_i − E_j)/ln(<τ_jj>/<τ_ii>)`.
pub fn eff_temps_eigen_chb(steady: &SteadyPopulations, basis: &EigenBasis) -> Result<[Temperature; 3]> {
    if steady.regime == Regime::Dark {
        return Err(PhysicsError::DarkSector);
    }
    let p = steady.pop;
    require_positive(&p, &[0, 1, 2, 3])?;
    let e = basis.energies;
    Ok([
        Temperature::from_populations(e[0] - e[1], p[1], p[0]),
        Temperature::from_populations(e[0] - e[2], p[2], p[0]),
        Temperature::from_populations(e[2] - e[3], p[3], p[2]),
    ])
}

/// `ω / ln[(1 − <σz>)/(1 + <σz>)]`
pub fn bare_temperature(omega: f64, sigma_z: f64) -> Result<Temperature> {
    if !(sigma_z.abs() < 1.0) {
        return Err(PhysicsError::Range {
            name: "sigma_z",
            value: sigma_z,
            min: -1.0,
            max: 1.0,
        });
    }
    Ok(Temperature::from_log_ratio(omega, (-sigma_z).ln_1p() - sigma_z.ln_1p()))
}

/// `(<σ1^z>_ss, <σ2^z>_ss)` straight from the IHB rates.
pub fn sigma_z_ihb_closed_form(rates: &IhbRateSet, theta: f64) -> (f64, f64) {
    let [g1, g2, g3, g4] = rates.gamma;
    let d = (g1 + g2) * (g3 + g4);
    let base = g2 * g4 - g1 * g3;
    let diff = theta.cos() * (g2 * g3 - g1 * g4);
    ((base + diff) / d, (base - diff) / d)
}

/// Bare-basis view of one steady state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BareTemperatures {
    pub sigma_z: (f64, f64),
    pub t1: Temperature,
    pub t2: Temperature,
}

/// `T_eff(ω1)`, `T_eff(ω2)` from steady populations (steady coherences vanish).
///
/// Ratios use each TLS's bare excited and ground probabilities, not `1 ± <σz>`.
pub fn eff_temps_bare(steady: &SteadyPopulations, params: &SystemParams) -> Result<BareTemperatures> {
    let basis = build_eigenbasis(params)?;
    let state = steady.to_state();
    let rho = eigen_to_bare(&state, basis.theta);
    let d: [f64; 4] = std::array::from_fn(|i| rho.element(i, i).re.max(0.0));
    Ok(BareTemperatures {
        sigma_z: sigma_z_expectations(&state, basis.theta),
        t1: Temperature::from_populations(params.omega1(), d[2] + d[3], d[0] + d[1]),
        t2: Temperature::from_populations(params.omega2(), d[1] + d[3], d[0] + d[2]),
    })
}

pub fn bare_temperatures_from_sigma_z(params: &SystemParams, sigma_z: (f64, f64)) -> Result<BareTemperatures> {
    Ok(BareTemperatures {
        sigma_z,
        t1: bare_temperature(params.omega1(), sigma_z.0)?,
        t2: bare_temperature(params.omega2(), sigma_z.1)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenTemperatures {
    /// `T_eff(ε1)`, `T_eff(ε2)`
    Ihb { eps1: Temperature, eps2: Temperature },
    Chb {
        t12: Temperature,
        t13: Temperature,
        t34: Temperature,
    },
    /// `λ3` is frozen, so only the `λ1 ↔ λ2 ↔ λ4` ladder carries a temperature.
    Dark { t12: Temperature, t24: Temperature },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureReport {
    pub eigen: EigenTemperatures,
    pub bare: BareTemperatures,
}

pub fn temperature_report(steady: &SteadyPopulations, params: &SystemParams) -> Result<TemperatureReport> {
    let basis = build_eigenbasis(params)?;
    let eigen = match steady.regime {
        Regime::Ihb => {
            let (eps1, eps2) = eff_temps_eigen_ihb(steady, &basis)?;
            EigenTemperatures::Ihb { eps1, eps2 }
        }
        Regime::Chb | Regime::Kernel => {
            let [t12, t13, t34] = eff_temps_eigen_chb(steady, &basis)?;
            EigenTemperatures::Chb { t12, t13, t34 }
        }
        Regime::Dark => {
            let p = steady.pop;
            require_positive(&p, &[0, 1, 3])?;
            let e = basis.energies;
            EigenTemperatures::Dark {
                t12: Temperature::from_populations(e[0] - e[1], p[1], p[0]),
                t24: Temperature::from_populations(e[1] - e[3], p[3], p[1]),
            }
        }
    };
    Ok(TemperatureReport {
        eigen,
        bare: eff_temps_bare(steady, params)?,
    })
}
