//! Closed-form steady populations, the kernel oracle and temperature
//! diagnostics.

pub mod scans;
pub mod temperature;

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};

use crate::dynamics::EigenState;
use crate::error::{PhysicsError, Result};
use crate::rates::{ChbRateSet, IhbRateSet, RateSet};

pub use temperature::{
    bare_temperature, bare_temperatures_from_sigma_z, eff_temps_bare, eff_temps_eigen_chb, eff_temps_eigen_ihb,
    sigma_z_ihb_closed_form, temperature_report, BareTemperatures, EigenTemperatures, Temperature,
    TemperatureReport,
};

/// Singular values below this fraction of the largest count as kernel.
const KERNEL_TOL: f64 = 1e-10;
/// Kernel components this far below zero are rounding noise.
const NEGATIVE_NOISE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Ihb,
    Chb,
    Dark,
    /// Produced by [`steady_nullspace`] from a one-dimensional kernel.
    Kernel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyPopulations {
    pub pop: [f64; 4],
    pub regime: Regime,
    pub tau33_initial: Option<f64>,
}

impl SteadyPopulations {
    /// Coherence-free eigenbasis state.
    pub fn to_state(&self) -> EigenState {
        EigenState {
            pop: self.pop,
            coh: Default::default(),
        }
    }

    pub fn max_deviation(&self, other: &SteadyPopulations) -> f64 {
        self.pop
            .iter()
            .zip(&other.pop)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn steady_ihb(rates: &IhbRateSet) -> Result<SteadyPopulations> {
    let [g1, g2, g3, g4] = rates.gamma;
    if g1 + g2 <= 0.0 {
        return Err(PhysicsError::DegenerateRates { which: "Γ1+Γ2" });
    }
    if g3 + g4 <= 0.0 {
        return Err(PhysicsError::DegenerateRates { which: "Γ3+Γ4" });
    }
    let d = (g1 + g2) * (g3 + g4);
    Ok(SteadyPopulations {
        pop: [g2 * g4 / d, g2 * g3 / d, g1 * g4 / d, g1 * g3 / d],
        regime: Regime::Ihb,
        tau33_initial: None,
    })
}

pub fn steady_chb(r: &ChbRateSet) -> Result<SteadyPopulations> {
    if r.dark_sector {
        return Err(PhysicsError::DarkSector);
    }
    let n11 = (r.g21 + r.g24) * r.g31 * r.g43 + (r.g31 + r.g34) * r.g21 * r.g42;
    let n22 = (r.g12 + r.g13) * r.g34 * r.g42 + (r.g42 + r.g43) * r.g12 * r.g31;
    let n33 = (r.g12 + r.g13) * r.g43 * r.g24 + (r.g42 + r.g43) * r.g21 * r.g13;
    let n44 = (r.g21 + r.g24) * r.g13 * r.g34 + (r.g31 + r.g34) * r.g12 * r.g24;
    let a = (r.g12 + r.g13) * (r.g34 * r.g42 + r.g43 * r.g24)
        + (r.g21 + r.g24) * (r.g31 * r.g43 + r.g13 * r.g34)
        + (r.g31 + r.g34) * (r.g21 * r.g42 + r.g12 * r.g24)
        + (r.g42 + r.g43) * (r.g21 * r.g13 + r.g12 * r.g31);
    if a <= 0.0 {
        return Err(PhysicsError::DegenerateRates { which: "A" });
    }
    Ok(SteadyPopulations {
        pop: [n11 / a, n22 / a, n33 / a, n44 / a],
        regime: Regime::Chb,
        tau33_initial: None,
    })
}

/// Dark-sector steady state: `λ3` keeps its initial weight and the rest
/// balances over `λ1, λ2, λ4`.
pub fn steady_dark(r: &ChbRateSet, tau33_0: f64) -> Result<SteadyPopulations> {
    if !(0.0..=1.0).contains(&tau33_0) {
        return Err(PhysicsError::Range {
            name: "tau33_0",
            value: tau33_0,
            min: 0.0,
            max: 1.0,
        });
    }
    if !r.dark_sector {
        return Err(PhysicsError::NotDarkSector);
    }
    let w = [r.g21 * r.g42, r.g12 * r.g42, r.g12 * r.g24];
    let d: f64 = w.iter().sum();
    if d <= 0.0 {
        return Err(PhysicsError::DegenerateRates {
            which: "Γ21Γ42+Γ12Γ42+Γ12Γ24",
        });
    }
    let rest = 1.0 - tau33_0;
    Ok(SteadyPopulations {
        pop: [rest * w[0] / d, rest * w[1] / d, tau33_0, rest * w[2] / d],
        regime: Regime::Dark,
        tau33_initial: Some(tau33_0),
    })
}

/// Regime-appropriate closed form. `tau33_0` is used only in the dark sector.
pub fn steady_state(rates: &RateSet, tau33_0: f64) -> Result<SteadyPopulations> {
    match rates {
        RateSet::Ihb(r) => steady_ihb(r),
        RateSet::Chb(r) if r.dark_sector => steady_dark(r, tau33_0),
        RateSet::Chb(r) => steady_chb(r),
    }
}

/// Kernel of a Bloch matrix from its SVD.
///
/// A one-dimensional kernel gives the unique normalized state. A
/// two-dimensional kernel gives the member with `<τ33> = tau33_0`
/// (zero when not supplied).
pub fn steady_nullspace(m: &Matrix4<f64>, tau33_0: Option<f64>) -> Result<SteadyPopulations> {
    let scale = m.abs().max();
    for j in 0..4 {
        let col: f64 = m.column(j).sum();
        if col.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(PhysicsError::InvalidParameter {
                name: "M",
                value: col,
                reason: "columns must sum to zero",
            });
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.max();
    let kernel: Vec<Vector4<f64>> = (0..4)
        .filter(|&k| smax == 0.0 || svd.singular_values[k] <= KERNEL_TOL * smax)
        .map(|k| v_t.row(k).transpose())
        .collect();

    let (v, regime, tau) = match kernel.len() {
        1 => (kernel[0] / kernel[0].sum(), Regime::Kernel, None),
        2 => {
            let t = tau33_0.unwrap_or(0.0);
            let (a, b) = (kernel[0], kernel[1]);
            let lhs = Matrix2::new(a.sum(), b.sum(), a[2], b[2]);
            let coef = lhs
                .lu()
                .solve(&Vector2::new(1.0, t))
                .ok_or(PhysicsError::KernelDimension { dim: 2 })?;
            (a * coef[0] + b * coef[1], Regime::Dark, Some(t))
        }
        dim => return Err(PhysicsError::KernelDimension { dim }),
    };

    let mut pop = [0.0; 4];
    for (index, p) in pop.iter_mut().enumerate() {
        let x = v[index];
        if x < -NEGATIVE_NOISE {
            return Err(PhysicsError::NonPositivePopulation { index, value: x });
        }
        *p = x.max(0.0);
    }
    Ok(SteadyPopulations {
        pop,
        regime,
        tau33_initial: tau,
    })
}
