//! Bath-induced transition and cross-dephasing rates.
//!
//! Rates are evaluated only at the two transition energies `ε1`, `ε2`; the
//! spectral couplings are therefore stored as plain numbers `γ(ε_i)`.

use crate::error::{PhysicsError, Result};
use crate::spectrum::EigenBasis;

/// Relative threshold for calling the `λ3` channels decoupled.
pub const DARK_SECTOR_THRESHOLD: f64 = 1e-12;

/// Bose–Einstein occupation `n̄(ε) = 1/(exp(ε/T) − 1)`, exactly zero at `T = 0`.
pub fn thermal_occupation(eps: f64, temp: f64) -> f64 {
    if temp <= 0.0 {
        return 0.0;
    }
    1.0 / (eps / temp).exp_m1()
}

/// Two independent baths at `T1` (TLS1) and `T2` (TLS2). `gamma1`, `gamma2`
/// are the couplings at `ε1` and `ε2`, shared by both baths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IhbBathConfig {
    pub t1: f64,
    pub t2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl IhbBathConfig {
    pub fn new(t1: f64, t2: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        non_negative("T1", t1)?;
        non_negative("T2", t2)?;
        positive("gamma1", gamma1)?;
        positive("gamma2", gamma2)?;
        Ok(Self {
            t1,
            t2,
            gamma1,
            gamma2,
        })
    }

    /// Both baths at `temp`.
    pub fn equal_temperatures(temp: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        Self::new(temp, temp, gamma1, gamma2)
    }
}

/// One bath shared by both TLSs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChbBathConfig {
    pub temp: f64,
    /// `γ1(ε1)`: TLS1 coupling at `ε1`.
    pub gamma1_e1: f64,
    /// `γ2(ε1)`
    pub gamma2_e1: f64,
    /// `γ1(ε2)`
    pub gamma1_e2: f64,
    /// `γ2(ε2)`
    pub gamma2_e2: f64,
}

impl ChbBathConfig {
    /// General couplings; the two TLSs may couple differently to the bath.
    pub fn new(temp: f64, gamma1_e1: f64, gamma2_e1: f64, gamma1_e2: f64, gamma2_e2: f64) -> Result<Self> {
        non_negative("T", temp)?;
        positive("gamma1_e1", gamma1_e1)?;
        positive("gamma2_e1", gamma2_e1)?;
        positive("gamma1_e2", gamma1_e2)?;
        positive("gamma2_e2", gamma2_e2)?;
        Ok(Self {
            temp,
            gamma1_e1,
            gamma2_e1,
            gamma1_e2,
            gamma2_e2,
        })
    }

    /// `γ1(ε_i) = γ2(ε_i) = γ(ε_i)`.
    pub fn equal_couplings(temp: f64, gamma_e1: f64, gamma_e2: f64) -> Result<Self> {
        Self::new(temp, gamma_e1, gamma_e1, gamma_e2, gamma_e2)
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(PhysicsError::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(PhysicsError::InvalidParameter {
            name,
            value,
            reason: "must be non-negative and finite",
        })
    }
}

/// Access to the eigenbasis jump rates `Γ_ij` (from `λ_i` to `λ_j`,
/// zero-based) and the cross-dephasing rates `Λ1..Λ4`.
pub trait TransitionRates {
    /// `Γ_ij` for the eight allowed single-excitation jumps; zero otherwise.
    fn rate(&self, from: usize, to: usize) -> f64;
    fn lambda(&self) -> [f64; 4];
}

/// Independent-bath rates `Γ1..Γ4`, `Λ1..Λ4`.
///
/// Aliases: `Γ13 = Γ24 = Γ1`, `Γ31 = Γ42 = Γ2`, `Γ12 = Γ34 = Γ3`,
/// `Γ21 = Γ43 = Γ4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IhbRateSet {
    pub gamma: [f64; 4],
    pub lambda: [f64; 4],
}

impl TransitionRates for IhbRateSet {
    fn rate(&self, from: usize, to: usize) -> f64 {
        let [g1, g2, g3, g4] = self.gamma;
        match (from, to) {
            (0, 2) | (1, 3) => g1,
            (2, 0) | (3, 1) => g2,
            (0, 1) | (2, 3) => g3,
            (1, 0) | (3, 2) => g4,
            _ => 0.0,
        }
    }

    fn lambda(&self) -> [f64; 4] {
        self.lambda
    }
}

/// Common-bath rates. `dark_sector` is set when every channel into and out
/// of `λ3` vanishes relative to the total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChbRateSet {
    pub g12: f64,
    pub g21: f64,
    pub g13: f64,
    pub g31: f64,
    pub g24: f64,
    pub g42: f64,
    pub g34: f64,
    pub g43: f64,
    pub lambda: [f64; 4],
    pub dark_sector: bool,
}

impl ChbRateSet {
    pub fn total(&self) -> f64 {
        self.g12 + self.g21 + self.g13 + self.g31 + self.g24 + self.g42 + self.g34 + self.g43
    }

    /// Summed rates into and out of `λ3`.
    pub fn dark_channel_weight(&self) -> f64 {
        self.g13 + self.g31 + self.g34 + self.g43
    }
}

impl TransitionRates for ChbRateSet {
    fn rate(&self, from: usize, to: usize) -> f64 {
        match (from, to) {
            (0, 1) => self.g12,
            (1, 0) => self.g21,
            (0, 2) => self.g13,
            (2, 0) => self.g31,
            (1, 3) => self.g24,
            (3, 1) => self.g42,
            (2, 3) => self.g34,
            (3, 2) => self.g43,
            _ => 0.0,
        }
    }

    fn lambda(&self) -> [f64; 4] {
        self.lambda
    }
}

/// Either bath configuration's rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateSet {
    Ihb(IhbRateSet),
    Chb(ChbRateSet),
}

impl TransitionRates for RateSet {
    fn rate(&self, from: usize, to: usize) -> f64 {
        match self {
            RateSet::Ihb(r) => r.rate(from, to),
            RateSet::Chb(r) => r.rate(from, to),
        }
    }

    fn lambda(&self) -> [f64; 4] {
        match self {
            RateSet::Ihb(r) => r.lambda,
            RateSet::Chb(r) => r.lambda,
        }
    }
}

pub fn ihb_rates(basis: &EigenBasis, baths: &IhbBathConfig) -> IhbRateSet {
    let (c, s) = basis.half_angle();
    let (c2, s2) = (c * c, s * s);
    // A_k: bath a (TLS1, T1); B_k: bath b (TLS2, T2).
    let a1 = |eps: f64, g: f64| g * (thermal_occupation(eps, baths.t1) + 1.0);
    let a2 = |eps: f64, g: f64| g * thermal_occupation(eps, baths.t1);
    let b1 = |eps: f64, g: f64| g * (thermal_occupation(eps, baths.t2) + 1.0);
    let b2 = |eps: f64, g: f64| g * thermal_occupation(eps, baths.t2);
    let (e1, e2) = (basis.eps1, basis.eps2);
    let (g1, g2) = (baths.gamma1, baths.gamma2);

    IhbRateSet {
        gamma: [
            c2 * a1(e1, g1) + s2 * b1(e1, g1),
            c2 * a2(e1, g1) + s2 * b2(e1, g1),
            s2 * a1(e2, g2) + c2 * b1(e2, g2),
            s2 * a2(e2, g2) + c2 * b2(e2, g2),
        ],
        lambda: [
            c2 * a1(e1, g1) - s2 * b1(e1, g1),
            -s2 * a1(e2, g2) + c2 * b1(e2, g2),
            c2 * a2(e1, g1) - s2 * b2(e1, g1),
            -s2 * a2(e2, g2) + c2 * b2(e2, g2),
        ],
    }
}

pub fn chb_rates(basis: &EigenBasis, bath: &ChbBathConfig) -> ChbRateSet {
    let (c, s) = basis.half_angle();
    let n1 = thermal_occupation(basis.eps1, bath.temp);
    let n2 = thermal_occupation(basis.eps2, bath.temp);
    let (r1e1, r2e1) = (bath.gamma1_e1.sqrt(), bath.gamma2_e1.sqrt());
    let (r1e2, r2e2) = (bath.gamma1_e2.sqrt(), bath.gamma2_e2.sqrt());

    let p12 = (s * r1e2 + c * r2e2).powi(2);
    let p13 = (c * r1e1 - s * r2e1).powi(2);
    let p24 = (c * r1e1 + s * r2e1).powi(2);
    let p34 = (s * r1e2 - c * r2e2).powi(2);
    let l_e1 = c * c * bath.gamma1_e1 - s * s * bath.gamma2_e1;
    let l_e2 = -s * s * bath.gamma1_e2 + c * c * bath.gamma2_e2;

    let mut rates = ChbRateSet {
        g12: p12 * (n2 + 1.0),
        g21: p12 * n2,
        g13: p13 * (n1 + 1.0),
        g31: p13 * n1,
        g24: p24 * (n1 + 1.0),
        g42: p24 * n1,
        g34: p34 * (n2 + 1.0),
        g43: p34 * n2,
        lambda: [l_e1 * (n1 + 1.0), l_e2 * (n2 + 1.0), l_e1 * n1, l_e2 * n2],
        dark_sector: false,
    };
    rates.dark_sector = rates.dark_channel_weight() < DARK_SECTOR_THRESHOLD * rates.total();
    rates
}
