//! Seeded random draws for states and parameter points.
//!
//! Used by the initial-state library, the property tests and the
//! verification suites. Everything here is deterministic in the seed.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::EigenState;
use crate::rates::{chb_rates, ihb_rates, ChbBathConfig, IhbBathConfig, RateSet};
use crate::spectrum::{build_eigenbasis, BareDensityMatrix, EigenBasis, SystemParams};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G G† / Tr(G G†)` for a matrix with uniform complex entries.
pub fn random_density<R: Rng>(rng: &mut R) -> Matrix4<Complex64> {
    let g = Matrix4::from_fn(|_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let rho = g * g.adjoint();
    let tr = rho.trace();
    let mut rho = rho / tr;
    // exact Hermiticity after the division
    for i in 0..4 {
        rho[(i, i)].im = 0.0;
        for j in 0..i {
            rho[(j, i)] = rho[(i, j)].conj();
        }
    }
    rho
}

pub fn random_eigen_state<R: Rng>(rng: &mut R) -> EigenState {
    EigenState::from_matrix(&random_density(rng))
}

pub fn random_bare_state<R: Rng>(rng: &mut R) -> BareDensityMatrix {
    BareDensityMatrix::from_matrix_unchecked(random_density(rng))
}

/// Random X-form bare state: diagonal weights plus the two anti-diagonal
/// coherences scaled inside their Cauchy–Schwarz bounds.
pub fn random_x_state<R: Rng>(rng: &mut R) -> Matrix4<Complex64> {
    let mut d: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
    let s: f64 = d.iter().sum();
    d.iter_mut().for_each(|x| *x /= s);
    let mut m = Matrix4::<Complex64>::zeros();
    for (i, x) in d.iter().enumerate() {
        m[(i, i)] = Complex64::new(*x, 0.0);
    }
    let phase = |rng: &mut R| Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
    let r23 = rng.random_range(0.0..1.0) * (d[1] * d[2]).sqrt() * phase(rng);
    let r14 = rng.random_range(0.0..1.0) * (d[0] * d[3]).sqrt() * phase(rng);
    m[(1, 2)] = r23;
    m[(2, 1)] = r23.conj();
    m[(0, 3)] = r14;
    m[(3, 0)] = r14.conj();
    m
}

/// Random valid system point: `ω_m ∈ [5, 40]`, `ξ ∈ [0.05, 0.9 ω_m)`
/// shrunk until `ε2 > 0`, and a mixing angle in `(0.05, π − 0.05)`.
pub fn random_system<R: Rng>(rng: &mut R) -> SystemParams {
    loop {
        let omega_m = rng.random_range(5.0..40.0);
        let xi = rng.random_range(0.05..0.5) * omega_m;
        let theta = rng.random_range(0.05..PI - 0.05);
        if let Ok(p) = SystemParams::from_mixing_angle(omega_m, xi, theta) {
            return p;
        }
    }
}

pub fn random_ihb_baths<R: Rng>(rng: &mut R) -> IhbBathConfig {
    IhbBathConfig::new(
        rng.random_range(1.0..30.0),
        rng.random_range(1.0..30.0),
        rng.random_range(0.2..2.0),
        rng.random_range(0.2..2.0),
    )
    .expect("ranges are positive")
}

/// Common bath with equal couplings of both TLSs at each transition energy.
pub fn random_chb_bath<R: Rng>(rng: &mut R) -> ChbBathConfig {
    ChbBathConfig::equal_couplings(
        rng.random_range(1.0..30.0),
        rng.random_range(0.2..2.0),
        rng.random_range(0.2..2.0),
    )
    .expect("ranges are positive")
}

/// Generic common-bath draws keep at least this share of the rates on `λ3`.
pub const NEAR_DARK_WEIGHT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Ihb,
    /// Common bath away from the dark sector.
    Chb,
    /// Common bath at resonance with equal couplings.
    Dark,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomModel {
    pub params: SystemParams,
    pub basis: EigenBasis,
    pub rates: RateSet,
    /// Initial `<τ33>` for dark draws.
    pub tau33_0: Option<f64>,
}

pub fn random_model<R: Rng>(rng: &mut R, kind: ModelKind) -> RandomModel {
    loop {
        let params = match kind {
            ModelKind::Dark => {
                let omega_m = rng.random_range(5.0..40.0);
                let xi = rng.random_range(0.05..0.5) * omega_m;
                SystemParams::from_mixing_angle(omega_m, xi, FRAC_PI_2).expect("xi < omega_m")
            }
            _ => random_system(rng),
        };
        let basis = build_eigenbasis(&params).expect("sampled spectrum is valid");
        let (rates, tau33_0) = match kind {
            ModelKind::Ihb => (RateSet::Ihb(ihb_rates(&basis, &random_ihb_baths(rng))), None),
            ModelKind::Chb => {
                let r = chb_rates(&basis, &random_chb_bath(rng));
                if r.dark_channel_weight() < NEAR_DARK_WEIGHT * r.total() {
                    continue;
                }
                (RateSet::Chb(r), None)
            }
            ModelKind::Dark => {
                let g = rng.random_range(0.2..2.0);
                let bath = ChbBathConfig::equal_couplings(rng.random_range(1.0..30.0), g, g).expect("ranges are positive");
                (RateSet::Chb(chb_rates(&basis, &bath)), Some(rng.random_range(0.0..1.0)))
            }
        };
        return RandomModel {
            params,
            basis,
            rates,
            tau33_0,
        };
    }
}
