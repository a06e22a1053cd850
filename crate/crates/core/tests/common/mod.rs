//! Full eigenbasis Liouvillian built term by term, used only as a reference.

#![allow(dead_code)]

use coupled_tls::dynamics::{EigenState, Generator, COHERENCE_SLOTS};
use coupled_tls::rates::{chb_rates, ihb_rates, ChbBathConfig, RateSet, TransitionRates};
use coupled_tls::sample;
use coupled_tls::spectrum::{build_eigenbasis, EigenBasis, SystemParams};
use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::FRAC_PI_2;

pub type C = Complex64;

/// `|λ_i><λ_j|`, zero-based.
pub fn tau(i: usize, j: usize) -> Matrix4<C> {
    let mut m = Matrix4::zeros();
    m[(i, j)] = C::new(1.0, 0.0);
    m
}

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

pub fn oracle_action(rates: &impl TransitionRates, energies: [f64; 4], rho: &Matrix4<C>) -> Matrix4<C> {
    let h = Matrix4::from_diagonal(&nalgebra::Vector4::from_iterator(energies.iter().map(|&e| re(e))));
    let mut out = (h * rho - rho * h) * C::new(0.0, -1.0);
    for i in 0..4 {
        for j in 0..4 {
            let g = rates.rate(i, j);
            if g == 0.0 {
                continue;
            }
            let jump = tau(j, i) * rho * tau(i, j) * re(2.0);
            let anti = tau(i, i) * rho + rho * tau(i, i);
            out += (jump - anti) * re(g);
        }
    }
    let [l1, l2, l3, l4] = rates.lambda();
    let t = |a: usize, b: usize| tau(a - 1, b - 1);
    out += (t(4, 2) * rho * t(1, 3) + t(3, 1) * rho * t(2, 4)) * re(2.0 * l1);
    out += (t(2, 1) * rho * t(3, 4) + t(4, 3) * rho * t(1, 2)) * re(2.0 * l2);
    out += (t(2, 4) * rho * t(3, 1) + t(1, 3) * rho * t(4, 2)) * re(2.0 * l3);
    out += (t(1, 2) * rho * t(4, 3) + t(3, 4) * rho * t(2, 1)) * re(2.0 * l4);
    out
}

/// Row-major superoperator: column `4k + l` is the image of `|k><l|`.
pub fn oracle_superoperator(rates: &impl TransitionRates, energies: [f64; 4]) -> DMatrix<C> {
    let mut l = DMatrix::zeros(16, 16);
    for col in 0..16 {
        let img = oracle_action(rates, energies, &tau(col / 4, col % 4));
        for row in 0..16 {
            l[(row, col)] = img[(row / 4, row % 4)];
        }
    }
    l
}

pub fn vec_of(m: &Matrix4<C>) -> DVector<C> {
    DVector::from_fn(16, |k, _| m[(k / 4, k % 4)])
}

pub fn mat_of(v: &DVector<C>) -> Matrix4<C> {
    Matrix4::from_fn(|i, j| v[4 * i + j])
}

/// Time derivative predicted by the reduced population and coherence blocks.
pub fn reduced_action(g: &Generator, state: &EigenState) -> Matrix4<C> {
    let p = nalgebra::Vector4::from(state.pop);
    let c = nalgebra::Vector6::from(state.coh);
    let dp = g.populations * p;
    let dc = g.coherences * c;
    let mut m = Matrix4::zeros();
    for i in 0..4 {
        m[(i, i)] = re(dp[i]);
    }
    for (k, &(i, j)) in COHERENCE_SLOTS.iter().enumerate() {
        m[(i, j)] = dc[k];
        m[(j, i)] = dc[k].conj();
    }
    m
}

pub fn max_abs(m: &Matrix4<C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub struct Draw {
    pub params: SystemParams,
    pub basis: EigenBasis,
    pub rates: RateSet,
}

pub fn ihb_draw<R: Rng>(rng: &mut R) -> Draw {
    let params = sample::random_system(rng);
    let basis = build_eigenbasis(&params).unwrap();
    let rates = RateSet::Ihb(ihb_rates(&basis, &sample::random_ihb_baths(rng)));
    Draw { params, basis, rates }
}

pub fn chb_draw<R: Rng>(rng: &mut R) -> Draw {
    let params = sample::random_system(rng);
    let basis = build_eigenbasis(&params).unwrap();
    let rates = RateSet::Chb(chb_rates(&basis, &sample::random_chb_bath(rng)));
    Draw { params, basis, rates }
}

pub fn dark_draw<R: Rng>(rng: &mut R) -> Draw {
    let omega_m = rng.random_range(5.0..40.0);
    let xi = rng.random_range(0.05..0.5) * omega_m;
    let params = SystemParams::from_mixing_angle(omega_m, xi, FRAC_PI_2).unwrap();
    let basis = build_eigenbasis(&params).unwrap();
    let g = rng.random_range(0.2..2.0);
    let bath = ChbBathConfig::equal_couplings(rng.random_range(1.0..30.0), g, g).unwrap();
    let rates = RateSet::Chb(chb_rates(&basis, &bath));
    Draw { params, basis, rates }
}
