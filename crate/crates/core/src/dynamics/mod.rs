//! Optical Bloch equations in the eigenbasis and the local (bare-basis)
//! master equation used for comparison.
//!
//! Under the secular approximation the populations and the coherences
//! evolve independently, so a [`Generator`] holds two blocks: the real 4×4
//! Bloch matrix `M` acting on `(<τ11>, <τ22>, <τ33>, <τ44>)` and a complex 6×6
//! matrix acting on the coherences in [`COHERENCE_SLOTS`] order.

pub mod integrator;
pub mod lindblad;
pub mod phenomenological;
mod state;

use nalgebra::{Matrix4, Matrix6, Schur, Vector4, Vector6};
use num_complex::Complex64;

use crate::error::{PhysicsError, Result};
use crate::rates::{ChbRateSet, IhbRateSet, RateSet, TransitionRates};
use crate::spectrum::EigenBasis;

pub use integrator::Tolerances;
pub use state::{EigenState, Trajectory, COHERENCE_SLOTS};

/// Frequency-to-rate ratio above which [`Method::Auto`] switches to the
/// matrix exponential.
pub const STIFFNESS_RATIO: f64 = 1e4;

/// Accumulated phase (radians) over the grid above which [`Method::Auto`]
/// switches to the matrix exponential.
pub const PHASE_BUDGET: f64 = 1e5;

/// Allowed drift of `Σ<τ_ii>` during integration.
pub const TRACE_DRIFT_TOL: f64 = 1e-8;

/// Multiple of the slowest relaxation time used by [`default_horizon`].
pub const HORIZON_FACTOR: f64 = 20.0;

pub fn bloch_matrix_ihb(rates: &IhbRateSet) -> Matrix4<f64> {
    let [g1, g2, g3, g4] = rates.gamma;
    -2.0 * Matrix4::new(
        g1 + g3, -g4, -g2, 0.0, //
        -g3, g1 + g4, 0.0, -g2, //
        -g1, 0.0, g2 + g3, -g4, //
        0.0, -g1, -g3, g2 + g4,
    )
}

pub fn bloch_matrix_chb(r: &ChbRateSet) -> Matrix4<f64> {
    -2.0 * Matrix4::new(
        r.g12 + r.g13, -r.g21, -r.g31, 0.0, //
        -r.g12, r.g21 + r.g24, 0.0, -r.g42, //
        -r.g13, 0.0, r.g31 + r.g34, -r.g43, //
        0.0, -r.g24, -r.g34, r.g42 + r.g43,
    )
}

pub fn bloch_matrix(rates: &RateSet) -> Matrix4<f64> {
    match rates {
        RateSet::Ihb(r) => bloch_matrix_ihb(r),
        RateSet::Chb(r) => bloch_matrix_chb(r),
    }
}

/// Total jump rate out of `λ_i`.
fn out_rate(rates: &impl TransitionRates, i: usize) -> f64 {
    (0..4).map(|k| rates.rate(i, k)).sum()
}

/// Coherence block of the eigenbasis master equation.
///
/// `<τ_ij>` decays at the summed out-rates of `λ_i` and `λ_j`, rotates at
/// `E_j − E_i`, and the Λ terms pair `(τ21, τ43)` and `(τ31, τ42)`.
/// The same layout covers both bath configurations.
pub fn coherence_generator(rates: &impl TransitionRates, basis: &EigenBasis) -> Matrix6<Complex64> {
    let e = basis.energies;
    let mut g = Matrix6::<Complex64>::zeros();
    for (k, &(i, j)) in COHERENCE_SLOTS.iter().enumerate() {
        let decay = out_rate(rates, i) + out_rate(rates, j);
        g[(k, k)] = Complex64::new(-decay, e[j] - e[i]);
    }
    let [l1, l2, l3, l4] = rates.lambda();
    let re = |x: f64| Complex64::new(2.0 * x, 0.0);
    // slots: 0 τ21, 1 τ31, 2 τ41, 3 τ32, 4 τ42, 5 τ43
    g[(0, 5)] = re(l3);
    g[(5, 0)] = re(l1);
    g[(1, 4)] = re(l4);
    g[(4, 1)] = re(l2);
    g
}

/// Integration strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Runge–Kutta unless the generator is stiff or the grid spans too many
    /// oscillations.
    #[default]
    Auto,
    RungeKutta,
    MatrixExponential,
}

/// Population and coherence blocks of one master equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub populations: Matrix4<f64>,
    pub coherences: Matrix6<Complex64>,
}

impl Generator {
    pub fn new(rates: &RateSet, basis: &EigenBasis) -> Self {
        let coherences = match rates {
            RateSet::Ihb(r) => coherence_generator(r, basis),
            RateSet::Chb(r) => coherence_generator(r, basis),
        };
        Self {
            populations: bloch_matrix(rates),
            coherences,
        }
    }

    /// Largest rotation frequency over the largest decay rate.
    pub fn stiffness(&self) -> f64 {
        let freq = self.max_frequency();
        let decay = (0..4)
            .map(|k| self.populations[(k, k)].abs())
            .chain((0..6).map(|k| self.coherences[(k, k)].re.abs()))
            .fold(0.0, f64::max);
        if decay == 0.0 {
            f64::INFINITY
        } else {
            freq / decay
        }
    }

    /// Largest rotation frequency of the coherences.
    pub fn max_frequency(&self) -> f64 {
        (0..6).map(|k| self.coherences[(k, k)].im.abs()).fold(0.0, f64::max)
    }

    /// Smallest nonzero decay rate among the eigenvalues of both blocks.
    pub fn slowest_relaxation(&self) -> Option<f64> {
        let pop = Schur::new(self.populations).complex_eigenvalues();
        let coh = Schur::new(self.coherences)
            .eigenvalues()
            .expect("complex Schur form is triangular");
        let rates: Vec<f64> = pop.iter().map(|z| -z.re).chain(coh.iter().map(|z| -z.re)).collect();
        let scale = rates.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        rates.into_iter().filter(|&r| r > 1e-12 * scale).reduce(f64::min)
    }
}

/// `HORIZON_FACTOR` slowest relaxation times.
pub fn default_horizon(generator: &Generator) -> f64 {
    match generator.slowest_relaxation() {
        Some(rate) => HORIZON_FACTOR / rate,
        None => 0.0,
    }
}

pub fn evolve(state0: &EigenState, generator: &Generator, t_grid: &[f64]) -> Result<Trajectory> {
    evolve_with(state0, generator, t_grid, Method::Auto, &Tolerances::default())
}

pub fn evolve_with(
    state0: &EigenState,
    generator: &Generator,
    t_grid: &[f64],
    method: Method,
    tol: &Tolerances,
) -> Result<Trajectory> {
    state0.validate()?;
    check_grid(t_grid)?;
    let method = match method {
        Method::Auto
            if generator.stiffness() > STIFFNESS_RATIO
                || generator.max_frequency() * (t_grid[t_grid.len() - 1] - t_grid[0]) > PHASE_BUDGET =>
        {
            Method::MatrixExponential
        }
        Method::Auto => Method::RungeKutta,
        m => m,
    };
    let (pops, cohs) = match method {
        Method::MatrixExponential => exponential_path(state0, generator, t_grid),
        _ => runge_kutta_path(state0, generator, t_grid, tol)?,
    };

    let mut states = Vec::with_capacity(t_grid.len());
    for (&t, (pop, coh)) in t_grid.iter().zip(pops.into_iter().zip(cohs)) {
        let drift = (pop.iter().sum::<f64>() - state0.trace()).abs();
        if drift > TRACE_DRIFT_TOL {
            return Err(PhysicsError::InvariantBreach { t, drift });
        }
        let s = EigenState { pop, coh };
        s.validate()?;
        states.push(s);
    }
    Ok(Trajectory {
        times: t_grid.to_vec(),
        states,
    })
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(PhysicsError::InvalidParameter {
            name: "t_grid",
            value: 0.0,
            reason: "must contain at least one time",
        });
    }
    for w in t_grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(PhysicsError::InvalidParameter {
                name: "t_grid",
                value: w[1],
                reason: "times must be strictly increasing",
            });
        }
    }
    Ok(())
}

type Blocks = (Vec<[f64; 4]>, Vec<[Complex64; 6]>);

fn runge_kutta_path(state0: &EigenState, g: &Generator, t_grid: &[f64], tol: &Tolerances) -> Result<Blocks> {
    let m = g.populations;
    let tr0 = state0.trace();
    let pops = integrator::integrate(
        |_, y, dy| {
            for i in 0..4 {
                dy[i] = (0..4).map(|j| m[(i, j)] * y[j]).sum();
            }
        },
        &state0.pop,
        t_grid,
        tol,
        |t, y| {
            let drift = (y.iter().sum::<f64>() - tr0).abs();
            if drift > TRACE_DRIFT_TOL {
                Err(PhysicsError::InvariantBreach { t, drift })
            } else {
                Ok(())
            }
        },
    )?;

    let c = g.coherences;
    let y0: Vec<f64> = state0
        .coh
        .iter()
        .map(|z| z.re)
        .chain(state0.coh.iter().map(|z| z.im))
        .collect();
    let cohs = integrator::integrate(
        |_, y, dy| {
            for i in 0..6 {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..6 {
                    acc += c[(i, j)] * Complex64::new(y[j], y[6 + j]);
                }
                dy[i] = acc.re;
                dy[6 + i] = acc.im;
            }
        },
        &y0,
        t_grid,
        tol,
        |_, _| Ok(()),
    )?;

    Ok((
        pops.into_iter().map(|v| [v[0], v[1], v[2], v[3]]).collect(),
        cohs.into_iter()
            .map(|v| std::array::from_fn(|k| Complex64::new(v[k], v[6 + k])))
            .collect(),
    ))
}

/// `exp(M t)` for a generator with zero column sums, by scaling and squaring
/// with the column sums held at one after every squaring.
fn stochastic_exp(m: &Matrix4<f64>, t: f64) -> Matrix4<f64> {
    let norm = (0..4).map(|j| m.column(j).abs().sum()).fold(0.0, f64::max) * t;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let mut e = (m * (t / 2f64.powi(squarings))).exp();
    let fix = |e: &mut Matrix4<f64>| {
        for mut col in e.column_iter_mut() {
            let s = col.sum();
            col /= s;
        }
    };
    fix(&mut e);
    for _ in 0..squarings {
        e = e * e;
        fix(&mut e);
    }
    e
}

fn exponential_path(state0: &EigenState, g: &Generator, t_grid: &[f64]) -> Blocks {
    let t0 = t_grid[0];
    let x0 = Vector4::from(state0.pop);
    let c0 = Vector6::from(state0.coh);
    let mut pops = Vec::with_capacity(t_grid.len());
    let mut cohs = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let dt = t - t0;
        let x = stochastic_exp(&g.populations, dt) * x0;
        let c = (g.coherences * Complex64::new(dt, 0.0)).exp() * c0;
        pops.push([x[0], x[1], x[2], x[3]]);
        cohs.push(std::array::from_fn(|k| c[k]));
    }
    (pops, cohs)
}
