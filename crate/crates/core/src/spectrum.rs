//! Bare-state and eigenstate descriptions of the two coupled TLSs.
//!
//! Bare basis ordering is `(|ee>, |eg>, |ge>, |gg>)`; the eigenbasis
//! `(λ1, λ2, λ3, λ4)` is ordered by descending energy. The single-excitation
//! eigenstates are
//!
//! ```text
//! |λ2> =  cos(θ/2)|eg> + sin(θ/2)|ge>
//! |λ3> = -sin(θ/2)|eg> + cos(θ/2)|ge>
//! ```
//!
//! with `tan θ = 2ξ/Δω`. Units: ħ = k_B = 1, everything in units of a
//! reference rate γ.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::dynamics::EigenState;
use crate::error::{PhysicsError, Result};

/// Detuning-to-coupling ratio above which the dispersive picture is flagged.
pub const DISPERSIVE_VALIDITY_RATIO: f64 = 0.3;

const TRACE_TOL: f64 = 1e-12;
const EIGEN_FLOOR: f64 = -1e-10;
const HERMITIAN_TOL: f64 = 1e-12;

/// Level splittings and coupling of the two TLSs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    omega1: f64,
    omega2: f64,
    xi: f64,
}

impl SystemParams {
    /// Builds a parameter set, rejecting anything that leaves `ε2 <= 0`.
    pub fn new(omega1: f64, omega2: f64, xi: f64) -> Result<Self> {
        positive("omega1", omega1)?;
        positive("omega2", omega2)?;
        positive("xi", xi)?;
        let params = Self { omega1, omega2, xi };
        let eps2 = params.mean_frequency() - params.half_splitting();
        if eps2 <= 0.0 {
            return Err(PhysicsError::Positivity { eps2 });
        }
        Ok(params)
    }

    /// Parameters from mean frequency, coupling and mixing angle.
    pub fn from_mixing_angle(omega_m: f64, xi: f64, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < std::f64::consts::PI) {
            return Err(PhysicsError::Range {
                name: "theta",
                value: theta,
                min: 0.0,
                max: std::f64::consts::PI,
            });
        }
        positive("xi", xi)?;
        let detuning = theta_to_detuning(theta, xi);
        Self::new(omega_m + detuning / 2.0, omega_m - detuning / 2.0, xi)
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// ω_m = (ω1 + ω2)/2
    pub fn mean_frequency(&self) -> f64 {
        0.5 * (self.omega1 + self.omega2)
    }

    /// Δω = ω1 − ω2
    pub fn detuning(&self) -> f64 {
        self.omega1 - self.omega2
    }

    /// √(Δω²/4 + ξ²)
    fn half_splitting(&self) -> f64 {
        let d = self.detuning();
        (0.25 * d * d + self.xi * self.xi).sqrt()
    }

    /// Bare energies `E_η = (ω_m, Δω/2, −Δω/2, −ω_m)`.
    pub fn bare_energies(&self) -> [f64; 4] {
        let wm = self.mean_frequency();
        let half = 0.5 * self.detuning();
        [wm, half, -half, -wm]
    }

    /// `H_TLSs` in the bare basis.
    pub fn hamiltonian(&self) -> Matrix4<Complex64> {
        let e = self.bare_energies();
        let mut h = Matrix4::<Complex64>::zeros();
        for (i, ei) in e.iter().enumerate() {
            h[(i, i)] = Complex64::new(*ei, 0.0);
        }
        h[(1, 2)] = Complex64::new(self.xi, 0.0);
        h[(2, 1)] = Complex64::new(self.xi, 0.0);
        h
    }
}

/// Largest entry modulus.
pub fn max_abs(m: &Matrix4<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
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

/// Mixing angle, transition energies and eigenenergies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenBasis {
    pub theta: f64,
    pub eps1: f64,
    pub eps2: f64,
    /// `(E_λ1, E_λ2, E_λ3, E_λ4)`, descending.
    pub energies: [f64; 4],
}

impl EigenBasis {
    pub fn half_angle(&self) -> (f64, f64) {
        let (s, c) = (0.5 * self.theta).sin_cos();
        (c, s)
    }

    /// Columns are the eigenvectors `|λj>` written in the bare basis.
    pub fn rotation(&self) -> Matrix4<f64> {
        rotation(self.theta)
    }
}

pub(crate) fn rotation(theta: f64) -> Matrix4<f64> {
    let (s, c) = (0.5 * theta).sin_cos();
    Matrix4::new(
        1.0, 0.0, 0.0, 0.0, //
        0.0, c, -s, 0.0, //
        0.0, s, c, 0.0, //
        0.0, 0.0, 0.0, 1.0,
    )
}

/// Diagonalizes `H_TLSs`.
///
/// The angle branch follows the sign of the detuning: `θ ∈ (0, π/2)` for
/// `Δω > 0`, `θ ∈ (π/2, π)` for `Δω < 0`, and exactly `π/2` at resonance.
pub fn build_eigenbasis(params: &SystemParams) -> Result<EigenBasis> {
    let wm = params.mean_frequency();
    let r = params.half_splitting();
    let eps1 = wm + r;
    let eps2 = wm - r;
    if eps2 <= 0.0 {
        return Err(PhysicsError::Positivity { eps2 });
    }
    let dw = params.detuning();
    let ratio = (2.0 * params.xi / dw).atan();
    let theta = if dw > 0.0 {
        ratio
    } else if dw < 0.0 {
        std::f64::consts::PI + ratio
    } else {
        FRAC_PI_2
    };
    Ok(EigenBasis {
        theta,
        eps1,
        eps2,
        energies: [wm, r, -r, -wm],
    })
}

/// Δω = 2ξ / tan θ, with resonance pinned to zero.
pub fn theta_to_detuning(theta: f64, xi: f64) -> f64 {
    if theta == FRAC_PI_2 {
        0.0
    } else {
        2.0 * xi / theta.tan()
    }
}

/// A validated two-qubit density matrix in the bare basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BareDensityMatrix(Matrix4<Complex64>);

impl BareDensityMatrix {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(rho: Matrix4<Complex64>) -> Result<Self> {
        let herm_err = max_abs(&(rho - rho.adjoint()));
        if herm_err > HERMITIAN_TOL {
            return Err(PhysicsError::InvalidState {
                reason: format!("not Hermitian (max deviation {herm_err:e})"),
            });
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(PhysicsError::InvalidState {
                reason: format!("trace = {tr}"),
            });
        }
        let herm = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        let min_eig = SymmetricEigen::new(herm).eigenvalues.min();
        if min_eig < EIGEN_FLOOR {
            return Err(PhysicsError::InvalidState {
                reason: format!("negative eigenvalue {min_eig:e}"),
            });
        }
        Ok(Self(rho))
    }

    pub fn from_matrix_unchecked(rho: Matrix4<Complex64>) -> Self {
        Self(rho)
    }

    /// Pure product/bare state `|η_i><η_i|`, index 0 is `|ee>`.
    pub fn bare_state(index: usize) -> Self {
        let mut m = Matrix4::zeros();
        m[(index, index)] = Complex64::new(1.0, 0.0);
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix4<Complex64> {
        self.0
    }

    /// `<μ_ij> = <η_i|ρ|η_j>`, zero-based.
    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    /// `(<σ1^z>, <σ2^z>)` computed as plain traces.
    pub fn sigma_z(&self) -> (f64, f64) {
        let p: Vec<f64> = (0..4).map(|i| self.0[(i, i)].re).collect();
        (p[0] + p[1] - p[2] - p[3], p[0] - p[1] + p[2] - p[3])
    }
}

/// Rewrites an eigenbasis state in the bare basis, line by line.
pub fn eigen_to_bare(state: &EigenState, theta: f64) -> BareDensityMatrix {
    let (s, c) = (0.5 * theta).sin_cos();
    let (s2, c2) = (s * s, c * c);
    let sin_t = theta.sin();
    let t = |i: usize, j: usize| state.element(i, j);
    let re = |x: f64| Complex64::new(x, 0.0);

    let mut mu = Matrix4::<Complex64>::zeros();
    mu[(0, 0)] = t(0, 0);
    mu[(3, 3)] = t(3, 3);
    let cross = t(1, 2) + t(2, 1);
    mu[(1, 1)] = re(c2) * t(1, 1) + re(s2) * t(2, 2) - re(0.5 * sin_t) * cross;
    mu[(2, 2)] = re(s2) * t(1, 1) + re(c2) * t(2, 2) + re(0.5 * sin_t) * cross;

    mu[(1, 2)] = -re(s2) * t(2, 1) + re(c2) * t(1, 2) + re(0.5 * sin_t) * (t(1, 1) - t(2, 2));
    mu[(0, 1)] = re(c) * t(0, 1) - re(s) * t(0, 2);
    mu[(0, 2)] = re(s) * t(0, 1) + re(c) * t(0, 2);
    mu[(0, 3)] = t(0, 3);
    mu[(1, 3)] = re(c) * t(1, 3) - re(s) * t(2, 3);
    mu[(2, 3)] = re(s) * t(1, 3) + re(c) * t(2, 3);

    for i in 0..4 {
        for j in 0..i {
            mu[(i, j)] = mu[(j, i)].conj();
        }
    }
    BareDensityMatrix(mu)
}

/// Inverse of [`eigen_to_bare`] through the rotation matrix.
pub fn bare_to_eigen(rho: &BareDensityMatrix, theta: f64) -> EigenState {
    let u = rotation(theta).map(|x| Complex64::new(x, 0.0));
    EigenState::from_matrix(&(u.transpose() * rho.0 * u))
}

/// Steady or transient `(<σ1^z>, <σ2^z>)` read directly off the eigenbasis state.
pub fn sigma_z_expectations(state: &EigenState, theta: f64) -> (f64, f64) {
    let p = state.pop;
    let base = p[0] - p[3];
    let diff = theta.cos() * (p[1] - p[2]);
    let cross = theta.sin() * (state.element(1, 2) + state.element(2, 1)).re;
    // l = 1: -(-1)^1 = +1 on the cosine term, (-1)^1 = -1 on the sine term.
    (base + diff - cross, base - diff + cross)
}

/// Fröhlich–Nakajima shifted splittings `ω̄1 = ω1 + ξ²/Δω`, `ω̄2 = ω2 − ξ²/Δω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveShift {
    pub omega1_bar: f64,
    pub omega2_bar: f64,
    /// `|ξ/Δω| < 0.3`
    pub valid: bool,
}

impl DispersiveShift {
    /// `T_pred(ω_l) = (ω_l/ω̄_l) T_l`
    pub fn predicted_temperatures(&self, params: &SystemParams, t1: f64, t2: f64) -> (f64, f64) {
        (
            params.omega1() / self.omega1_bar * t1,
            params.omega2() / self.omega2_bar * t2,
        )
    }
}

pub fn dispersive_shift(params: &SystemParams) -> Result<DispersiveShift> {
    let dw = params.detuning();
    if dw == 0.0 {
        return Err(PhysicsError::DegenerateDetuning);
    }
    let shift = params.xi() * params.xi() / dw;
    Ok(DispersiveShift {
        omega1_bar: params.omega1() + shift,
        omega2_bar: params.omega2() - shift,
        valid: (params.xi() / dw).abs() < DISPERSIVE_VALIDITY_RATIO,
    })
}
