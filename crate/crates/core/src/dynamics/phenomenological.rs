//! Local master equation: each TLS is damped by its own bath in the bare
//! basis, with the coupling `ξ` entering only through the Hamiltonian.

use nalgebra::Matrix4;
use num_complex::Complex64;

use super::integrator::{self, Tolerances};
use super::lindblad::{self, Superoperator, LIOUVILLE_DIM};
use super::TRACE_DRIFT_TOL;
use crate::error::{PhysicsError, Result};
use crate::rates::{thermal_occupation, IhbBathConfig};
use crate::spectrum::{BareDensityMatrix, SystemParams};

/// Singular values below this fraction of the largest count as kernel.
const KERNEL_TOL: f64 = 1e-10;

/// `σ1⁻ = |g><e| ⊗ 1` in `(|ee>, |eg>, |ge>, |gg>)` order.
pub fn lowering_tls1() -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    m[(2, 0)] = Complex64::new(1.0, 0.0);
    m[(3, 1)] = Complex64::new(1.0, 0.0);
    m
}

/// `σ2⁻ = 1 ⊗ |g><e|`
pub fn lowering_tls2() -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    m[(1, 0)] = Complex64::new(1.0, 0.0);
    m[(3, 2)] = Complex64::new(1.0, 0.0);
    m
}

/// 16×16 generator. TLS `l` is damped at `γ_l` with `n̄_l = n̄(ω_l, T_l)`;
/// `γ_1 = baths.gamma1`, `γ_2 = baths.gamma2`.
pub fn phenomenological_generator(params: &SystemParams, baths: &IhbBathConfig) -> Superoperator {
    let mut l = lindblad::commutator(&params.hamiltonian());
    let channels = [
        (lowering_tls1(), baths.gamma1, params.omega1(), baths.t1),
        (lowering_tls2(), baths.gamma2, params.omega2(), baths.t2),
    ];
    for (sm, gamma, omega, temp) in channels {
        let n = thermal_occupation(omega, temp);
        l += lindblad::dissipator(&sm, gamma * (n + 1.0));
        if n > 0.0 {
            l += lindblad::dissipator(&sm.adjoint(), gamma * n);
        }
    }
    l
}

/// Bare-basis trajectory with the `(<σ1^z>, <σ2^z>)` series.
#[derive(Debug, Clone, PartialEq)]
pub struct BareTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<BareDensityMatrix>,
    pub sigma_z: Vec<(f64, f64)>,
}

pub fn phenomenological_evolve(
    params: &SystemParams,
    baths: &IhbBathConfig,
    rho0: &BareDensityMatrix,
    t_grid: &[f64],
) -> Result<BareTrajectory> {
    super::check_grid(t_grid)?;
    let gen = phenomenological_generator(params, baths);
    let v0 = lindblad::vectorize(rho0.matrix());
    let y0: Vec<f64> = v0.iter().map(|z| z.re).chain(v0.iter().map(|z| z.im)).collect();
    let tr0 = rho0.matrix().trace().re;
    let diag = [0, 5, 10, 15];

    let ys = integrator::integrate(
        |_, y, dy| lindblad::apply_realified(&gen, y, dy),
        &y0,
        t_grid,
        &Tolerances::default(),
        |t, y| {
            let drift = (diag.iter().map(|&k| y[k]).sum::<f64>() - tr0).abs();
            if drift > TRACE_DRIFT_TOL {
                Err(PhysicsError::InvariantBreach { t, drift })
            } else {
                Ok(())
            }
        },
    )?;

    let mut states = Vec::with_capacity(ys.len());
    let mut sigma_z = Vec::with_capacity(ys.len());
    for y in ys {
        let v: Vec<Complex64> = (0..LIOUVILLE_DIM)
            .map(|k| Complex64::new(y[k], y[LIOUVILLE_DIM + k]))
            .collect();
        let rho = BareDensityMatrix::from_matrix_unchecked(lindblad::unvectorize(&v));
        sigma_z.push(rho.sigma_z());
        states.push(rho);
    }
    Ok(BareTrajectory {
        times: t_grid.to_vec(),
        states,
        sigma_z,
    })
}

/// Unit-trace kernel vector of a Liouvillian, read off its SVD.
pub fn liouvillian_steady_state(gen: &Superoperator) -> Result<BareDensityMatrix> {
    let svd = gen.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let smax = svd.singular_values.max();
    let kernel: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= KERNEL_TOL * smax)
        .collect();
    if kernel.len() != 1 {
        return Err(PhysicsError::KernelDimension { dim: kernel.len() });
    }
    // A = U Σ V†: kernel vector is the conjugated row of V†.
    let v: Vec<Complex64> = v_t.row(kernel[0]).iter().map(|z| z.conj()).collect();
    let m = lindblad::unvectorize(&v);
    let m = m / m.trace();
    let m = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    BareDensityMatrix::new(m)
}

pub fn phenomenological_steady(params: &SystemParams, baths: &IhbBathConfig) -> Result<BareDensityMatrix> {
    liouvillian_steady_state(&phenomenological_generator(params, baths))
}

/// `<σ_l^z>_ss` of the local master equation.
pub fn phenomenological_sigma_z(params: &SystemParams, baths: &IhbBathConfig) -> Result<(f64, f64)> {
    Ok(phenomenological_steady(params, baths)?.sigma_z())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::max_abs;
    use crate::sample;

    #[test]
    fn uncoupled_limit_thermalizes_locally() {
        let p = SystemParams::new(21.0, 19.0, 1e-9).unwrap();
        let baths = IhbBathConfig::new(10.0, 5.0, 1.0, 0.7).unwrap();
        let (z1, z2) = phenomenological_sigma_z(&p, &baths).unwrap();
        assert!((z1 + (21.0f64 / 20.0).tanh()).abs() < 1e-8);
        assert!((z2 + (19.0f64 / 10.0).tanh()).abs() < 1e-8);
    }

    #[test]
    fn steady_state_is_a_fixed_point() {
        let p = SystemParams::new(20.0, 20.0, 0.1).unwrap();
        let baths = IhbBathConfig::new(10.0, 5.0, 1.0, 1.0).unwrap();
        let rho = phenomenological_steady(&p, &baths).unwrap();
        let traj = phenomenological_evolve(&p, &baths, &rho, &[0.0, 1.0, 5.0]).unwrap();
        for s in &traj.states {
            assert!(max_abs(&(s.matrix() - rho.matrix())) < 1e-9);
        }
    }

    #[test]
    fn evolution_preserves_trace_and_relaxes() {
        let p = SystemParams::new(20.5, 19.5, 0.3).unwrap();
        let baths = IhbBathConfig::new(8.0, 4.0, 1.0, 1.0).unwrap();
        let mut rng = sample::rng(31);
        let rho0 = BareDensityMatrix::new(sample::random_density(&mut rng)).unwrap();
        let traj = phenomenological_evolve(&p, &baths, &rho0, &[0.0, 5.0, 40.0]).unwrap();
        for s in &traj.states {
            assert!((s.matrix().trace().re - 1.0).abs() < 1e-8);
        }
        let ss = phenomenological_steady(&p, &baths).unwrap();
        assert!(max_abs(&(traj.states[2].matrix() - ss.matrix())) < 1e-8);
        let (a, b) = traj.sigma_z[2];
        let (c, d) = ss.sigma_z();
        assert!((a - c).abs() < 1e-8 && (b - d).abs() < 1e-8);
    }

    #[test]
    fn resonant_hot_bath_stays_hotter() {
        let p = SystemParams::new(20.0, 20.0, 0.1).unwrap();
        let baths = IhbBathConfig::new(10.0, 5.0, 1.0, 1.0).unwrap();
        let (z1, z2) = phenomenological_sigma_z(&p, &baths).unwrap();
        // less negative <σz> means a hotter TLS at equal splitting
        assert!(z1 > z2);
    }
}
