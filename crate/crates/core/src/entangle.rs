//! Concurrence of the two TLSs: the X-state closed form, the general
//! Wootters construction, and the sudden-death temperature.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{PhysicsError, Result};
use crate::rates::{chb_rates, ihb_rates, ChbBathConfig, IhbBathConfig, RateSet};
use crate::spectrum::{build_eigenbasis, BareDensityMatrix, SystemParams};
use crate::steady::scans::linspace;
use crate::steady::{steady_state, SteadyPopulations};

const X_TRACE_TOL: f64 = 1e-12;
const X_BOUND_SLACK: f64 = 1e-10;
/// Largest accepted `‖ρρ̃v − s v‖`.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Temperature resolution of [`threshold_temperature`].
pub const THRESHOLD_TOL: f64 = 1e-8;
/// Bracketing grid size for [`threshold_temperature`].
pub const THRESHOLD_GRID_POINTS: usize = 2001;

/// Density matrix of X form in the bare basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateMatrix {
    pub diag: [f64; 4],
    pub rho14: Complex64,
    pub rho23: Complex64,
}

impl XStateMatrix {
    pub fn new(diag: [f64; 4], rho14: Complex64, rho23: Complex64) -> Result<Self> {
        let x = Self { diag, rho14, rho23 };
        x.validate()?;
        Ok(x)
    }

    pub fn validate(&self) -> Result<()> {
        let tr: f64 = self.diag.iter().sum();
        if (tr - 1.0).abs() > X_TRACE_TOL {
            return Err(PhysicsError::InvalidState {
                reason: format!("X state trace = {tr}"),
            });
        }
        let d = self.diag;
        if self.rho23.norm_sqr() > d[1] * d[2] + X_BOUND_SLACK || self.rho14.norm_sqr() > d[0] * d[3] + X_BOUND_SLACK {
            return Err(PhysicsError::InvalidState {
                reason: "X state coherence exceeds its population bound".into(),
            });
        }
        Ok(())
    }

    /// Reads the X-form entries of a bare density matrix; the rest is dropped.
    pub fn from_matrix(m: &Matrix4<Complex64>) -> Self {
        Self {
            diag: std::array::from_fn(|i| m[(i, i)].re),
            rho14: m[(0, 3)],
            rho23: m[(1, 2)],
        }
    }

    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        let mut m = Matrix4::zeros();
        for (i, d) in self.diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(*d, 0.0);
        }
        m[(0, 3)] = self.rho14;
        m[(3, 0)] = self.rho14.conj();
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        m
    }

    pub fn to_bare(&self) -> BareDensityMatrix {
        BareDensityMatrix::from_matrix_unchecked(self.to_matrix())
    }
}

/// Bare-basis X state built from coherence-free steady populations.
pub fn assemble_steady_xstate(steady: &SteadyPopulations, theta: f64) -> XStateMatrix {
    let [t11, t22, t33, t44] = steady.pop;
    let (s, c) = (0.5 * theta).sin_cos();
    let (c2, s2) = (c * c, s * s);
    XStateMatrix {
        diag: [t11, c2 * t22 + s2 * t33, s2 * t22 + c2 * t33, t44],
        rho14: Complex64::new(0.0, 0.0),
        rho23: Complex64::new(0.5 * theta.sin() * (t22 - t33), 0.0),
    }
}

/// `2 max{0, |ρ23| − √(ρ11ρ44), |ρ14| − √(ρ22ρ33)}`
pub fn concurrence_x(rho: &XStateMatrix) -> f64 {
    let d = rho.diag;
    let a = rho.rho23.norm() - (d[0] * d[3]).max(0.0).sqrt();
    let b = rho.rho14.norm() - (d[1] * d[2]).max(0.0).sqrt();
    (2.0 * a.max(b).max(0.0)).min(1.0)
}

/// `σy ⊗ σy` in `(|ee>, |eg>, |ge>, |gg>)` order.
fn sigma_yy() -> Matrix4<Complex64> {
    let mut y = Matrix4::zeros();
    y[(0, 3)] = Complex64::new(-1.0, 0.0);
    y[(3, 0)] = Complex64::new(-1.0, 0.0);
    y[(1, 2)] = Complex64::new(1.0, 0.0);
    y[(2, 1)] = Complex64::new(1.0, 0.0);
    y
}

/// `ρ̃ = (σy ⊗ σy) ρ* (σy ⊗ σy)`
pub fn spin_flip(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let y = sigma_yy();
    y * rho.conjugate() * y
}

fn psd_sqrt(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let herm = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let roots = eig.eigenvalues.map(|x| Complex64::new(x.max(0.0).sqrt(), 0.0));
    let v = eig.eigenvectors;
    v * Matrix4::from_diagonal(&roots) * v.adjoint()
}

/// Square roots of the eigenvalues of `ρρ̃`, descending.
///
/// They are the singular values of `√ρ √ρ̃`, i.e. the eigenvalues of
/// `√(√ρ ρ̃ √ρ)`. Each is checked against `ρρ̃` through `v = √ρ w` for the
/// corresponding eigenvector `w` of `√ρ ρ̃ √ρ`. A failed check falls back
/// to a dense non-Hermitian eigensolve of `ρρ̃`.
pub fn wootters_spectrum(rho: &Matrix4<Complex64>) -> Result<[f64; 4]> {
    match hermitian_spectrum(rho) {
        Ok(l) => Ok(l),
        Err(PhysicsError::EigensolverFailure { .. }) => direct_spectrum(rho),
        Err(e) => Err(e),
    }
}

fn hermitian_spectrum(rho: &Matrix4<Complex64>) -> Result<[f64; 4]> {
    let sq = psd_sqrt(rho);
    let sq_tilde = sigma_yy() * sq.conjugate() * sigma_yy();
    let b = sq * sq_tilde;
    let svd = b.svd(true, false);
    let u = svd.u.expect("requested U");
    let a = rho * spin_flip(rho);

    let mut pairs: Vec<(f64, usize)> = svd.singular_values.iter().copied().zip(0..4).collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut out = [0.0; 4];
    for (slot, &(lambda, k)) in out.iter_mut().zip(&pairs) {
        let v = sq * u.column(k);
        let s = Complex64::new(lambda * lambda, 0.0);
        let residual = (a * v - v * s).norm();
        if residual > RESIDUAL_TOL {
            return Err(PhysicsError::EigensolverFailure { residual });
        }
        *slot = lambda;
    }
    Ok(out)
}

fn direct_spectrum(rho: &Matrix4<Complex64>) -> Result<[f64; 4]> {
    let a = rho * spin_flip(rho);
    let eig = a
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular");
    let mut out = [0.0; 4];
    for (slot, s) in out.iter_mut().zip(eig.iter()) {
        let shifted = a - Matrix4::identity() * *s;
        let residual = shifted.singular_values().min();
        if residual > RESIDUAL_TOL {
            return Err(PhysicsError::EigensolverFailure { residual });
        }
        *slot = s.re.max(0.0).sqrt();
    }
    out.sort_by(|x, y| y.total_cmp(x));
    Ok(out)
}

/// Square roots of the eigenvalues of `ρρ̃` from the dense non-Hermitian
/// eigensolve alone, descending. Exposed for cross-checks.
pub fn wootters_spectrum_direct(rho: &Matrix4<Complex64>) -> Result<[f64; 4]> {
    direct_spectrum(rho)
}

/// `max{0, λ1 − λ2 − λ3 − λ4}` for any two-qubit state.
pub fn concurrence_general(rho: &BareDensityMatrix) -> Result<f64> {
    let l = wootters_spectrum(rho.matrix())?;
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// `|<μ32>| − √(<μ11><μ44>)`, the smooth quantity whose positive part
/// (doubled) is the steady concurrence.
pub fn concurrence_witness(steady: &SteadyPopulations, theta: f64) -> f64 {
    let x = assemble_steady_xstate(steady, theta);
    x.rho23.norm() - (x.diag[0] * x.diag[3]).max(0.0).sqrt()
}

pub fn steady_concurrence(steady: &SteadyPopulations, theta: f64) -> f64 {
    concurrence_x(&assemble_steady_xstate(steady, theta))
}

/// Bath couplings with the temperature left free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BathTemplate {
    /// Independent baths held at a common temperature `T1 = T2 = T`.
    EqualIhb { gamma1: f64, gamma2: f64 },
    /// Common bath; a dark sector starts from `<τ33(0)> = tau33_0`.
    Chb {
        gamma1_e1: f64,
        gamma2_e1: f64,
        gamma1_e2: f64,
        gamma2_e2: f64,
        tau33_0: f64,
    },
}

impl BathTemplate {
    pub fn rates(&self, params: &SystemParams, temp: f64) -> Result<RateSet> {
        let basis = build_eigenbasis(params)?;
        Ok(match *self {
            BathTemplate::EqualIhb { gamma1, gamma2 } => {
                RateSet::Ihb(ihb_rates(&basis, &IhbBathConfig::new(temp, temp, gamma1, gamma2)?))
            }
            BathTemplate::Chb {
                gamma1_e1,
                gamma2_e1,
                gamma1_e2,
                gamma2_e2,
                ..
            } => RateSet::Chb(chb_rates(
                &basis,
                &ChbBathConfig::new(temp, gamma1_e1, gamma2_e1, gamma1_e2, gamma2_e2)?,
            )),
        })
    }

    pub fn steady(&self, params: &SystemParams, temp: f64) -> Result<SteadyPopulations> {
        let tau = match *self {
            BathTemplate::Chb { tau33_0, .. } => tau33_0,
            BathTemplate::EqualIhb { .. } => 0.0,
        };
        steady_state(&self.rates(params, temp)?, tau)
    }
}

/// Below this top-level population the witness is dominated by underflow.
pub const RESOLVED_POPULATION: f64 = 1e-290;

/// Sudden-death temperature: the largest `T` in the bracket where the
/// concurrence witness changes sign from positive to non-positive.
pub fn threshold_temperature(params: &SystemParams, template: &BathTemplate, bracket: (f64, f64)) -> Result<f64> {
    let (lo, hi) = bracket;
    if !(lo >= 0.0 && hi > lo) {
        return Err(PhysicsError::InvalidParameter {
            name: "bracket",
            value: hi,
            reason: "need 0 <= T_lo < T_hi",
        });
    }
    let theta = build_eigenbasis(params)?.theta;
    let witness = |t: f64| -> Result<f64> {
        let s = template.steady(params, t)?;
        if s.pop[0] < RESOLVED_POPULATION {
            return Ok(0.0);
        }
        Ok(concurrence_witness(&s, theta))
    };

    let grid = linspace(lo, hi, THRESHOLD_GRID_POINTS);
    let mut last_positive = None;
    for (k, &t) in grid.iter().enumerate() {
        if witness(t)? > 0.0 {
            last_positive = Some(k);
        }
    }
    let Some(k) = last_positive else {
        return Err(PhysicsError::NoEntanglement);
    };
    if k + 1 == grid.len() {
        return Err(PhysicsError::NoRoot {
            quantity: "concurrence witness",
        });
    }
    let (mut a, mut b) = (grid[k], grid[k + 1]);
    while b - a > THRESHOLD_TOL {
        let m = 0.5 * (a + b);
        if witness(m)? > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::max_abs;
    use crate::sample;
    use crate::spectrum::eigen_to_bare;
    use crate::steady::Regime;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn pops(p: [f64; 4]) -> SteadyPopulations {
        SteadyPopulations {
            pop: p,
            regime: Regime::Ihb,
            tau33_initial: None,
        }
    }

    fn werner(p: f64) -> BareDensityMatrix {
        let h = Complex64::new(0.5, 0.0);
        let mut m = Matrix4::identity() * Complex64::new((1.0 - p) / 4.0, 0.0);
        for &(i, j) in &[(1, 1), (2, 2), (1, 2), (2, 1)] {
            m[(i, j)] += h * p;
        }
        BareDensityMatrix::new(m).unwrap()
    }

    #[test]
    fn steady_xstate_examples() {
        let x = assemble_steady_xstate(&pops([0.0, 0.0, 0.0, 1.0]), 0.8);
        assert_eq!(x.diag, [0.0, 0.0, 0.0, 1.0]);
        assert_eq!(x.rho23, Complex64::new(0.0, 0.0));
        let x = assemble_steady_xstate(&pops([0.0, 1.0, 0.0, 0.0]), FRAC_PI_2);
        assert!((x.diag[1] - 0.5).abs() < 1e-15 && (x.diag[2] - 0.5).abs() < 1e-15);
        assert!((x.rho23.re - 0.5).abs() < 1e-15);
        assert!((concurrence_x(&x) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn steady_xstate_matches_full_transform() {
        let mut rng = sample::rng(61);
        for _ in 0..50 {
            let s = sample::random_eigen_state(&mut rng);
            let st = pops(s.pop);
            let theta = rand::Rng::random_range(&mut rng, 0.01..PI - 0.01);
            let x = assemble_steady_xstate(&st, theta);
            let full = eigen_to_bare(&st.to_state(), theta);
            assert!(max_abs(&(x.to_matrix() - full.matrix())) < 1e-15);
            assert!((x.diag.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn werner_states() {
        assert!((concurrence_general(&werner(1.0)).unwrap() - 1.0).abs() < 1e-10);
        assert!(concurrence_general(&werner(1.0 / 3.0)).unwrap() < 1e-10);
        for p in [0.2f64, 0.5, 0.8] {
            let want = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert!((concurrence_general(&werner(p)).unwrap() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn product_and_diagonal_states_are_separable() {
        assert_eq!(concurrence_general(&BareDensityMatrix::bare_state(1)).unwrap(), 0.0);
        let x = XStateMatrix::new([0.1, 0.2, 0.3, 0.4], Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(concurrence_x(&x), 0.0);
    }

    #[test]
    fn x_formula_matches_general_on_random_x_states() {
        let mut rng = sample::rng(62);
        for _ in 0..300 {
            let m = sample::random_x_state(&mut rng);
            let x = XStateMatrix::from_matrix(&m);
            let general = concurrence_general(&BareDensityMatrix::new(m).unwrap()).unwrap();
            assert!((concurrence_x(&x) - general).abs() < 1e-10);
        }
    }

    #[test]
    fn hermitian_and_direct_paths_agree() {
        let mut rng = sample::rng(63);
        for _ in 0..100 {
            let rho = sample::random_density(&mut rng);
            let a = wootters_spectrum(&rho).unwrap();
            let b = wootters_spectrum_direct(&rho).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x * x - y * y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn local_phases_do_not_change_concurrence() {
        let mut rng = sample::rng(64);
        for _ in 0..50 {
            let rho = sample::random_density(&mut rng);
            let (a, b) = (rand::Rng::random_range(&mut rng, 0.0..6.0), rand::Rng::random_range(&mut rng, 0.0..6.0));
            // diag(e^{ia}, 1) ⊗ diag(e^{ib}, 1)
            let u = Matrix4::from_diagonal(&nalgebra::Vector4::new(
                Complex64::from_polar(1.0, a + b),
                Complex64::from_polar(1.0, a),
                Complex64::from_polar(1.0, b),
                Complex64::new(1.0, 0.0),
            ));
            let c0 = concurrence_general(&BareDensityMatrix::from_matrix_unchecked(rho)).unwrap();
            let c1 = concurrence_general(&BareDensityMatrix::from_matrix_unchecked(u * rho * u.adjoint())).unwrap();
            assert!((0.0..=1.0).contains(&c0));
            assert!((c0 - c1).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_invalid_x_states() {
        let z = Complex64::new(0.0, 0.0);
        assert!(XStateMatrix::new([0.2, 0.2, 0.2, 0.2], z, z).is_err());
        assert!(XStateMatrix::new([0.25; 4], z, Complex64::new(0.3, 0.0)).is_err());
    }

    fn fig4(xi: f64) -> SystemParams {
        SystemParams::new(20.0, 20.0, xi).unwrap()
    }

    const IHB: BathTemplate = BathTemplate::EqualIhb { gamma1: 1.0, gamma2: 1.0 };

    #[test]
    fn ground_state_limit_is_separable() {
        let s = IHB.steady(&fig4(10.0), 0.0).unwrap();
        assert_eq!(steady_concurrence(&s, FRAC_PI_2), 0.0);
    }

    #[test]
    fn resonant_identity_with_populations() {
        for t in [1.0, 3.0, 6.0] {
            let s = IHB.steady(&fig4(6.0), t).unwrap();
            let p = s.pop;
            let want = 2.0 * (0.5 * (p[1] - p[2]).abs() - (p[0] * p[3]).sqrt()).max(0.0);
            assert!((steady_concurrence(&s, FRAC_PI_2) - want).abs() < 1e-13);
        }
    }

    #[test]
    fn sudden_death_ordering() {
        let hi = threshold_temperature(&fig4(10.0), &IHB, (0.01, 60.0)).unwrap();
        let lo = threshold_temperature(&fig4(2.0), &IHB, (0.01, 60.0)).unwrap();
        assert!(hi > lo);
        let s = IHB.steady(&fig4(10.0), hi + 1e-6).unwrap();
        assert_eq!(steady_concurrence(&s, FRAC_PI_2), 0.0);
        let s = IHB.steady(&fig4(10.0), hi - 1e-3).unwrap();
        assert!(steady_concurrence(&s, FRAC_PI_2) > 0.0);
    }

    #[test]
    fn vanishing_coupling_has_no_entanglement() {
        for xi in [1e-3, 1e-9] {
            assert_eq!(
                threshold_temperature(&fig4(xi), &IHB, (0.01, 60.0)),
                Err(PhysicsError::NoEntanglement)
            );
        }
    }

    #[test]
    fn common_bath_threshold_exists_off_resonance() {
        let p = SystemParams::from_mixing_angle(20.0, 10.0, 1.2).unwrap();
        let chb = BathTemplate::Chb {
            gamma1_e1: 1.0,
            gamma2_e1: 1.0,
            gamma1_e2: 1.0,
            gamma2_e2: 1.0,
            tau33_0: 0.0,
        };
        let t = threshold_temperature(&p, &chb, (0.01, 60.0)).unwrap();
        assert!(t > 0.01 && t < 60.0);
    }
}
