use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{PhysicsError, Result};

/// Zero-based `(i, j)` positions of the stored coherences
/// `<τ21>, <τ31>, <τ41>, <τ32>, <τ42>, <τ43>`.
pub const COHERENCE_SLOTS: [(usize, usize); 6] = [(1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (3, 2)];

const POP_FLOOR: f64 = -1e-10;
const TRACE_TOL: f64 = 1e-10;
const CAUCHY_SCHWARZ_SLACK: f64 = 1e-9;

/// Density matrix in the eigenbasis: four populations and the six
/// lower-triangle coherences. `<τ_ij>` here is the matrix element
/// `<λ_i|ρ|λ_j>`, so `<τ21>` rotates as `exp(+iε2 t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenState {
    pub pop: [f64; 4],
    pub coh: [Complex64; 6],
}

impl EigenState {
    pub fn new(pop: [f64; 4], coh: [Complex64; 6]) -> Result<Self> {
        let state = Self { pop, coh };
        state.validate()?;
        Ok(state)
    }

    /// A coherence-free state.
    pub fn from_populations(pop: [f64; 4]) -> Result<Self> {
        Self::new(pop, [Complex64::new(0.0, 0.0); 6])
    }

    /// `|λ_{index+1}>`.
    pub fn basis_state(index: usize) -> Self {
        let mut pop = [0.0; 4];
        pop[index] = 1.0;
        Self {
            pop,
            coh: [Complex64::new(0.0, 0.0); 6],
        }
    }

    /// Reads populations and lower-triangle coherences; the upper triangle is ignored.
    pub fn from_matrix(m: &Matrix4<Complex64>) -> Self {
        let mut pop = [0.0; 4];
        for (i, p) in pop.iter_mut().enumerate() {
            *p = m[(i, i)].re;
        }
        let mut coh = [Complex64::new(0.0, 0.0); 6];
        for (slot, &(i, j)) in coh.iter_mut().zip(COHERENCE_SLOTS.iter()) {
            *slot = m[(i, j)];
        }
        Self { pop, coh }
    }

    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = self.element(i, j);
            }
        }
        m
    }

    /// `<λ_i|ρ|λ_j>`, zero-based.
    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        if i == j {
            return Complex64::new(self.pop[i], 0.0);
        }
        let (lo, hi, conj) = if i > j { (i, j, false) } else { (j, i, true) };
        let k = COHERENCE_SLOTS
            .iter()
            .position(|&s| s == (lo, hi))
            .expect("every off-diagonal pair has a slot");
        if conj {
            self.coh[k].conj()
        } else {
            self.coh[k]
        }
    }

    pub fn trace(&self) -> f64 {
        self.pop.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        for (index, &p) in self.pop.iter().enumerate() {
            if p < POP_FLOOR || !p.is_finite() {
                return Err(PhysicsError::NonPositivePopulation { index, value: p });
            }
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(PhysicsError::InvalidState {
                reason: format!("trace = {tr}"),
            });
        }
        for (c, &(i, j)) in self.coh.iter().zip(COHERENCE_SLOTS.iter()) {
            if c.norm_sqr() > self.pop[i].max(0.0) * self.pop[j].max(0.0) + CAUCHY_SCHWARZ_SLACK {
                return Err(PhysicsError::InvalidState {
                    reason: format!("|<τ{}{}>|² exceeds the population product", i + 1, j + 1),
                });
            }
        }
        Ok(())
    }
}

/// Ordered sample times and the state at each.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<EigenState>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&EigenState> {
        self.states.last()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &EigenState)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}
