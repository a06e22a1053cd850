//! Superoperators on row-major vectorized 4×4 density matrices.
//!
//! With `vec(ρ)[4i + j] = ρ_ij`, a sandwich `A ρ B` acts as `(A ⊗ Bᵀ) vec(ρ)`.

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;

pub type Superoperator = DMatrix<Complex64>;

pub const DIM: usize = 4;
pub const LIOUVILLE_DIM: usize = DIM * DIM;

fn dyn4(m: &Matrix4<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(DIM, DIM, |i, j| m[(i, j)])
}

/// `ρ ↦ A ρ B`
pub fn sandwich(a: &Matrix4<Complex64>, b: &Matrix4<Complex64>) -> Superoperator {
    dyn4(a).kronecker(&dyn4(&b.transpose()))
}

/// `ρ ↦ −i[H, ρ]`
pub fn commutator(h: &Matrix4<Complex64>) -> Superoperator {
    let id = Matrix4::identity();
    (sandwich(h, &id) - sandwich(&id, h)) * Complex64::new(0.0, -1.0)
}

/// `ρ ↦ rate (L ρ L† − ½{L†L, ρ})`
pub fn dissipator(l: &Matrix4<Complex64>, rate: f64) -> Superoperator {
    let id = Matrix4::identity();
    let ld = l.adjoint();
    let ldl = ld * l;
    let half = Complex64::new(0.5, 0.0);
    (sandwich(l, &ld) - (sandwich(&ldl, &id) + sandwich(&id, &ldl)) * half) * Complex64::new(rate, 0.0)
}

pub fn vectorize(rho: &Matrix4<Complex64>) -> DVector<Complex64> {
    DVector::from_fn(LIOUVILLE_DIM, |k, _| rho[(k / DIM, k % DIM)])
}

pub fn unvectorize(v: &[Complex64]) -> Matrix4<Complex64> {
    Matrix4::from_fn(|i, j| v[DIM * i + j])
}

/// Applies `L` to the realified vector `[Re v; Im v]`.
pub fn apply_realified(l: &Superoperator, y: &[f64], dy: &mut [f64]) {
    let n = l.nrows();
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += l[(i, j)] * Complex64::new(y[j], y[n + j]);
        }
        dy[i] = acc.re;
        dy[n + i] = acc.im;
    }
}
