//! Adaptive Dormand–Prince 5(4) for real first-order systems.

use crate::error::{PhysicsError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Hard cap on attempted steps per call.
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 5_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `t_grid[0]` and returns `y` at every grid
/// time. `check` sees every accepted step and may abort the run.
pub fn integrate<F, G>(
    mut f: F,
    y0: &[f64],
    t_grid: &[f64],
    tol: &Tolerances,
    mut check: G,
) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    G: FnMut(f64, &[f64]) -> Result<()>,
{
    let n = y0.len();
    let mut out = Vec::with_capacity(t_grid.len());
    let Some(&t_start) = t_grid.first() else {
        return Ok(out);
    };
    out.push(y0.to_vec());

    let mut t = t_start;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    f(t, &y, &mut k[0]);

    let mut h = initial_step(&y, &k[0], t_grid, tol);
    let mut steps = 0usize;

    for &t_target in &t_grid[1..] {
        while t < t_target {
            steps += 1;
            if steps > tol.max_steps {
                return Err(PhysicsError::ToleranceFailure { t, h });
            }
            let last = t + h >= t_target;
            let h_step = if last { t_target - t } else { h };

            for s in 1..7 {
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += h_step * A[s][j] * kj[i];
                    }
                    tmp[i] = acc;
                }
                f(t + C[s] * h_step, &tmp, &mut k[s]);
            }
            // stage 7 evaluates f at the 5th-order solution (FSAL)
            let mut err = 0.0f64;
            for i in 0..n {
                let mut hi = 0.0;
                let mut lo = 0.0;
                for s in 0..7 {
                    hi += B5[s] * k[s][i];
                    lo += B4[s] * k[s][i];
                }
                y_new[i] = y[i] + h_step * hi;
                let scale = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
                let e = h_step * (hi - lo) / scale;
                err = err.max(e.abs());
            }
            if !err.is_finite() {
                return Err(PhysicsError::ToleranceFailure { t, h: h_step });
            }

            if err <= 1.0 {
                t = if last { t_target } else { t + h_step };
                std::mem::swap(&mut y, &mut y_new);
                k.swap(0, 6);
                check(t, &y)?;
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).min(5.0) };
                if !last || h_step >= h {
                    h = h_step * grow;
                }
            } else {
                h = h_step * (0.9 * err.powf(-0.2)).max(0.2);
                if h <= f64::EPSILON * t.abs().max(1.0) {
                    return Err(PhysicsError::ToleranceFailure { t, h });
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

fn initial_step(y: &[f64], dy: &[f64], t_grid: &[f64], tol: &Tolerances) -> f64 {
    let span = t_grid.last().unwrap() - t_grid[0];
    let mut d0 = 0.0f64;
    let mut d1 = 0.0f64;
    for (yi, di) in y.iter().zip(dy) {
        let sc = tol.atol + tol.rtol * yi.abs();
        d0 = d0.max(yi.abs() / sc);
        d1 = d1.max(di.abs() / sc);
    }
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span.max(f64::MIN_POSITIVE)).max(1e-12)
}
