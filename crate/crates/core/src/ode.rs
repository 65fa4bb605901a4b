//! Classical fixed-step fourth-order Runge–Kutta for linear-space states.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::su2::{Complex2x2, StateVector2};

/// States the integrator and the finite-difference stencils can combine.
pub trait VectorSpace:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
}

impl VectorSpace for Complex2x2 {
    fn magnitude(&self) -> f64 {
        self.frobenius_norm()
    }
}

impl VectorSpace for StateVector2 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Step-doubling check of the local truncation error.
///
/// Every `check_every` steps (and always on the first) one full step is
/// compared against two half steps; the Richardson estimate
/// `‖y_full − y_half‖/15` must stay below `max_local_error·‖y‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub check_every: usize,
    pub max_local_error: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            check_every: 64,
            max_local_error: 1e-6,
        }
    }
}

pub fn rk4_step<S: VectorSpace>(f: &impl Fn(f64, &S) -> S, t: f64, y: &S, dt: f64) -> S {
    let half = 0.5 * dt;
    let k1 = f(t, y);
    let k2 = f(t + half, &(*y + k1 * half));
    let k3 = f(t + half, &(*y + k2 * half));
    let k4 = f(t + dt, &(*y + k3 * dt));
    *y + (k1 + (k2 + k3) * 2.0 + k4) * (dt / 6.0)
}

/// Integrates `y' = f(t, y)` for `steps` steps of signed size `dt`,
/// returning all `steps + 1` states including `y0`.
pub fn integrate<S: VectorSpace>(
    f: impl Fn(f64, &S) -> S,
    y0: S,
    t_start: f64,
    dt: f64,
    steps: usize,
    control: StepControl,
) -> Result<Vec<S>> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(y0);
    let mut y = y0;
    for k in 0..steps {
        let t = t_start + k as f64 * dt;
        let next = rk4_step(&f, t, &y, dt);
        if control.check_every > 0 && k % control.check_every == 0 {
            let mid = rk4_step(&f, t, &y, 0.5 * dt);
            let fine = rk4_step(&f, t + 0.5 * dt, &mid, 0.5 * dt);
            let estimate = (next - fine).magnitude() / 15.0;
            let bound = control.max_local_error * y.magnitude();
            if !(estimate <= bound) {
                return Err(Error::StepTooLarge { t, estimate, bound });
            }
        }
        y = next;
        out.push(y);
    }
    Ok(out)
}

/// Fourth-order finite-difference derivative of uniformly spaced samples.
///
/// Central stencil in the interior, one-sided fourth-order stencils at the two
/// outermost points on each end. Series shorter than five samples fall back
/// to second order (or first order for two samples).
pub fn differentiate<S: VectorSpace>(samples: &[S], dt: f64) -> Vec<S> {
    let n = samples.len();
    let f = samples;
    match n {
        0 => Vec::new(),
        1 => vec![f[0] * 0.0],
        2 => {
            let d = (f[1] - f[0]) * (1.0 / dt);
            vec![d, d]
        }
        3 | 4 => (0..n)
            .map(|i| {
                let s = 1.0 / (2.0 * dt);
                if i == 0 {
                    (f[1] * 4.0 - f[0] * 3.0 - f[2]) * s
                } else if i == n - 1 {
                    (f[n - 1] * 3.0 - f[n - 2] * 4.0 + f[n - 3]) * s
                } else {
                    (f[i + 1] - f[i - 1]) * s
                }
            })
            .collect(),
        _ => {
            let s = 1.0 / (12.0 * dt);
            (0..n)
                .map(|i| {
                    if i == 0 {
                        (f[1] * 48.0 + f[3] * 16.0 - f[0] * 25.0 - f[2] * 36.0 - f[4] * 3.0) * s
                    } else if i == 1 {
                        (f[2] * 18.0 + f[4] - f[0] * 3.0 - f[1] * 10.0 - f[3] * 6.0) * s
                    } else if i == n - 2 {
                        (f[n - 1] * 3.0 + f[n - 2] * 10.0 + f[n - 4] * 6.0
                            - f[n - 3] * 18.0
                            - f[n - 5])
                            * s
                    } else if i == n - 1 {
                        (f[n - 1] * 25.0 + f[n - 3] * 36.0 + f[n - 5] * 3.0
                            - f[n - 2] * 48.0
                            - f[n - 4] * 16.0)
                            * s
                    } else {
                        (f[i - 2] + f[i + 1] * 8.0 - f[i - 1] * 8.0 - f[i + 2]) * s
                    }
                })
                .collect()
        }
    }
}
