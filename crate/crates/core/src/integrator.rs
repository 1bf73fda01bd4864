//! Adaptive Dormand-Prince 5(4) integrator with an optional projection
//! applied after every accepted step (used to stay on constraint manifolds).

use nalgebra::DVector;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegratorError {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("step budget exhausted at t = {t}")]
    TooManySteps { t: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            rtol: 1e-12,
            atol: 1e-13,
            h_init: 1e-2,
            h_min: 1e-14,
            max_steps: 2_000_000,
        }
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone)]
pub struct Solution {
    pub state: DVector<f64>,
    pub steps: usize,
    pub rejected: usize,
}

/// Integrates `x' = f(x)` from `t = 0` to `t_end` (either sign).
pub fn integrate<F, P>(
    f: F,
    project: P,
    x0: &DVector<f64>,
    t_end: f64,
    opts: &IntegratorOptions,
) -> Result<Solution, IntegratorError>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
    P: Fn(DVector<f64>) -> DVector<f64>,
{
    integrate_observed(f, project, x0, t_end, opts, |_, _| true)
}

/// Like [`integrate`], calling `observe(t, x)` after every accepted step.
/// Returning `false` stops the integration early at that step.
pub fn integrate_observed<F, P, O>(
    f: F,
    project: P,
    x0: &DVector<f64>,
    t_end: f64,
    opts: &IntegratorOptions,
    mut observe: O,
) -> Result<Solution, IntegratorError>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
    P: Fn(DVector<f64>) -> DVector<f64>,
    O: FnMut(f64, &DVector<f64>) -> bool,
{
    let dir = if t_end < 0.0 { -1.0 } else { 1.0 };
    let span = t_end.abs();
    let mut x = x0.clone();
    let mut t = 0.0f64;
    let mut h = opts.h_init.min(span.max(opts.h_min));
    let mut steps = 0usize;
    let mut rejected = 0usize;
    if span == 0.0 {
        return Ok(Solution {
            state: x,
            steps,
            rejected,
        });
    }
    let mut k: Vec<DVector<f64>> = vec![DVector::zeros(x.len()); 7];
    k[0] = f(&x);
    while t < span {
        if steps + rejected >= opts.max_steps {
            return Err(IntegratorError::TooManySteps { t: dir * t });
        }
        let last = t + h >= span;
        if last {
            h = span - t;
        }
        let hs = dir * h;
        for s in 1..7 {
            let mut xs = x.clone();
            for (j, kj) in k.iter().enumerate().take(s) {
                if A[s][j] != 0.0 {
                    xs.axpy(hs * A[s][j], kj, 1.0);
                }
            }
            k[s] = f(&xs);
        }
        let mut x5 = x.clone();
        let mut err = DVector::zeros(x.len());
        for s in 0..7 {
            if B5[s] != 0.0 {
                x5.axpy(hs * B5[s], &k[s], 1.0);
            }
            err.axpy(hs * (B5[s] - B4[s]), &k[s], 1.0);
        }
        let mut acc = 0.0;
        for i in 0..x.len() {
            let sc = opts.atol + opts.rtol * x[i].abs().max(x5[i].abs());
            acc += (err[i] / sc).powi(2);
        }
        let en = (acc / x.len() as f64).sqrt();
        if !en.is_finite() {
            return Err(IntegratorError::NonFinite { t: dir * t });
        }
        if en <= 1.0 {
            t = if last { span } else { t + h };
            x = project(x5);
            if x.iter().any(|v| !v.is_finite()) {
                return Err(IntegratorError::NonFinite { t: dir * t });
            }
            steps += 1;
            k[0] = f(&x);
            if !observe(dir * t, &x) {
                break;
            }
            let fac = if en == 0.0 {
                5.0
            } else {
                (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= fac;
        } else {
            rejected += 1;
            h *= (0.9 * en.powf(-0.2)).clamp(0.1, 1.0);
            if h < opts.h_min {
                return Err(IntegratorError::StepUnderflow { t: dir * t });
            }
        }
    }
    Ok(Solution {
        state: x,
        steps,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let f = |x: &DVector<f64>| DVector::from_vec(vec![x[1], -x[0]]);
        let x0 = DVector::from_vec(vec![1.0, 0.0]);
        let sol = integrate(f, |x| x, &x0, 2.0 * std::f64::consts::PI, &IntegratorOptions::default()).unwrap();
        assert!((&sol.state - &x0).norm() < 1e-10);
        let back = integrate(
            f,
            |x| x,
            &sol.state,
            -2.0 * std::f64::consts::PI,
            &IntegratorOptions::default(),
        )
        .unwrap();
        assert!((&back.state - &x0).norm() < 1e-10);
    }

    #[test]
    fn exponential_decay() {
        let f = |x: &DVector<f64>| -x.clone();
        let x0 = DVector::from_vec(vec![1.0]);
        let sol = integrate(f, |x| x, &x0, 3.0, &IntegratorOptions::default()).unwrap();
        assert!((sol.state[0] - (-3.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn blow_up_is_reported() {
        let f = |x: &DVector<f64>| DVector::from_vec(vec![x[0] * x[0]]);
        let x0 = DVector::from_vec(vec![1.0]);
        let opts = IntegratorOptions {
            max_steps: 10_000,
            ..Default::default()
        };
        assert!(integrate(f, |x| x, &x0, 2.0, &opts).is_err());
    }
}
