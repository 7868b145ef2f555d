//! Levenberg–Marquardt least squares with a central-difference Jacobian.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmOptions {
    pub max_iter: usize,
    /// Relative step size below which the iteration stops.
    pub xtol: f64,
    /// Bound on the cosine between any Jacobian column and the residual.
    pub gtol: f64,
    /// Relative finite-difference step.
    pub fd_step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iter: 200,
            xtol: 1e-10,
            gtol: 1e-12,
            fd_step: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    SmallStep,
    SmallGradient,
    ExactFit,
    MaxIterations,
    /// Damping grew without finding a downhill step.
    Stalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmOutcome {
    pub x: Vec<f64>,
    pub residuals: Vec<f64>,
    pub jacobian: DMatrix<f64>,
    /// `½ Σ r²` after each accepted step, starting with the initial point.
    pub cost_history: Vec<f64>,
    pub iterations: usize,
    pub reason: StopReason,
    /// Largest column-scaled gradient component at the final point.
    pub scaled_gradient: f64,
}

impl LmOutcome {
    pub fn converged(&self) -> bool {
        matches!(
            self.reason,
            StopReason::SmallStep | StopReason::SmallGradient | StopReason::ExactFit
        )
    }

    pub fn cost(&self) -> f64 {
        *self.cost_history.last().expect("history starts with the initial cost")
    }

    pub fn residual_norm(&self) -> f64 {
        norm(&self.residuals)
    }

    /// `s² (JᵀJ)⁻¹` with `s² = Σr² / (m − n)`, in the solver's parameters.
    pub fn covariance(&self) -> Option<DMatrix<f64>> {
        let (m, n) = self.jacobian.shape();
        if m <= n {
            return None;
        }
        let s2 = 2.0 * self.cost() / (m - n) as f64;
        let jtj = self.jacobian.transpose() * &self.jacobian;
        jtj.try_inverse().map(|inv| inv * s2)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn half_sq(v: &[f64]) -> f64 {
    0.5 * v.iter().map(|x| x * x).sum::<f64>()
}

/// Central-difference Jacobian of `f` at `x` with step `h·max(|x_j|, 1)`.
pub fn numeric_jacobian<F>(f: &F, x: &[f64], rel_step: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = x.len();
    let mut cols = Vec::with_capacity(n);
    let mut xp = x.to_vec();
    for j in 0..n {
        let h = rel_step * x[j].abs().max(1.0);
        xp[j] = x[j] + h;
        let fp = f(&xp)?;
        xp[j] = x[j] - h;
        let fm = f(&xp)?;
        xp[j] = x[j];
        cols.push(DVector::from_iterator(
            fp.len(),
            fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)),
        ));
    }
    Ok(DMatrix::from_columns(&cols))
}

fn scaled_gradient(j: &DMatrix<f64>, r: &[f64]) -> f64 {
    let rn = norm(r);
    if rn == 0.0 {
        return 0.0;
    }
    let rv = DVector::from_column_slice(r);
    j.column_iter()
        .map(|c| {
            let cn = c.norm();
            if cn == 0.0 {
                0.0
            } else {
                (c.dot(&rv) / (cn * rn)).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Largest-to-smallest singular value ratio of the column-normalized `J`.
pub fn scaled_condition(j: &DMatrix<f64>) -> f64 {
    let mut js = j.clone();
    for mut c in js.column_iter_mut() {
        let n = c.norm();
        if n > 0.0 {
            c /= n;
        }
    }
    let sv = js.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Minimizes `½‖f(x)‖²`. A residual evaluation error at a trial point
/// rejects that step; at `x0` it is returned.
pub fn levenberg_marquardt<F>(f: F, x0: &[f64], opts: &LmOptions) -> Result<LmOutcome>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = f(&x)?;
    if r.len() < n {
        return Err(Error::InsufficientData(format!("{} residuals for {n} parameters", r.len())));
    }
    let mut cost = half_sq(&r);
    let mut history = vec![cost];
    let mut lambda = 1e-3;
    let mut jac = numeric_jacobian(&f, &x, opts.fd_step)?;
    let scale0 = cost.max(f64::MIN_POSITIVE);

    let finish = |x: Vec<f64>, r: Vec<f64>, jac: DMatrix<f64>, history: Vec<f64>, it: usize, reason| {
        let g = scaled_gradient(&jac, &r);
        Ok(LmOutcome {
            x,
            residuals: r,
            jacobian: jac,
            cost_history: history,
            iterations: it,
            reason,
            scaled_gradient: g,
        })
    };

    for it in 0..opts.max_iter {
        if cost <= 1e-30 * scale0 || cost == 0.0 {
            return finish(x, r, jac, history, it, StopReason::ExactFit);
        }
        if scaled_gradient(&jac, &r) < opts.gtol {
            return finish(x, r, jac, history, it, StopReason::SmallGradient);
        }
        let jt = jac.transpose();
        let a = &jt * &jac;
        let g = &jt * DVector::from_column_slice(&r);
        let diag_floor = 1e-12 * a.diagonal().max().max(f64::MIN_POSITIVE);

        loop {
            let mut damped = a.clone();
            for i in 0..n {
                damped[(i, i)] += lambda * a[(i, i)].max(diag_floor);
            }
            let step = damped.cholesky().map(|c| c.solve(&(-&g)));
            let Some(step) = step else {
                lambda *= 10.0;
                if lambda > 1e20 {
                    return finish(x, r, jac, history, it + 1, StopReason::Stalled);
                }
                continue;
            };
            let x_norm = norm(&x);
            let small = step.norm() <= opts.xtol * (x_norm + opts.xtol);
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let accepted = match f(&trial) {
                Ok(rt) if rt.iter().all(|v| v.is_finite()) && half_sq(&rt) < cost => Some(rt),
                _ => None,
            };
            if let Some(rt) = accepted {
                x = trial;
                r = rt;
                cost = half_sq(&r);
                history.push(cost);
                jac = numeric_jacobian(&f, &x, opts.fd_step)?;
                lambda = (lambda * 0.1).max(1e-15);
                if small {
                    return finish(x, r, jac, history, it + 1, StopReason::SmallStep);
                }
                break;
            }
            if small {
                // No representable improvement remains at this resolution.
                return finish(x, r, jac, history, it + 1, StopReason::SmallStep);
            }
            lambda *= 10.0;
            if lambda > 1e20 {
                return finish(x, r, jac, history, it + 1, StopReason::Stalled);
            }
        }
    }
    finish(x, r, jac, history, opts.max_iter, StopReason::MaxIterations)
}
