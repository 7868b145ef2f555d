//! Parameter extraction: spectra, quasiparticle density, dephasing
//! envelopes, flux-noise amplitude and inversion-recovery decays.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

mod decay;
mod flux_noise;
pub mod lm;
mod spectrum;
mod xqp;

pub use decay::{fit_envelope, fit_t1_exponential};
pub use flux_noise::{fit_flux_noise, DEFAULT_EXCLUSION_WINDOW};
pub use lm::{levenberg_marquardt, numeric_jacobian, LmOptions, LmOutcome, StopReason};
pub use spectrum::fit_spectrum;
pub use xqp::fit_xqp;

/// Paired samples sorted by `x`. Repeated `x` values are kept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataSeries {
    x: Vec<f64>,
    y: Vec<f64>,
    sigma: Option<Vec<f64>>,
    pub x_label: String,
    pub y_label: String,
}

impl DataSeries {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        Self::build(x, y, None)
    }

    pub fn with_uncertainties(x: Vec<f64>, y: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        if sigma.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
            return Err(Error::domain("uncertainties must be positive and finite"));
        }
        Self::build(x, y, Some(sigma))
    }

    fn build(x: Vec<f64>, y: Vec<f64>, sigma: Option<Vec<f64>>) -> Result<Self> {
        if x.len() != y.len() || sigma.as_ref().is_some_and(|s| s.len() != x.len()) {
            return Err(Error::domain("data columns have different lengths"));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::domain("data contain non-finite values"));
        }
        let mut idx: Vec<usize> = (0..x.len()).collect();
        idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
        let pick = |v: &[f64]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Ok(DataSeries {
            x: pick(&x),
            y: pick(&y),
            sigma: sigma.as_deref().map(pick),
            x_label: "x".into(),
            y_label: "y".into(),
        })
    }

    pub fn labeled(mut self, x_label: &str, y_label: &str) -> Self {
        self.x_label = x_label.into();
        self.y_label = y_label.into();
        self
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn sigma(&self) -> Option<&[f64]> {
        self.sigma.as_deref()
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn distinct_x(&self) -> usize {
        let mut n = 0;
        let mut last = f64::NAN;
        for &v in &self.x {
            if v != last {
                n += 1;
                last = v;
            }
        }
        n
    }

    fn weight(&self, i: usize) -> f64 {
        self.sigma.as_ref().map_or(1.0, |s| 1.0 / s[i])
    }

    fn require(&self, min: usize, what: &str) -> Result<()> {
        if self.len() < min {
            return Err(Error::InsufficientData(format!(
                "{what} needs at least {min} points, got {}",
                self.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub parameters: BTreeMap<String, f64>,
    /// One-sigma uncertainties from the linearized covariance. Advisory.
    pub uncertainties: BTreeMap<String, f64>,
    /// Covariance of the fitted parameters in `parameter_order`.
    pub covariance: Option<Vec<Vec<f64>>>,
    pub parameter_order: Vec<String>,
    /// Weighted residuals at the solution, in data order (after any
    /// exclusion).
    pub residuals: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Largest column-scaled gradient component at the solution.
    pub scaled_gradient: f64,
    /// `½‖r‖²` over accepted steps.
    pub cost_history: Vec<f64>,
    /// Diagnostics such as `negative_amplitude` or `insensitive`.
    pub flags: Vec<String>,
}

impl FitResult {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.parameters.get(name).copied()
    }

    pub fn uncertainty(&self, name: &str) -> Option<f64> {
        self.uncertainties.get(name).copied()
    }

    fn flag(&mut self, f: &str) {
        if !self.flags.iter().any(|x| x == f) {
            self.flags.push(f.into());
        }
    }
}

/// Map between a fitted quantity and the unconstrained solver variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Transform {
    Identity,
    Log,
    /// Logistic map onto `(lo, hi)`.
    Logit { lo: f64, hi: f64 },
}

impl Transform {
    fn to_internal(self, v: f64) -> f64 {
        match self {
            Transform::Identity => v,
            Transform::Log => v.ln(),
            Transform::Logit { lo, hi } => {
                let p = (v - lo) / (hi - lo);
                (p / (1.0 - p)).ln()
            }
        }
    }

    fn to_physical(self, u: f64) -> f64 {
        match self {
            Transform::Identity => u,
            Transform::Log => u.exp(),
            Transform::Logit { lo, hi } => lo + (hi - lo) / (1.0 + (-u).exp()),
        }
    }

    /// `d physical / d internal`.
    fn derivative(self, u: f64) -> f64 {
        match self {
            Transform::Identity => 1.0,
            Transform::Log => u.exp(),
            Transform::Logit { lo, hi } => {
                let s = 1.0 / (1.0 + (-u).exp());
                (hi - lo) * s * (1.0 - s)
            }
        }
    }
}

/// Builds a [`FitResult`] from an LM outcome, mapping the covariance back to
/// physical parameters by the delta method.
pub(crate) fn assemble(names: &[&str], transforms: &[Transform], out: &LmOutcome) -> FitResult {
    let n = names.len();
    let phys: Vec<f64> = out.x.iter().zip(transforms).map(|(u, t)| t.to_physical(*u)).collect();
    let d: Vec<f64> = out.x.iter().zip(transforms).map(|(u, t)| t.derivative(*u)).collect();
    let cov = out
        .covariance()
        .map(|c| DMatrix::from_fn(n, n, |i, j| d[i] * c[(i, j)] * d[j]));
    let mut uncertainties = BTreeMap::new();
    if let Some(c) = &cov {
        for (i, name) in names.iter().enumerate() {
            uncertainties.insert((*name).to_string(), c[(i, i)].max(0.0).sqrt());
        }
    }
    FitResult {
        parameters: names.iter().map(|s| s.to_string()).zip(phys).collect(),
        uncertainties,
        covariance: cov.map(|c| (0..n).map(|i| (0..n).map(|j| c[(i, j)]).collect()).collect()),
        parameter_order: names.iter().map(|s| s.to_string()).collect(),
        residuals: out.residuals.clone(),
        residual_norm: out.residual_norm(),
        iterations: out.iterations,
        converged: out.converged(),
        scaled_gradient: out.scaled_gradient,
        cost_history: out.cost_history.clone(),
        flags: Vec::new(),
    }
}
