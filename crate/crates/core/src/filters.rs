//! Filter functions `g_N(ω, τ)` of Ramsey, Hahn-echo and CPMG sequences.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Below this `|ωτ|` the analytic zero-frequency limit is returned.
const SMALL_PHASE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterSpec {
    n: usize,
    tau: f64,
    tau_pi: f64,
    delta: Vec<f64>,
}

impl FilterSpec {
    /// Arbitrary π-pulse centers `delta` (fractions of `tau`).
    pub fn custom(tau: f64, tau_pi: f64, delta: Vec<f64>) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::domain(format!("sequence length must be positive, got {tau}")));
        }
        if !(tau_pi >= 0.0) || !tau_pi.is_finite() {
            return Err(Error::domain(format!("pulse duration must be non-negative, got {tau_pi}")));
        }
        let n = delta.len();
        if n > 0 && n as f64 * tau_pi >= tau {
            return Err(Error::domain(format!("{n} pulses of {tau_pi} s do not fit in {tau} s")));
        }
        if delta.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
            return Err(Error::domain("pulse positions must lie in (0, 1)"));
        }
        if delta.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("pulse positions must be strictly increasing"));
        }
        Ok(FilterSpec { n, tau, tau_pi, delta })
    }

    /// Free induction, no π pulses.
    pub fn ramsey(tau: f64) -> Result<Self> {
        Self::custom(tau, 0.0, Vec::new())
    }

    pub fn hahn(tau: f64, tau_pi: f64) -> Result<Self> {
        Self::cpmg(1, tau, tau_pi)
    }

    pub fn cpmg(n: usize, tau: f64, tau_pi: f64) -> Result<Self> {
        Self::custom(tau, tau_pi, cpmg_positions(n)?)
    }

    pub fn pulses(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn tau_pi(&self) -> f64 {
        self.tau_pi
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    fn sign(j: usize) -> f64 {
        if j.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// `lim_{ω→0} g_N = |(−1)^{N+1} + 2 Σ_j (−1)^j δ_j|²`.
    fn zero_frequency_limit(&self) -> f64 {
        let s: f64 = Self::sign(self.n + 1)
            + 2.0
                * self
                    .delta
                    .iter()
                    .enumerate()
                    .map(|(i, d)| Self::sign(i + 1) * d)
                    .sum::<f64>();
        s * s
    }
}

/// `δ_j = (2j − 1) / 2N` for `j = 1..N`.
pub fn cpmg_positions(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("CPMG needs at least one pulse; use FilterSpec::ramsey for N = 0"));
    }
    Ok((1..=n).map(|j| (2 * j - 1) as f64 / (2 * n) as f64).collect())
}

/// `g_N(ω, τ)` for angular frequency `omega` in rad/s.
pub fn filter_function(spec: &FilterSpec, omega: f64) -> f64 {
    let wt = omega * spec.tau;
    if wt.abs() < SMALL_PHASE {
        return spec.zero_frequency_limit();
    }
    let pulse = 2.0 * (0.5 * omega * spec.tau_pi).cos();
    let mut s = Complex64::new(1.0, 0.0) + FilterSpec::sign(spec.n + 1) * Complex64::cis(wt);
    for (i, d) in spec.delta.iter().enumerate() {
        s += FilterSpec::sign(i + 1) * pulse * Complex64::cis(wt * d);
    }
    s.norm_sqr() / (wt * wt)
}

/// `(ω, g_N(ω))` pairs over `omegas`.
pub fn filter_curve(spec: &FilterSpec, omegas: &[f64]) -> Result<Vec<(f64, f64)>> {
    if let Some(w) = omegas.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
        return Err(Error::domain(format!("frequency grid must be positive, found {w}")));
    }
    Ok(omegas.iter().map(|&w| (w, filter_function(spec, w))).collect())
}
