//! Dephasing from `1/ω` flux noise away from the optimal point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::ghz_to_angular;

/// Single-point acquisition time behind the default infrared cutoff, s.
pub const ACQUISITION_TIME: f64 = 2.45;
/// Free-evolution time used for Ramsey rates when none is given, s.
pub const DEFAULT_RAMSEY_TIME: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxNoise {
    /// Amplitude of `S(ω) = A_Φ / ω`, Φ0².
    pub a_phi: f64,
    /// Infrared cutoff, rad/s.
    pub omega_ir: f64,
}

impl FluxNoise {
    pub fn new(a_phi: f64, omega_ir: f64) -> Result<Self> {
        if !(a_phi >= 0.0) || !a_phi.is_finite() {
            return Err(Error::domain(format!("flux-noise amplitude must be non-negative, got {a_phi}")));
        }
        if !(omega_ir > 0.0) || !omega_ir.is_finite() {
            return Err(Error::domain(format!("infrared cutoff must be positive, got {omega_ir}")));
        }
        Ok(FluxNoise { a_phi, omega_ir })
    }

    /// Amplitude given as `(a μΦ0)²` with `a` in μΦ0; default cutoff.
    pub fn from_micro_phi0(a: f64) -> Result<Self> {
        Self::new((a * 1e-6).powi(2), default_omega_ir())
    }

    /// `√A_Φ` in μΦ0.
    pub fn sqrt_amplitude_micro(&self) -> f64 {
        self.a_phi.sqrt() * 1e6
    }
}

/// `2π / 2.45 s`.
pub fn default_omega_ir() -> f64 {
    2.0 * std::f64::consts::PI / ACQUISITION_TIME
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxRates {
    /// Echo rate `√(A_Φ ln 2) |∂ω01/∂f|`, s⁻¹.
    pub echo: f64,
    /// Ramsey rate `√(A_Φ ln(1/ω_ir t)) |∂ω01/∂f|`, s⁻¹.
    pub ramsey: f64,
}

/// Echo and Ramsey pure-dephasing rates. `domega01_df` is cyclic GHz per
/// unit normalized flux and is converted to rad/s here.
pub fn flux_dephasing_rates(noise: &FluxNoise, domega01_df: f64, t: f64) -> Result<FluxRates> {
    let wt = noise.omega_ir * t;
    if !(wt > 0.0 && wt < 1.0) {
        return Err(Error::domain(format!("need 0 < omega_ir * t < 1, got {wt}")));
    }
    let slope = ghz_to_angular(domega01_df.abs());
    Ok(FluxRates {
        echo: (noise.a_phi * std::f64::consts::LN_2).sqrt() * slope,
        ramsey: (noise.a_phi * (1.0 / wt).ln()).sqrt() * slope,
    })
}

/// `Γ_R / Γ_E = √(ln(1/ω_ir t) / ln 2)`.
pub fn ramsey_echo_ratio(omega_ir: f64, t: f64) -> Result<f64> {
    let wt = omega_ir * t;
    if !(wt > 0.0 && wt < 1.0) {
        return Err(Error::domain(format!("need 0 < omega_ir * t < 1, got {wt}")));
    }
    Ok(((1.0 / wt).ln() / std::f64::consts::LN_2).sqrt())
}
