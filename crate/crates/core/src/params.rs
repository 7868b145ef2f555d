//! Validated parameter containers shared by every model.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::units::{capacitance_from_charging_energy, charging_energy_from_capacitance};

/// Non-fatal conditions attached to otherwise valid qubit parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamWarning {
    /// `alpha <= 1/8`: the quartic coefficient `8α − 1` is non-positive and the
    /// perturbative anharmonicity changes sign.
    NonPositiveQuarticCoefficient,
}

/// Circuit parameters of the shunted three-junction loop.
///
/// `e_j` is the Josephson energy of each large junction, `e_c = e²/2C_J` the
/// charging energy of a large junction, `c_s` the shunt capacitance across the
/// small junction. The small junction has area ratio `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitParams {
    alpha: f64,
    e_j_ghz: f64,
    e_c_ghz: f64,
    c_s_ff: f64,
}

impl QubitParams {
    pub fn new(alpha: f64, e_j_ghz: f64, e_c_ghz: f64, c_s_ff: f64) -> Result<Self> {
        validate_params(QubitParams {
            alpha,
            e_j_ghz,
            e_c_ghz,
            c_s_ff,
        })
    }

    /// Builds the parameters from the junction capacitance instead of `E_C`.
    pub fn with_junction_capacitance(alpha: f64, e_j_ghz: f64, c_j_ff: f64, c_s_ff: f64) -> Result<Self> {
        let e_c = charging_energy_from_capacitance(c_j_ff)?;
        Self::new(alpha, e_j_ghz, e_c, c_s_ff)
    }

    /// Builds the parameters from both charging energies; the shunt
    /// capacitance is recovered from `e_cs`.
    pub fn from_charging_energies(alpha: f64, e_j_ghz: f64, e_c_ghz: f64, e_cs_ghz: f64) -> Result<Self> {
        let c_s = capacitance_from_charging_energy(e_cs_ghz)?;
        Self::new(alpha, e_j_ghz, e_c_ghz, c_s)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn e_j(&self) -> f64 {
        self.e_j_ghz
    }

    pub fn e_c(&self) -> f64 {
        self.e_c_ghz
    }

    pub fn c_s(&self) -> f64 {
        self.c_s_ff
    }

    /// Shunt charging energy `e²/2C_S`, GHz.
    pub fn e_cs(&self) -> f64 {
        charging_energy_from_capacitance(self.c_s_ff).expect("validated shunt capacitance")
    }

    /// Junction capacitance in fF, recovered from `E_C`.
    pub fn c_j(&self) -> f64 {
        capacitance_from_charging_energy(self.e_c_ghz).expect("validated charging energy")
    }

    /// `C_S / C_J`.
    pub fn beta(&self) -> f64 {
        self.c_s_ff / self.c_j()
    }

    pub fn warnings(&self) -> Vec<ParamWarning> {
        let mut out = Vec::new();
        if self.alpha <= 0.125 {
            out.push(ParamWarning::NonPositiveQuarticCoefficient);
        }
        out
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.e_j_ghz, self.e_c_ghz, self.c_s_ff)
    }
}

/// Checks every invariant of [`QubitParams`] and returns the params on success.
pub fn validate_params(q: QubitParams) -> Result<QubitParams> {
    let QubitParams {
        alpha,
        e_j_ghz,
        e_c_ghz,
        c_s_ff,
    } = q;
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    if alpha >= 0.5 {
        return Err(Error::domain(format!(
            "double-well regime unsupported (alpha = {alpha} >= 0.5)"
        )));
    }
    if !(e_j_ghz > 0.0) || !e_j_ghz.is_finite() {
        return Err(Error::domain(format!("E_J must be positive, got {e_j_ghz}")));
    }
    if !(e_c_ghz > 0.0) || !e_c_ghz.is_finite() {
        return Err(Error::domain(format!("E_C must be positive, got {e_c_ghz}")));
    }
    if !(c_s_ff > 0.0) || !c_s_ff.is_finite() {
        return Err(Error::domain(format!("C_S must be positive, got {c_s_ff}")));
    }
    Ok(q)
}

/// Bare cavity mode and its loss rates. Rates are cyclic MHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityParams {
    omega_c0_ghz: f64,
    kappa_c_mhz: f64,
    kappa_i_mhz: f64,
}

impl CavityParams {
    pub fn new(omega_c0_ghz: f64, kappa_c_mhz: f64, kappa_i_mhz: f64) -> Result<Self> {
        if !(omega_c0_ghz > 0.0) || !omega_c0_ghz.is_finite() {
            return Err(Error::domain(format!("cavity frequency must be positive, got {omega_c0_ghz}")));
        }
        if !(kappa_c_mhz >= 0.0) || !(kappa_i_mhz >= 0.0) {
            return Err(Error::domain("cavity loss rates must be non-negative"));
        }
        if kappa_c_mhz + kappa_i_mhz <= 0.0 {
            return Err(Error::domain("total cavity linewidth must be positive"));
        }
        Ok(CavityParams {
            omega_c0_ghz,
            kappa_c_mhz,
            kappa_i_mhz,
        })
    }

    pub fn omega_c0(&self) -> f64 {
        self.omega_c0_ghz
    }

    pub fn kappa_c(&self) -> f64 {
        self.kappa_c_mhz
    }

    pub fn kappa_i(&self) -> f64 {
        self.kappa_i_mhz
    }

    pub fn kappa(&self) -> f64 {
        self.kappa_c_mhz + self.kappa_i_mhz
    }

    pub fn quality_factor(&self) -> f64 {
        self.omega_c0_ghz * 1e3 / self.kappa()
    }
}

/// Normalized flux bias `Φ/Φ0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct FluxBias(f64);

impl FluxBias {
    pub const OPTIMAL: FluxBias = FluxBias(0.5);

    pub fn new(f: f64) -> Result<Self> {
        if !f.is_finite() {
            return Err(Error::domain(format!("flux bias must be finite, got {f}")));
        }
        Ok(FluxBias(f))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Distance from the optimal point, `f − 0.5`.
    pub fn detuning(self) -> f64 {
        self.0 - 0.5
    }

    pub fn mirrored(self) -> FluxBias {
        FluxBias(1.0 - self.0)
    }
}
