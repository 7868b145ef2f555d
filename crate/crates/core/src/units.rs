//! Physical constants and the explicit unit conversions used across the crate.
//!
//! Energies and frequencies are carried as cyclic frequencies in GHz
//! (`E / h`). Rates are in s⁻¹, temperatures in kelvin, capacitances in fF.
//! Conversion to angular frequency happens only inside the formulas that
//! need it.

use crate::error::{Error, Result};

/// Exact SI values (2019 redefinition).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub h: f64,
    pub hbar: f64,
    pub e: f64,
    pub k_b: f64,
    pub phi0: f64,
}

pub const PLANCK: f64 = 6.626_070_15e-34;
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * ELEMENTARY_CHARGE);

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    h: PLANCK,
    hbar: HBAR,
    e: ELEMENTARY_CHARGE,
    k_b: BOLTZMANN,
    phi0: FLUX_QUANTUM,
};

const GHZ: f64 = 1e9;
const FEMTO: f64 = 1e-15;
const MICRO_EV: f64 = 1e-6 * ELEMENTARY_CHARGE;

/// `e² / (2 C h)` in GHz for a capacitance in fF.
pub fn charging_energy_from_capacitance(c_ff: f64) -> Result<f64> {
    if !(c_ff > 0.0) || !c_ff.is_finite() {
        return Err(Error::domain(format!(
            "capacitance must be positive and finite, got {c_ff} fF"
        )));
    }
    Ok(ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * c_ff * FEMTO * PLANCK) / GHZ)
}

/// Inverse of [`charging_energy_from_capacitance`].
pub fn capacitance_from_charging_energy(e_c_ghz: f64) -> Result<f64> {
    if !(e_c_ghz > 0.0) || !e_c_ghz.is_finite() {
        return Err(Error::domain(format!(
            "charging energy must be positive and finite, got {e_c_ghz} GHz"
        )));
    }
    Ok(ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * e_c_ghz * GHZ * PLANCK) / FEMTO)
}

pub fn ghz_to_joule(f_ghz: f64) -> f64 {
    f_ghz * GHZ * PLANCK
}

pub fn joule_to_ghz(e: f64) -> f64 {
    e / PLANCK / GHZ
}

/// Cyclic GHz to angular rad/s.
pub fn ghz_to_angular(f_ghz: f64) -> f64 {
    2.0 * std::f64::consts::PI * f_ghz * GHZ
}

/// Cyclic MHz to s⁻¹, the convention used for cavity rates.
pub fn mhz_to_per_second(f_mhz: f64) -> f64 {
    f_mhz * 1e6
}

/// `k_B T / h` in GHz.
pub fn kelvin_to_ghz(t_k: f64) -> f64 {
    BOLTZMANN * t_k / PLANCK / GHZ
}

pub fn ghz_to_kelvin(f_ghz: f64) -> f64 {
    f_ghz * GHZ * PLANCK / BOLTZMANN
}

pub fn micro_ev_to_joule(e_uev: f64) -> f64 {
    e_uev * MICRO_EV
}

pub fn micro_ev_to_ghz(e_uev: f64) -> f64 {
    joule_to_ghz(micro_ev_to_joule(e_uev))
}
