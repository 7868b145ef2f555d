//! Dispersive-limit readout quantities.
//!
//! Qubit transition frequencies and cavity frequencies are cyclic GHz;
//! couplings, shifts and linewidths are cyclic MHz. The Purcell time treats
//! `κ` in cyclic MHz directly as `κ · 10⁶ s⁻¹`; see [`RATE_CONVENTION`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::units::mhz_to_per_second;

/// Unit note attached to every output that turns cavity rates into times.
pub const RATE_CONVENTION: &str =
    "cavity rates (kappa, chi, g) are cyclic MHz and enter Purcell and thermal-photon rates as value*1e6 s^-1";

/// Above this `g / |ω_ij − ω_c0|` the dispersive expansion is flagged.
pub const DISPERSIVE_WARNING_RATIO: f64 = 0.2;

/// Partial shift `χ_ij = g² / (ω_ij − ω_c0)` in MHz.
pub fn chi_partial(g_mhz: f64, omega_ij_ghz: f64, omega_c0_ghz: f64) -> Result<f64> {
    let detuning_mhz = (omega_ij_ghz - omega_c0_ghz) * 1e3;
    if detuning_mhz == 0.0 {
        return Err(Error::domain("qubit transition is resonant with the cavity"));
    }
    Ok(g_mhz * g_mhz / detuning_mhz)
}

/// `g / |ω_ij − ω_c0|`; the dispersive regime needs this to be small.
pub fn dispersive_ratio(g_mhz: f64, omega_ij_ghz: f64, omega_c0_ghz: f64) -> f64 {
    g_mhz.abs() / ((omega_ij_ghz - omega_c0_ghz).abs() * 1e3)
}

/// `χ = χ01 − χ12/2`; the readable splitting is `2χ`.
pub fn total_pull(chi01_mhz: f64, chi12_mhz: f64) -> f64 {
    chi01_mhz - 0.5 * chi12_mhz
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersiveSet {
    pub chi01: f64,
    pub chi12: f64,
    pub chi: f64,
    pub g01: f64,
    pub g12: f64,
    /// Both transitions satisfy the dispersive-ratio threshold.
    pub dispersive: bool,
}

impl DispersiveSet {
    /// Forward model from coupling strengths.
    pub fn from_couplings(g01: f64, g12: f64, omega01: f64, omega12: f64, omega_c0: f64) -> Result<Self> {
        let chi01 = chi_partial(g01, omega01, omega_c0)?;
        let chi12 = chi_partial(g12, omega12, omega_c0)?;
        Ok(DispersiveSet {
            chi01,
            chi12,
            chi: total_pull(chi01, chi12),
            g01,
            g12,
            dispersive: dispersive_ratio(g01, omega01, omega_c0) <= DISPERSIVE_WARNING_RATIO
                && dispersive_ratio(g12, omega12, omega_c0) <= DISPERSIVE_WARNING_RATIO,
        })
    }

    /// Dressed cavity frequency with the qubit in its ground state, GHz.
    pub fn dressed_cavity(&self, omega_c0: f64) -> f64 {
        omega_c0 - self.chi01 * 1e-3
    }
}

/// Inverts the dispersive relations: `χ01 = ω_c0 − ω_c`, `χ12 = 2(χ01 − χ)`,
/// `g_ij = sqrt(χ_ij (ω_ij − ω_c0))`.
pub fn extract_couplings(omega01: f64, omega12: f64, omega_c0: f64, omega_c: f64, chi_mhz: f64) -> Result<DispersiveSet> {
    let chi01 = (omega_c0 - omega_c) * 1e3;
    let chi12 = 2.0 * (chi01 - chi_mhz);
    let rad01 = chi01 * (omega01 - omega_c0) * 1e3;
    let rad12 = chi12 * (omega12 - omega_c0) * 1e3;
    if rad01 < 0.0 || rad12 < 0.0 {
        return Err(Error::InconsistentInputs(format!(
            "negative squared coupling (g01² = {rad01:.4} MHz², g12² = {rad12:.4} MHz²)"
        )));
    }
    let (g01, g12) = (rad01.sqrt(), rad12.sqrt());
    Ok(DispersiveSet {
        chi01,
        chi12,
        chi: chi_mhz,
        g01,
        g12,
        dispersive: dispersive_ratio(g01, omega01, omega_c0) <= DISPERSIVE_WARNING_RATIO
            && dispersive_ratio(g12, omega12, omega_c0) <= DISPERSIVE_WARNING_RATIO,
    })
}

/// `T1P = (κ g01² / (ω01 − ω_c)²)⁻¹` in seconds, rates in the cyclic
/// convention. Returns `f64::INFINITY` for `g01 = 0`.
pub fn purcell_t1(kappa_mhz: f64, g01_mhz: f64, omega01: f64, omega_c: f64) -> Result<f64> {
    if !(kappa_mhz > 0.0) {
        return Err(Error::domain(format!("kappa must be positive, got {kappa_mhz}")));
    }
    let detuning_mhz = (omega01 - omega_c) * 1e3;
    if detuning_mhz == 0.0 {
        return Err(Error::domain("qubit is resonant with the cavity"));
    }
    let rate = mhz_to_per_second(kappa_mhz) * (g01_mhz / detuning_mhz).powi(2);
    Ok(if rate == 0.0 { f64::INFINITY } else { 1.0 / rate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn partial_shifts() {
        assert!((chi_partial(73.0, 4.68, 8.2175).unwrap() + 1.506).abs() < 5e-4);
        assert!((chi_partial(115.0, 5.46, 8.2175).unwrap() + 4.796).abs() < 5e-4);
        assert_eq!(chi_partial(0.0, 4.68, 8.2175).unwrap(), 0.0);
        assert!(chi_partial(73.0, 8.2, 8.2).is_err());
    }

    #[test]
    fn pull() {
        assert!((total_pull(-1.506, -4.796) - 0.892).abs() < 1e-12);
        assert_eq!(total_pull(1.3, 2.6), 0.0);
        assert_eq!(total_pull(-1.5, 0.0), -1.5);
    }

    #[test]
    fn coupling_extraction() {
        let d = extract_couplings(4.68, 5.46, 8.2175, 8.219, 0.892).unwrap();
        assert!((d.g01 - 72.9).abs() < 0.1, "{}", d.g01);
        assert!((d.g12 - 115.0).abs() < 0.2, "{}", d.g12);
        assert!(d.dispersive);
        // χ = χ01 means χ12 = 0
        let chi01 = (8.2175 - 8.219) * 1e3;
        let d = extract_couplings(4.68, 5.46, 8.2175, 8.219, chi01).unwrap();
        assert_eq!(d.g12, 0.0);
    }

    #[test]
    fn inconsistent_inputs_are_rejected() {
        // dressed cavity below the bare one for a qubit below the cavity
        assert!(matches!(
            extract_couplings(4.68, 5.46, 8.2175, 8.216, 0.892),
            Err(Error::InconsistentInputs(_))
        ));
    }

    #[test]
    fn qubit_below_cavity_pulls_cavity_up() {
        let d = DispersiveSet::from_couplings(73.0, 115.0, 4.68, 5.46, 8.2175).unwrap();
        assert!(d.chi01 < 0.0);
        assert!(d.dressed_cavity(8.2175) > 8.2175);
    }

    #[test]
    fn purcell_values() {
        let t = purcell_t1(1.3, 73.0, 4.68, 8.219).unwrap();
        assert!((t - 1.81e-3).abs() < 0.01e-3, "{t}");
        assert_eq!(purcell_t1(1.3, 0.0, 4.68, 8.219).unwrap(), f64::INFINITY);
        assert!(purcell_t1(1.3, 73.0, 8.219, 8.219).is_err());
        assert!(purcell_t1(0.0, 73.0, 4.68, 8.219).is_err());
        let t2 = purcell_t1(1.3, 73.0, 8.219 - 2.0 * (8.219 - 4.68), 8.219).unwrap();
        assert!((t2 / t - 4.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn extraction_inverts_forward_model(
            g01 in 5.0f64..200.0,
            g12 in 5.0f64..300.0,
            omega01 in 3.0f64..7.0,
            anh in 0.2f64..1.0,
            omega_c0 in 8.0f64..10.0,
        ) {
            let omega12 = omega01 + anh;
            let fwd = DispersiveSet::from_couplings(g01, g12, omega01, omega12, omega_c0).unwrap();
            let omega_c = fwd.dressed_cavity(omega_c0);
            let inv = extract_couplings(omega01, omega12, omega_c0, omega_c, fwd.chi).unwrap();
            // ω_c carries the shift on top of a GHz value, so relative
            // precision is limited by that subtraction.
            prop_assert!((inv.g01 - g01).abs() / g01 < 1e-9);
            prop_assert!((inv.g12 - g12).abs() / g12 < 1e-7);
        }

        #[test]
        fn purcell_scaling(kappa in 0.1f64..10.0, g in 1.0f64..200.0, det in 0.5f64..5.0) {
            let t = purcell_t1(kappa, g, 8.0 - det, 8.0).unwrap();
            let expect = (det * 1e3).powi(2) / (kappa * 1e6 * g * g);
            prop_assert!((t - expect).abs() / expect < 1e-9);
        }
    }
}
