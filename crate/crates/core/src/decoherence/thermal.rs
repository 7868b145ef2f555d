//! Residual thermal photons in the readout cavity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{kelvin_to_ghz, mhz_to_per_second, BOLTZMANN};

/// Load resistance of every attenuator stage, Ω.
pub const LOAD_RESISTANCE: f64 = 50.0;
/// Lower end of the effective-temperature search, K.
pub const MIN_TEMPERATURE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    /// Stage temperature, K.
    pub temperature: f64,
    /// Linear power weight reaching the cavity.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttenuationChain {
    stages: Vec<Stage>,
}

impl AttenuationChain {
    pub fn new(stages: Vec<Stage>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::domain("attenuation chain has no stages"));
        }
        for s in &stages {
            if !(s.temperature > 0.0) || !s.temperature.is_finite() {
                return Err(Error::domain(format!("stage temperature must be positive, got {}", s.temperature)));
            }
            if !(s.weight >= 0.0) || !s.weight.is_finite() {
                return Err(Error::domain(format!("stage weight must be non-negative, got {}", s.weight)));
            }
        }
        if stages.iter().all(|s| s.weight == 0.0) {
            return Err(Error::domain("all attenuation weights are zero"));
        }
        Ok(AttenuationChain { stages })
    }

    /// Illustrative chain for an 8.2 GHz cavity that lands near 50 mK.
    /// The stage weights are not measured values.
    pub fn illustrative() -> Self {
        let stages = [(300.0, 3.2e-7), (4.0, 1e-5), (0.7, 1e-5), (0.1, 1e-3), (0.01, 0.999)]
            .into_iter()
            .map(|(temperature, weight)| Stage { temperature, weight })
            .collect();
        AttenuationChain { stages }
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// Every weight multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.stages
                .iter()
                .map(|s| Stage {
                    temperature: s.temperature,
                    weight: s.weight * c,
                })
                .collect(),
        )
    }

    /// `Σ_i A_i S_vv(ω, T_i)`, V²/Hz.
    pub fn noise_density(&self, omega_ghz: f64) -> f64 {
        self.stages
            .iter()
            .map(|s| s.weight * voltage_noise_density(omega_ghz, s.temperature))
            .sum()
    }
}

/// `S_vv(ω, T) = 4 k_B T R · u / (eᵘ − 1)` with `u = ħω / k_B T`, V²/Hz.
pub fn voltage_noise_density(omega_ghz: f64, temperature_k: f64) -> f64 {
    if temperature_k <= 0.0 {
        return 0.0;
    }
    let u = omega_ghz / kelvin_to_ghz(temperature_k);
    4.0 * BOLTZMANN * temperature_k * LOAD_RESISTANCE * u / u.exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveTemperature {
    /// K.
    pub temperature: f64,
    /// Relative residual of the defining equation.
    pub residual: f64,
    /// The target lies below the search floor; `temperature` is the floor.
    pub clamped: bool,
}

/// Solves `S_vv(ω_c, T_eff) = Σ_i A_i S_vv(ω_c, T_i)` by bisection.
pub fn effective_temperature(chain: &AttenuationChain, omega_c_ghz: f64) -> Result<EffectiveTemperature> {
    effective_temperature_scaled(chain, omega_c_ghz, 1.0)
}

/// As [`effective_temperature`] with the left side multiplied by
/// `reference_scale`, so that scaling every weight and the reference by the
/// same factor leaves `T_eff` unchanged.
pub fn effective_temperature_scaled(
    chain: &AttenuationChain,
    omega_c_ghz: f64,
    reference_scale: f64,
) -> Result<EffectiveTemperature> {
    if !(omega_c_ghz > 0.0) || !omega_c_ghz.is_finite() {
        return Err(Error::domain(format!("cavity frequency must be positive, got {omega_c_ghz}")));
    }
    if !(reference_scale > 0.0) || !reference_scale.is_finite() {
        return Err(Error::domain(format!("reference scale must be positive, got {reference_scale}")));
    }
    let target = chain.noise_density(omega_c_ghz) / reference_scale;
    let s = |t: f64| voltage_noise_density(omega_c_ghz, t);

    if target <= s(MIN_TEMPERATURE) {
        return Ok(EffectiveTemperature {
            temperature: MIN_TEMPERATURE,
            residual: (s(MIN_TEMPERATURE) - target).abs() / target,
            clamped: true,
        });
    }
    let mut lo = MIN_TEMPERATURE;
    let mut hi = chain
        .stages
        .iter()
        .map(|st| st.temperature)
        .fold(MIN_TEMPERATURE, f64::max);
    // Weights summing above one can push the target past the hottest stage.
    while s(hi) < target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if s(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok(EffectiveTemperature {
        temperature: t,
        residual: (s(t) - target).abs() / target,
        clamped: false,
    })
}

/// Bose occupation `1 / (e^{ħω/k_B T} − 1)`.
pub fn thermal_photon_population(omega_c_ghz: f64, temperature_k: f64) -> Result<f64> {
    if !(temperature_k >= 0.0) {
        return Err(Error::domain(format!("temperature must be non-negative, got {temperature_k}")));
    }
    if temperature_k == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (omega_c_ghz / kelvin_to_ghz(temperature_k)).exp_m1())
}

/// `Γφ = κ²/(κ² + 4χ²) · 4χ²/κ · n̄`, with `κ` and `χ` in cyclic MHz taken
/// as `value · 10⁶ s⁻¹`.
pub fn thermal_dephasing_rate(kappa_mhz: f64, chi_mhz: f64, nbar: f64) -> Result<f64> {
    if !(kappa_mhz > 0.0) {
        return Err(Error::domain(format!("kappa must be positive, got {kappa_mhz}")));
    }
    let k = mhz_to_per_second(kappa_mhz);
    let c2 = 4.0 * mhz_to_per_second(chi_mhz).powi(2);
    Ok(k * k / (k * k + c2) * c2 / k * nbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn photon_population() {
        let n = thermal_photon_population(8.219, 0.050).unwrap();
        assert!((n / 3.75e-4 - 1.0).abs() < 0.01, "{n}");
        assert_eq!(thermal_photon_population(8.219, 0.0).unwrap(), 0.0);
        assert!(thermal_photon_population(8.219, 1e-4).unwrap() < 1e-100);
        let hot = thermal_photon_population(8.219, 10.0).unwrap();
        let rj = kelvin_to_ghz(10.0) / 8.219;
        assert!((hot / rj - 1.0).abs() < 0.05);
    }

    #[test]
    fn dephasing_rate() {
        let g = thermal_dephasing_rate(1.3, 0.892, 3.75e-4).unwrap();
        assert!((g - 318.4).abs() < 0.5, "{g}");
        assert!((1.0 / g - 3.14e-3).abs() < 0.01e-3);
        assert_eq!(thermal_dephasing_rate(1.3, 0.892, 0.0).unwrap(), 0.0);
        let (kappa, chi) = (30.0, 1.0);
        let full = thermal_dephasing_rate(kappa, chi, 1e-3).unwrap();
        let limit = 4.0 * (chi * 1e6).powi(2) / (kappa * 1e6) * 1e-3;
        assert!((full / limit - 1.0).abs() < 0.01);
        assert!(thermal_dephasing_rate(0.0, 0.892, 1e-3).is_err());
    }

    #[test]
    fn illustrative_chain_near_fifty_millikelvin() {
        let r = effective_temperature(&AttenuationChain::illustrative(), 8.219).unwrap();
        assert!((r.temperature - 0.05).abs() < 0.5e-3, "{}", r.temperature);
        assert!(r.residual < 1e-6);
        assert!(!r.clamped);
    }

    #[test]
    fn single_stage_is_identity() {
        for &t in &[0.02, 0.05, 0.3, 4.0] {
            let chain = AttenuationChain::new(vec![Stage {
                temperature: t,
                weight: 1.0,
            }])
            .unwrap();
            let r = effective_temperature(&chain, 8.219).unwrap();
            assert!((r.temperature / t - 1.0).abs() < 1e-9, "{t} -> {}", r.temperature);
        }
    }

    #[test]
    fn weak_chain_clamps_at_floor() {
        let chain = AttenuationChain::new(vec![Stage {
            temperature: MIN_TEMPERATURE,
            weight: 0.5,
        }])
        .unwrap();
        let r = effective_temperature(&chain, 8.219).unwrap();
        assert!(r.clamped);
        assert_eq!(r.temperature, MIN_TEMPERATURE);
    }

    #[test]
    fn invalid_chains() {
        assert!(AttenuationChain::new(vec![]).is_err());
        let zero = vec![Stage {
            temperature: 1.0,
            weight: 0.0,
        }];
        assert!(AttenuationChain::new(zero).is_err());
        let cold = vec![Stage {
            temperature: 0.0,
            weight: 1.0,
        }];
        assert!(AttenuationChain::new(cold).is_err());
    }

    #[test]
    fn heavy_weights_extend_the_bracket() {
        let chain = AttenuationChain::new(vec![Stage {
            temperature: 0.1,
            weight: 3.0,
        }])
        .unwrap();
        let r = effective_temperature(&chain, 8.219).unwrap();
        assert!(r.temperature > 0.1);
        assert!(r.residual < 1e-6);
    }

    proptest! {
        #[test]
        fn residual_and_rescaling(
            t1 in 0.01f64..0.2,
            t2 in 1.0f64..300.0,
            w2 in 1e-8f64..1e-3,
            c in 1e-3f64..1e3,
        ) {
            let chain = AttenuationChain::new(vec![
                Stage { temperature: t1, weight: 1.0 - w2 },
                Stage { temperature: t2, weight: w2 },
            ]).unwrap();
            let a = effective_temperature(&chain, 8.219).unwrap();
            prop_assert!(a.residual < 1e-6);
            let b = effective_temperature_scaled(&chain.scaled(c).unwrap(), 8.219, c).unwrap();
            prop_assert!((a.temperature - b.temperature).abs() <= 1e-12 * a.temperature);
        }
    }
}
