//! Quasiparticle tunneling relaxation: a nonequilibrium density term plus a
//! thermally activated equilibrium term.

use serde::Serialize;

use super::bessel::bessel_k0e;
use crate::analytic::MatrixElements;
use crate::error::{Error, Result};
use crate::params::QubitParams;
use crate::units::{ghz_to_angular, kelvin_to_ghz, micro_ev_to_ghz};

pub const DEFAULT_GAP_UEV: f64 = 200.0;
/// Cooper-pair density in μm⁻³.
pub const DEFAULT_COOPER_PAIR_DENSITY: f64 = 4.9e6;

/// Above this fraction of `Δ0` for `ħω01` or `k_B T` the model is flagged.
pub const SMALL_ENERGY_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiparticleEnv {
    x_qp: f64,
    gap_uev: f64,
    n_cp: f64,
}

impl QuasiparticleEnv {
    pub fn new(x_qp: f64, gap_uev: f64, n_cp: f64) -> Result<Self> {
        if !(x_qp >= 0.0) || !x_qp.is_finite() {
            return Err(Error::domain(format!("x_qp must be non-negative, got {x_qp}")));
        }
        if !(gap_uev > 0.0) || !gap_uev.is_finite() {
            return Err(Error::domain(format!("gap must be positive, got {gap_uev} μeV")));
        }
        if !(n_cp > 0.0) || !n_cp.is_finite() {
            return Err(Error::domain(format!("Cooper-pair density must be positive, got {n_cp}")));
        }
        Ok(QuasiparticleEnv { x_qp, gap_uev, n_cp })
    }

    /// Default gap and Cooper-pair density.
    pub fn with_xqp(x_qp: f64) -> Result<Self> {
        Self::new(x_qp, DEFAULT_GAP_UEV, DEFAULT_COOPER_PAIR_DENSITY)
    }

    /// Inverse of [`nqp_from_xqp`] at default gap and density.
    pub fn from_nqp(n_qp: f64) -> Result<Self> {
        Self::with_xqp(n_qp / (2.0 * DEFAULT_COOPER_PAIR_DENSITY))
    }

    pub fn x_qp(&self) -> f64 {
        self.x_qp
    }

    pub fn gap_uev(&self) -> f64 {
        self.gap_uev
    }

    pub fn n_cp(&self) -> f64 {
        self.n_cp
    }

    pub fn with_x_qp(&self, x_qp: f64) -> Result<Self> {
        Self::new(x_qp, self.gap_uev, self.n_cp)
    }
}

/// `n_qp = 2 x_qp n_cp`, μm⁻³.
pub fn nqp_from_xqp(env: &QuasiparticleEnv) -> f64 {
    2.0 * env.x_qp * env.n_cp
}

/// `A_Σ = Σ_j |m_j|² E_J^(j) / ħ` in rad/s: two large junctions at `E_J`,
/// one small at `α E_J`.
pub fn junction_prefactor(q: &QubitParams, m: MatrixElements) -> f64 {
    let e_large = q.e_j();
    let e_small = q.alpha() * q.e_j();
    ghz_to_angular(2.0 * m.large * m.large * e_large + m.small * m.small * e_small)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QpRate {
    /// Total rate, s⁻¹.
    pub total: f64,
    /// Term proportional to `x_qp`.
    pub nonequilibrium: f64,
    /// Thermal `1 → 0` rate.
    pub equilibrium_down: f64,
    /// Thermal `0 → 1` rate.
    pub equilibrium_up: f64,
    /// `ħω01` or `k_B T` is not small against `Δ0`.
    pub low_validity: bool,
}

/// Quasiparticle relaxation with each contribution reported separately.
pub fn qp_relaxation(
    q: &QubitParams,
    omega01_ghz: f64,
    env: &QuasiparticleEnv,
    temperature_k: f64,
    m: MatrixElements,
) -> Result<QpRate> {
    if !(temperature_k > 0.0) || !temperature_k.is_finite() {
        return Err(Error::domain(format!("temperature must be positive, got {temperature_k} K")));
    }
    if !(omega01_ghz > 0.0) {
        return Err(Error::domain(format!("transition frequency must be positive, got {omega01_ghz} GHz")));
    }
    let gap = micro_ev_to_ghz(env.gap_uev);
    let kt = kelvin_to_ghz(temperature_k);
    let a_sigma = junction_prefactor(q, m);
    let pi = std::f64::consts::PI;

    let nonequilibrium = a_sigma * (8.0 / pi) * env.x_qp * (2.0 * gap / omega01_ghz).sqrt();

    // e^{x} K0(x) with x = ħω/2kT stays finite at low temperature.
    let x = omega01_ghz / (2.0 * kt);
    let equilibrium_down = a_sigma * (16.0 / pi) * (-gap / kt).exp() * bessel_k0e(x)?;
    let equilibrium_up = equilibrium_down * (-2.0 * x).exp();

    Ok(QpRate {
        total: nonequilibrium + equilibrium_down + equilibrium_up,
        nonequilibrium,
        equilibrium_down,
        equilibrium_up,
        low_validity: omega01_ghz > SMALL_ENERGY_FRACTION * gap || kt > SMALL_ENERGY_FRACTION * gap,
    })
}

/// Total quasiparticle relaxation rate `Γ = 1/T1`, s⁻¹.
pub fn qp_relaxation_rate(
    q: &QubitParams,
    omega01_ghz: f64,
    env: &QuasiparticleEnv,
    temperature_k: f64,
    m: MatrixElements,
) -> Result<f64> {
    Ok(qp_relaxation(q, omega01_ghz, env, temperature_k, m)?.total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qubit() -> QubitParams {
        QubitParams::from_charging_energies(0.41, 85.0, 3.2, 0.2483).unwrap()
    }

    const M: MatrixElements = MatrixElements {
        large: 0.1264,
        small: 0.0320,
    };

    #[test]
    fn prefactor() {
        let a = junction_prefactor(&qubit(), M);
        assert!((a / (2.0 * std::f64::consts::PI) - 2.752e9).abs() < 1e6, "{a}");
    }

    #[test]
    fn low_temperature_t1() {
        let env = QuasiparticleEnv::with_xqp(6e-8).unwrap();
        let r = qp_relaxation(&qubit(), 4.68, &env, 0.010, M).unwrap();
        assert!((1.0 / r.total - 83.2e-6).abs() < 0.5e-6, "{}", 1.0 / r.total);
        assert!(r.nonequilibrium > 1e6 * r.equilibrium_down);
        assert!(!r.low_validity);
    }

    #[test]
    fn t1_at_150_mk() {
        let env = QuasiparticleEnv::from_nqp(0.6).unwrap();
        let t1 = 1.0 / qp_relaxation_rate(&qubit(), 4.68, &env, 0.150, M).unwrap();
        assert!((20e-6..=26e-6).contains(&t1), "{t1}");
    }

    #[test]
    fn no_quasiparticles_no_decay() {
        let env = QuasiparticleEnv::with_xqp(0.0).unwrap();
        let r = qp_relaxation_rate(&qubit(), 4.68, &env, 1e-3, M).unwrap();
        assert!(r < 1e-100);
    }

    #[test]
    fn detailed_balance() {
        let env = QuasiparticleEnv::with_xqp(0.0).unwrap();
        let q = qubit();
        for &t in &[0.05, 0.1, 0.2, 0.3] {
            let r = qp_relaxation(&q, 4.68, &env, t, M).unwrap();
            let boltzmann = (-4.68 / kelvin_to_ghz(t)).exp();
            assert!((r.equilibrium_up / r.equilibrium_down / boltzmann - 1.0).abs() < 1e-12);
            assert!((r.total / (r.equilibrium_down * (1.0 + boltzmann)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn density_conversion() {
        let env = QuasiparticleEnv::with_xqp(6.1e-8).unwrap();
        assert!((nqp_from_xqp(&env) - 0.5978).abs() < 1e-4);
        assert_eq!(nqp_from_xqp(&QuasiparticleEnv::with_xqp(0.0).unwrap()), 0.0);
        let a = nqp_from_xqp(&QuasiparticleEnv::with_xqp(1e-7).unwrap());
        let b = nqp_from_xqp(&QuasiparticleEnv::with_xqp(3e-7).unwrap());
        assert!((b / a - 3.0).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let env = QuasiparticleEnv::with_xqp(1e-8).unwrap();
        assert!(qp_relaxation_rate(&qubit(), 4.68, &env, 0.0, M).is_err());
        assert!(qp_relaxation_rate(&qubit(), 4.68, &env, -0.1, M).is_err());
        assert!(QuasiparticleEnv::with_xqp(-1e-9).is_err());
        assert!(QuasiparticleEnv::new(1e-8, 0.0, 4.9e6).is_err());
    }

    proptest! {
        #[test]
        fn monotone_in_temperature_and_density(
            x in 0.0f64..1e-6,
            t in 0.005f64..0.3,
            dt in 0.001f64..0.05,
            dx in 1e-10f64..1e-6,
        ) {
            let q = qubit();
            let env = QuasiparticleEnv::with_xqp(x).unwrap();
            let g0 = qp_relaxation_rate(&q, 4.68, &env, t, M).unwrap();
            let g_t = qp_relaxation_rate(&q, 4.68, &env, t + dt, M).unwrap();
            let g_x = qp_relaxation_rate(&q, 4.68, &env.with_x_qp(x + dx).unwrap(), t, M).unwrap();
            prop_assert!(g_t >= g0);
            prop_assert!(g_x > g0);
        }
    }
}
