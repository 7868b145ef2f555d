//! Closed-form perturbative model of the shunted flux qubit near the optimal
//! point: harmonic oscillator plus a quartic correction in the phase across
//! the large junctions, with a linear flux perturbation.
//!
//! All energies are cyclic GHz. `f` is the normalized flux `Φ/Φ0`.

use serde::Serialize;

use crate::params::{FluxBias, QubitParams};

/// Below this value of `E_J(1 − 2α) / E_CS` the expansion is flagged as
/// unreliable.
pub const VALIDITY_RATIO_WARNING: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbativeSpectrum {
    /// Gap at the optimal point, GHz.
    pub delta: f64,
    /// `dε/df`, GHz per unit normalized flux.
    pub deps_df: f64,
    /// Anharmonicity, GHz.
    pub anharmonicity: f64,
    /// `E_J(1 − 2α) / E_CS`.
    pub validity_ratio: f64,
    /// True when `validity_ratio` is below [`VALIDITY_RATIO_WARNING`].
    pub low_validity: bool,
}

impl PerturbativeSpectrum {
    pub fn new(q: &QubitParams) -> Self {
        let ratio = validity_ratio(q);
        PerturbativeSpectrum {
            delta: gap(q),
            deps_df: epsilon_slope(q),
            anharmonicity: anharmonicity(q),
            validity_ratio: ratio,
            low_validity: ratio < VALIDITY_RATIO_WARNING,
        }
    }
}

fn harmonic_quantum(q: &QubitParams) -> f64 {
    (4.0 * q.e_cs() * q.e_j() * (1.0 - 2.0 * q.alpha())).sqrt()
}

/// `E_CS / (E_J (1 − 2α))`, the squared zero-point phase spread scale.
fn zero_point_ratio(q: &QubitParams) -> f64 {
    q.e_cs() / (q.e_j() * (1.0 - 2.0 * q.alpha()))
}

pub fn validity_ratio(q: &QubitParams) -> f64 {
    1.0 / zero_point_ratio(q)
}

/// `E_m` from first-order perturbation theory in the quartic term, GHz.
pub fn perturbative_level(q: &QubitParams, m: u32) -> f64 {
    let a = q.alpha();
    let m = m as f64;
    harmonic_quantum(q) * (m + 0.5)
        + 2.0 * a * q.e_j()
        + (8.0 * a - 1.0) / (48.0 * (1.0 - 2.0 * a)) * q.e_cs() * (6.0 * m * m + 6.0 * m + 3.0)
}

/// `(8α − 1) / (4(1 − 2α)) · E_CS`.
pub fn anharmonicity(q: &QubitParams) -> f64 {
    let a = q.alpha();
    (8.0 * a - 1.0) / (4.0 * (1.0 - 2.0 * a)) * q.e_cs()
}

/// Gap at the optimal point, `sqrt(4 E_CS E_J (1 − 2α)) + A`.
pub fn gap(q: &QubitParams) -> f64 {
    harmonic_quantum(q) + anharmonicity(q)
}

/// `dε/df = 2√2 π α E_J (E_CS / (E_J(1 − 2α)))^{1/4}`.
pub fn epsilon_slope(q: &QubitParams) -> f64 {
    2.0 * std::f64::consts::SQRT_2 * std::f64::consts::PI * q.alpha() * q.e_j() * zero_point_ratio(q).powf(0.25)
}

/// Flux-induced energy shift, linear in `f − 0.5`.
pub fn epsilon(q: &QubitParams, f: FluxBias) -> f64 {
    epsilon_slope(q) * f.detuning()
}

/// `Δ + 2ε²/Δ`, GHz.
pub fn omega01(q: &QubitParams, f: FluxBias) -> f64 {
    let delta = gap(q);
    let eps = epsilon(q, f);
    delta + 2.0 * eps * eps / delta
}

/// `∂ω01/∂f = 4 ε (dε/df) / Δ`, GHz per unit normalized flux (cyclic).
pub fn domega01_df(q: &QubitParams, f: FluxBias) -> f64 {
    4.0 * epsilon(q, f) * epsilon_slope(q) / gap(q)
}

/// Perturbative `|⟨0|sin(φ/2)|1⟩|` for a large junction and for the small
/// junction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixElements {
    pub large: f64,
    pub small: f64,
}

pub fn junction_matrix_elements(q: &QubitParams) -> MatrixElements {
    let r = zero_point_ratio(q);
    MatrixElements {
        large: r.powf(0.25) / (2.0 * std::f64::consts::SQRT_2),
        small: 0.25 * r.sqrt(),
    }
}
