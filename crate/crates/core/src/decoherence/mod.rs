//! Decoherence channels: quasiparticle relaxation, thermal-photon dephasing,
//! `1/ω` flux-noise dephasing, and decay envelopes.
//!
//! Two rate conventions are used and never mixed inside one formula. Flux
//! noise works with angular derivatives (see [`FLUX_NOISE_CONVENTION`]);
//! cavity-mediated channels take cyclic MHz as `value · 10⁶ s⁻¹`
//! (see [`crate::cqed::RATE_CONVENTION`]).

pub mod bessel;
pub mod envelope;
pub mod flux;
pub mod quasiparticle;
pub mod thermal;

pub use bessel::{bessel_i0, bessel_k0, bessel_k0e};
pub use envelope::{coherence_time, decay_envelope, EnvelopeShape};
pub use flux::{default_omega_ir, flux_dephasing_rates, ramsey_echo_ratio, FluxNoise, FluxRates};
pub use quasiparticle::{nqp_from_xqp, qp_relaxation, qp_relaxation_rate, QpRate, QuasiparticleEnv};
pub use thermal::{
    effective_temperature, effective_temperature_scaled, thermal_dephasing_rate, thermal_photon_population,
    AttenuationChain, EffectiveTemperature, Stage,
};

pub const FLUX_NOISE_CONVENTION: &str =
    "flux-noise rates use d(omega01)/df converted to angular units (2*pi*1e9 rad/s per GHz)";
