//! TOML run configuration. Every section is optional; missing values fall
//! back to the reference device used throughout the crate.

use serde::{Deserialize, Serialize};

use crate::decoherence::flux::{ACQUISITION_TIME, DEFAULT_RAMSEY_TIME};
use crate::decoherence::quasiparticle::{DEFAULT_COOPER_PAIR_DENSITY, DEFAULT_GAP_UEV};
use crate::decoherence::{AttenuationChain, EnvelopeShape, FluxNoise, QuasiparticleEnv, Stage};
use crate::error::{Error, Result};
use crate::fit::DEFAULT_EXCLUSION_WINDOW;
use crate::numeric::{GridSpec, DEFAULT_POINTS, DEFAULT_STATES, MAX_STATES};
use crate::params::{CavityParams, QubitParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitSection {
    pub alpha: f64,
    pub e_j_ghz: f64,
    /// Give either the junction charging energy or its capacitance.
    pub e_c_ghz: Option<f64>,
    pub c_j_ff: Option<f64>,
    pub c_s_ff: f64,
}

impl QubitSection {
    fn perturbative() -> Self {
        QubitSection {
            alpha: 0.41,
            e_j_ghz: 85.0,
            e_c_ghz: Some(3.2),
            c_j_ff: None,
            c_s_ff: 78.0,
        }
    }

    pub fn params(&self) -> Result<QubitParams> {
        match (self.e_c_ghz, self.c_j_ff) {
            (Some(_), Some(_)) => Err(Error::Config("give only one of e_c_ghz and c_j_ff".into())),
            (Some(e_c), None) => QubitParams::new(self.alpha, self.e_j_ghz, e_c, self.c_s_ff),
            (None, Some(c_j)) => QubitParams::with_junction_capacitance(self.alpha, self.e_j_ghz, c_j, self.c_s_ff),
            (None, None) => Err(Error::Config("qubit needs e_c_ghz or c_j_ff".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CavitySection {
    pub omega_c0_ghz: f64,
    /// Dressed cavity frequency with the qubit in its ground state.
    pub omega_c_ghz: f64,
    pub kappa_c_mhz: f64,
    pub kappa_i_mhz: f64,
    /// Measured pull `χ`; the cavity splitting is `2χ`.
    pub chi_mhz: f64,
}

impl Default for CavitySection {
    fn default() -> Self {
        CavitySection {
            omega_c0_ghz: 8.2175,
            omega_c_ghz: 8.219,
            kappa_c_mhz: 1.3,
            kappa_i_mhz: 0.0,
            chi_mhz: 0.892,
        }
    }
}

impl CavitySection {
    pub fn params(&self) -> Result<CavityParams> {
        CavityParams::new(self.omega_c0_ghz, self.kappa_c_mhz, self.kappa_i_mhz)
    }
}

/// Measured qubit transitions at the optimal point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransitionSection {
    pub omega01_ghz: f64,
    pub omega12_ghz: f64,
}

impl Default for TransitionSection {
    fn default() -> Self {
        TransitionSection {
            omega01_ghz: 4.68,
            omega12_ghz: 5.46,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericSection {
    /// Skip the exact solves entirely when false.
    pub enabled: bool,
    pub grid_points: usize,
    pub states: usize,
}

impl Default for NumericSection {
    fn default() -> Self {
        NumericSection {
            enabled: true,
            grid_points: DEFAULT_POINTS,
            states: DEFAULT_STATES,
        }
    }
}

/// Evenly spaced sweep, or an explicit list of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub steps: Option<usize>,
    pub points: Option<Vec<f64>>,
}

impl Sweep {
    pub fn range(start: f64, stop: f64, steps: usize) -> Self {
        Sweep {
            start: Some(start),
            stop: Some(stop),
            steps: Some(steps),
            points: None,
        }
    }

    pub fn values(&self, name: &str) -> Result<Vec<f64>> {
        match (&self.points, self.start, self.stop, self.steps) {
            (Some(p), None, None, None) => {
                if p.is_empty() || p.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Config(format!("{name}: points must be a non-empty list of numbers")));
                }
                Ok(p.clone())
            }
            (None, Some(a), Some(b), Some(n)) => {
                if n < 2 {
                    return Err(Error::Config(format!("{name}: steps must be at least 2, got {n}")));
                }
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::Config(format!("{name}: bounds must be finite")));
                }
                // endpoints exact, interior by index to avoid drift
                Ok((0..n)
                    .map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
                    .collect())
            }
            _ => Err(Error::Config(format!(
                "{name}: give either points or all of start, stop, steps"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    /// Normalized flux `Φ/Φ0`.
    pub flux: Sweep,
    /// Kelvin.
    pub temperature: Sweep,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            flux: Sweep::range(0.49, 0.51, 21),
            temperature: Sweep::range(0.01, 0.2, 20),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuasiparticleSection {
    pub x_qp: f64,
    pub gap_uev: f64,
    pub n_cp_per_um3: f64,
    /// Temperature for the budget entry, K.
    pub base_temperature_k: f64,
    /// Override the perturbative junction matrix elements.
    pub matrix_element_large: Option<f64>,
    pub matrix_element_small: Option<f64>,
}

impl Default for QuasiparticleSection {
    fn default() -> Self {
        QuasiparticleSection {
            x_qp: 6e-8,
            gap_uev: DEFAULT_GAP_UEV,
            n_cp_per_um3: DEFAULT_COOPER_PAIR_DENSITY,
            base_temperature_k: 0.01,
            matrix_element_large: None,
            matrix_element_small: None,
        }
    }
}

impl QuasiparticleSection {
    pub fn env(&self) -> Result<QuasiparticleEnv> {
        QuasiparticleEnv::new(self.x_qp, self.gap_uev, self.n_cp_per_um3)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalSection {
    pub stages: Vec<Stage>,
}

impl Default for ThermalSection {
    fn default() -> Self {
        ThermalSection {
            stages: AttenuationChain::illustrative().stages().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FluxNoiseSection {
    /// `√A_Φ` in μΦ0.
    pub amplitude_micro_phi0: f64,
    /// Sets `ω_ir = 2π / acquisition_time_s` unless `omega_ir_rad_s` is given.
    pub acquisition_time_s: f64,
    pub omega_ir_rad_s: Option<f64>,
    /// Free-evolution time for the Ramsey rate, s.
    pub ramsey_time_s: f64,
}

impl Default for FluxNoiseSection {
    fn default() -> Self {
        FluxNoiseSection {
            amplitude_micro_phi0: 1.8,
            acquisition_time_s: ACQUISITION_TIME,
            omega_ir_rad_s: None,
            ramsey_time_s: DEFAULT_RAMSEY_TIME,
        }
    }
}

impl FluxNoiseSection {
    pub fn noise(&self) -> Result<FluxNoise> {
        if !(self.acquisition_time_s > 0.0) {
            return Err(Error::Config("acquisition_time_s must be positive".into()));
        }
        let omega_ir = self
            .omega_ir_rad_s
            .unwrap_or(2.0 * std::f64::consts::PI / self.acquisition_time_s);
        FluxNoise::new((self.amplitude_micro_phi0 * 1e-6).powi(2), omega_ir)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterSection {
    /// Numbers of π pulses; 0 is a Ramsey sequence.
    pub pulses: Vec<usize>,
    pub tau_s: f64,
    pub tau_pi_s: f64,
    /// Logarithmic angular-frequency grid, rad/s.
    pub omega_min_rad_s: f64,
    pub omega_max_rad_s: f64,
    pub omega_steps: usize,
}

impl Default for FilterSection {
    fn default() -> Self {
        FilterSection {
            pulses: vec![1, 20],
            tau_s: 20e-6,
            tau_pi_s: 0.0,
            omega_min_rad_s: 1e3,
            omega_max_rad_s: 1e8,
            omega_steps: 501,
        }
    }
}

impl FilterSection {
    pub fn omegas(&self) -> Result<Vec<f64>> {
        let (a, b, n) = (self.omega_min_rad_s, self.omega_max_rad_s, self.omega_steps);
        if !(a > 0.0 && b > a && b.is_finite()) {
            return Err(Error::Config("filter grid needs 0 < omega_min < omega_max".into()));
        }
        if n < 2 {
            return Err(Error::Config(format!("omega_steps must be at least 2, got {n}")));
        }
        let ratio = (b / a).ln();
        Ok((0..n)
            .map(|i| if i == n - 1 { b } else { a * (ratio * i as f64 / (n - 1) as f64).exp() })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeChoice {
    Gaussian,
    Exponential,
    Both,
}

impl ShapeChoice {
    pub fn shapes(self) -> Vec<EnvelopeShape> {
        match self {
            ShapeChoice::Gaussian => vec![EnvelopeShape::Gaussian],
            ShapeChoice::Exponential => vec![EnvelopeShape::Exponential],
            ShapeChoice::Both => EnvelopeShape::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitSection {
    /// Measured anharmonicity that frees `α` in the spectrum fit, GHz.
    pub anharmonicity_ghz: Option<f64>,
    /// `T1` held fixed in envelope fits, s.
    pub t1_s: f64,
    pub shape: ShapeChoice,
    pub exclusion_window: f64,
}

impl Default for FitSection {
    fn default() -> Self {
        FitSection {
            anharmonicity_ghz: None,
            t1_s: 90e-6,
            shape: ShapeChoice::Both,
            exclusion_window: DEFAULT_EXCLUSION_WINDOW,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
    pub format: Format,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: "out".into(),
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Perturbative model and fit starting point.
    pub qubit: QubitSection,
    /// Parameters for the exact solves; `qubit` when absent.
    pub numeric_qubit: Option<QubitSection>,
    pub transitions: TransitionSection,
    pub cavity: CavitySection,
    pub numeric: NumericSection,
    pub sweep: SweepSection,
    pub quasiparticle: QuasiparticleSection,
    pub thermal: ThermalSection,
    pub flux_noise: FluxNoiseSection,
    pub filter: FilterSection,
    pub fit: FitSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            qubit: QubitSection::perturbative(),
            numeric_qubit: None,
            transitions: TransitionSection::default(),
            cavity: CavitySection::default(),
            numeric: NumericSection::default(),
            sweep: SweepSection::default(),
            quasiparticle: QuasiparticleSection::default(),
            thermal: ThermalSection::default(),
            flux_noise: FluxNoiseSection::default(),
            filter: FilterSection::default(),
            fit: FitSection::default(),
            output: OutputSection::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every section against its module's invariants.
    pub fn validate(&self) -> Result<()> {
        let wrap = |section: &str, e: Error| Error::Config(format!("[{section}] {e}"));
        self.qubit.params().map_err(|e| wrap("qubit", e))?;
        self.numeric_qubit().map_err(|e| wrap("numeric_qubit", e))?;
        self.cavity.params().map_err(|e| wrap("cavity", e))?;
        self.grid().map_err(|e| wrap("numeric", e))?;
        if self.numeric.states < 3 || self.numeric.states > MAX_STATES {
            return Err(Error::Config(format!("[numeric] states must be in 3..={MAX_STATES}")));
        }
        self.sweep.flux.values("sweep.flux")?;
        let temps = self.sweep.temperature.values("sweep.temperature")?;
        if temps.iter().any(|t| !(*t > 0.0)) {
            return Err(Error::Config("[sweep.temperature] temperatures must be positive".into()));
        }
        self.quasiparticle.env().map_err(|e| wrap("quasiparticle", e))?;
        self.chain().map_err(|e| wrap("thermal", e))?;
        self.flux_noise.noise().map_err(|e| wrap("flux_noise", e))?;
        self.filter.omegas()?;
        if !(self.fit.t1_s > 0.0) || !(self.fit.exclusion_window >= 0.0) {
            return Err(Error::Config("[fit] t1_s must be positive and exclusion_window non-negative".into()));
        }
        Ok(())
    }

    pub fn numeric_qubit(&self) -> Result<QubitParams> {
        self.numeric_qubit.as_ref().unwrap_or(&self.qubit).params()
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.numeric.grid_points)
    }

    pub fn chain(&self) -> Result<AttenuationChain> {
        AttenuationChain::new(self.thermal.stages.clone())
    }
}
