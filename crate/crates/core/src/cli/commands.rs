use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use rayon::ThreadPool;
use serde::Serialize;

use super::config::{Format, RunConfig};
use super::io::{format_number, read_series, write_json, write_table, Table};
use crate::analytic::{self, MatrixElements, PerturbativeSpectrum};
use crate::cqed::{self, RATE_CONVENTION};
use crate::decoherence::{
    effective_temperature, flux_dephasing_rates, qp_relaxation, ramsey_echo_ratio, thermal_dephasing_rate,
    thermal_photon_population, EnvelopeShape, FLUX_NOISE_CONVENTION,
};
use crate::error::{Error, Result};
use crate::filters::{filter_curve, FilterSpec};
use crate::fit::{self, FitResult};
use crate::numeric::{self, NumericSpectrum};
use crate::params::FluxBias;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    NotConverged,
    PartialFailure,
}

#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<String>,
    pub status: Status,
}

/// Fit selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitKind {
    Spectrum,
    T1,
    Envelope,
    FluxNoise { exclusion_window: Option<f64> },
}

impl FitKind {
    pub fn name(self) -> &'static str {
        match self {
            FitKind::Spectrum => "spectrum",
            FitKind::T1 => "t1",
            FitKind::Envelope => "envelope",
            FitKind::FluxNoise { .. } => "fluxnoise",
        }
    }
}

fn error_code(e: &Error) -> &'static str {
    match e {
        Error::AtFlux { source, .. } => error_code(source),
        Error::NoConvergence { .. } => "no_convergence",
        Error::Domain(_) => "domain_error",
        Error::InvalidGrid(_) => "invalid_grid",
        _ => "error",
    }
}

#[derive(Serialize)]
struct NumericSummary {
    grid_points: usize,
    #[serde(flatten)]
    spectrum: NumericSpectrum,
}

#[derive(Serialize)]
struct SpectrumSummary {
    analytic: PerturbativeSpectrum,
    analytic_omega01_ghz: f64,
    numeric_optimal_point: Option<NumericSummary>,
    numeric_error: Option<String>,
    failed_points: Vec<f64>,
    flags: Vec<String>,
}

pub fn spectrum(cfg: &RunConfig, dir: &Path, format: Format, pool: &ThreadPool) -> Result<Outcome> {
    let q = cfg.qubit.params()?;
    let qn = cfg.numeric_qubit()?;
    let grid = cfg.grid()?;
    let fluxes: Vec<FluxBias> = cfg
        .sweep
        .flux
        .values("sweep.flux")?
        .into_iter()
        .map(FluxBias::new)
        .collect::<Result<_>>()?;

    let numeric_rows: Vec<Option<Result<numeric::FluxPoint>>> = if cfg.numeric.enabled {
        pool.install(|| {
            fluxes
                .par_iter()
                .map(|&f| Some(numeric::flux_point(&qn, f, grid)))
                .collect()
        })
    } else {
        fluxes.iter().map(|_| None).collect()
    };

    let mut table = Table::new(&[
        "flux_phi0",
        "omega01_analytic_GHz",
        "omega01_numeric_GHz",
        "omega12_numeric_GHz",
        "status",
    ]);
    let mut failed = Vec::new();
    for (f, row) in fluxes.iter().zip(&numeric_rows) {
        let a = format_number(analytic::omega01(&q, *f));
        let (w01, w12, status) = match row {
            Some(Ok(p)) => (format_number(p.omega01), format_number(p.omega12), "ok"),
            Some(Err(e)) => {
                failed.push(f.value());
                ("NaN".into(), "NaN".into(), error_code(e))
            }
            None => ("NaN".into(), "NaN".into(), "skipped"),
        };
        table.push(vec![format_number(f.value()), a, w01, w12, status.into()]);
    }

    let (numeric_optimal_point, numeric_error) = if cfg.numeric.enabled {
        match numeric::solve_2d(&qn, FluxBias::OPTIMAL, grid, cfg.numeric.states) {
            Ok(s) => (
                Some(NumericSummary {
                    grid_points: grid.points(),
                    spectrum: s,
                }),
                None,
            ),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    let analytic = PerturbativeSpectrum::new(&q);
    let mut flags = Vec::new();
    if analytic.low_validity {
        flags.push("low_validity".to_string());
    }
    let partial = !failed.is_empty() || numeric_error.is_some();
    let summary = SpectrumSummary {
        analytic_omega01_ghz: analytic.delta,
        analytic,
        numeric_optimal_point,
        numeric_error,
        failed_points: failed,
        flags,
    };
    let files = vec![
        write_table(dir, "spectrum", &table, format)?,
        write_json(dir, "spectrum_summary.json", &summary)?,
    ];
    Ok(Outcome {
        files,
        status: if partial { Status::PartialFailure } else { Status::Ok },
    })
}

#[derive(Serialize)]
struct Budget {
    #[serde(rename = "T1_qp_s")]
    t1_qp_s: f64,
    base_temperature_k: f64,
    #[serde(rename = "T1_purcell_s")]
    t1_purcell_s: f64,
    #[serde(rename = "T_phi_thermal_s")]
    t_phi_thermal_s: f64,
    #[serde(rename = "T_eff_K")]
    t_eff_k: f64,
    t_eff_clamped: bool,
    nbar: f64,
    g01_mhz: f64,
    g12_mhz: f64,
    two_chi_mhz: f64,
    matrix_elements: MatrixElements,
    conventions: BTreeMap<&'static str, &'static str>,
}

pub fn coherence(cfg: &RunConfig, dir: &Path, format: Format, pool: &ThreadPool) -> Result<Outcome> {
    let q = cfg.qubit.params()?;
    let cav = cfg.cavity.params()?;
    let tr = &cfg.transitions;
    let qp = &cfg.quasiparticle;
    let env = qp.env()?;
    let analytic_m = analytic::junction_matrix_elements(&q);
    let m = MatrixElements {
        large: qp.matrix_element_large.unwrap_or(analytic_m.large),
        small: qp.matrix_element_small.unwrap_or(analytic_m.small),
    };

    let temps = cfg.sweep.temperature.values("sweep.temperature")?;
    let rates: Vec<_> = pool.install(|| {
        temps
            .par_iter()
            .map(|&t| qp_relaxation(&q, tr.omega01_ghz, &env, t, m))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut t1_table = Table::new(&[
        "temp_K",
        "t1_s",
        "gamma_total_per_s",
        "gamma_nonequilibrium_per_s",
        "gamma_equilibrium_per_s",
    ]);
    for (t, r) in temps.iter().zip(&rates) {
        t1_table.push_numbers(&[
            *t,
            1.0 / r.total,
            r.total,
            r.nonequilibrium,
            r.equilibrium_down + r.equilibrium_up,
        ]);
    }

    let noise = cfg.flux_noise.noise()?;
    let t_ramsey = cfg.flux_noise.ramsey_time_s;
    let ratio = ramsey_echo_ratio(noise.omega_ir, t_ramsey)?;
    let fluxes = cfg.sweep.flux.values("sweep.flux")?;
    let mut flux_table = Table::new(&[
        "flux_phi0",
        "domega01_df_GHz",
        "gamma_e_per_s",
        "gamma_r_per_s",
        "ratio_r_over_e",
    ]);
    for &f in &fluxes {
        let d = analytic::domega01_df(&q, FluxBias::new(f)?);
        let r = flux_dephasing_rates(&noise, d, t_ramsey)?;
        flux_table.push_numbers(&[f, d, r.echo, r.ramsey, ratio]);
    }

    let couplings = cqed::extract_couplings(
        tr.omega01_ghz,
        tr.omega12_ghz,
        cav.omega_c0(),
        cfg.cavity.omega_c_ghz,
        cfg.cavity.chi_mhz,
    )?;
    let t1_purcell = cqed::purcell_t1(cav.kappa(), couplings.g01, tr.omega01_ghz, cfg.cavity.omega_c_ghz)?;
    let teff = effective_temperature(&cfg.chain()?, cfg.cavity.omega_c_ghz)?;
    let nbar = thermal_photon_population(cfg.cavity.omega_c_ghz, teff.temperature)?;
    let gamma_th = thermal_dephasing_rate(cav.kappa(), cfg.cavity.chi_mhz, nbar)?;
    let base = qp_relaxation(&q, tr.omega01_ghz, &env, qp.base_temperature_k, m)?;

    let budget = Budget {
        t1_qp_s: 1.0 / base.total,
        base_temperature_k: qp.base_temperature_k,
        t1_purcell_s: t1_purcell,
        t_phi_thermal_s: 1.0 / gamma_th,
        t_eff_k: teff.temperature,
        t_eff_clamped: teff.clamped,
        nbar,
        g01_mhz: couplings.g01,
        g12_mhz: couplings.g12,
        two_chi_mhz: 2.0 * cfg.cavity.chi_mhz,
        matrix_elements: m,
        conventions: BTreeMap::from([("cavity_rates", RATE_CONVENTION), ("flux_noise", FLUX_NOISE_CONVENTION)]),
    };
    let files = vec![
        write_table(dir, "t1_vs_temperature", &t1_table, format)?,
        write_table(dir, "flux_dephasing", &flux_table, format)?,
        write_json(dir, "coherence_budget.json", &budget)?,
    ];
    Ok(Outcome {
        files,
        status: Status::Ok,
    })
}

pub fn filter(cfg: &RunConfig, dir: &Path, format: Format) -> Result<Outcome> {
    let fc = &cfg.filter;
    let omegas = fc.omegas()?;
    let mut files = Vec::new();
    for &n in &fc.pulses {
        let spec = if n == 0 {
            FilterSpec::ramsey(fc.tau_s)?
        } else {
            FilterSpec::cpmg(n, fc.tau_s, fc.tau_pi_s)?
        };
        let mut table = Table::new(&["omega_rad_s", "g_N"]);
        for (w, g) in filter_curve(&spec, &omegas)? {
            table.push_numbers(&[w, g]);
        }
        files.push(write_table(dir, &format!("filter_N{n}"), &table, format)?);
    }
    Ok(Outcome {
        files,
        status: Status::Ok,
    })
}

#[derive(Serialize)]
struct FitReport<'a> {
    kind: &'a str,
    model: &'a str,
    data_points: usize,
    result: &'a FitResult,
}

#[derive(Serialize)]
struct EnvelopeReport {
    kind: &'static str,
    t1_s: f64,
    data_points: usize,
    fits: BTreeMap<&'static str, FitResult>,
    /// Shape with the smaller residual norm; both are reported because
    /// residuals alone may not discriminate.
    smaller_residual: Option<&'static str>,
}

fn first_header(text: &str) -> Option<String> {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').next().unwrap_or("").trim().to_string())
}

/// Runs one fit on `data_text`. Returns the outcome; `NotConverged` when any
/// fit reports `converged = false`.
pub fn fit(cfg: &RunConfig, kind: FitKind, data_text: &str, dir: &Path) -> Result<Outcome> {
    let q = cfg.qubit.params()?;
    let name = format!("fit_{}.json", kind.name());
    let (file, converged) = match kind {
        FitKind::Spectrum => {
            let data = read_series(data_text, ["flux_phi0", "freq_GHz"])?;
            let r = fit::fit_spectrum(&data, &q, cfg.fit.anharmonicity_ghz)?;
            let report = FitReport {
                kind: "spectrum",
                model: "perturbative omega01(f)",
                data_points: data.len(),
                result: &r,
            };
            (write_json(dir, &name, &report)?, r.converged)
        }
        FitKind::T1 => {
            if first_header(data_text).as_deref() == Some("time_s") {
                let data = read_series(data_text, ["time_s", "signal"])?;
                let r = fit::fit_t1_exponential(&data)?;
                let report = FitReport {
                    kind: "t1",
                    model: "inversion recovery a*exp(-t/T1)+c",
                    data_points: data.len(),
                    result: &r,
                };
                (write_json(dir, &name, &report)?, r.converged)
            } else {
                let data = read_series(data_text, ["temp_K", "t1_s"])?;
                let qp = &cfg.quasiparticle;
                let m = analytic::junction_matrix_elements(&q);
                let m = MatrixElements {
                    large: qp.matrix_element_large.unwrap_or(m.large),
                    small: qp.matrix_element_small.unwrap_or(m.small),
                };
                let r = fit::fit_xqp(&data, &q, cfg.transitions.omega01_ghz, qp.gap_uev, m)?;
                let report = FitReport {
                    kind: "t1",
                    model: "quasiparticle T1(T), free x_qp",
                    data_points: data.len(),
                    result: &r,
                };
                (write_json(dir, &name, &report)?, r.converged)
            }
        }
        FitKind::Envelope => {
            let data = read_series(data_text, ["time_s", "signal"])?;
            let mut fits = BTreeMap::new();
            for shape in cfg.fit.shape.shapes() {
                fits.insert(shape.name(), fit::fit_envelope(&data, cfg.fit.t1_s, shape)?);
            }
            let converged = fits.values().all(|r| r.converged);
            let smaller_residual = if fits.len() == 2 {
                let g = &fits[EnvelopeShape::Gaussian.name()];
                let e = &fits[EnvelopeShape::Exponential.name()];
                Some(if g.residual_norm <= e.residual_norm {
                    EnvelopeShape::Gaussian.name()
                } else {
                    EnvelopeShape::Exponential.name()
                })
            } else {
                None
            };
            let report = EnvelopeReport {
                kind: "envelope",
                t1_s: cfg.fit.t1_s,
                data_points: data.len(),
                fits,
                smaller_residual,
            };
            (write_json(dir, &name, &report)?, converged)
        }
        FitKind::FluxNoise { exclusion_window } => {
            let data = read_series(data_text, ["flux_phi0", "gamma_e_per_s"])?;
            let window = exclusion_window.unwrap_or(cfg.fit.exclusion_window);
            let r = fit::fit_flux_noise(&data, &q, window)?;
            let report = FitReport {
                kind: "fluxnoise",
                model: "gamma_E = sqrt(A_phi ln 2)|d omega01/df| + c",
                data_points: data.len(),
                result: &r,
            };
            (write_json(dir, &name, &report)?, r.converged)
        }
    };
    Ok(Outcome {
        files: vec![file],
        status: if converged { Status::Ok } else { Status::NotConverged },
    })
}
