use std::collections::BTreeMap;

use super::{DataSeries, FitResult};
use crate::analytic::MatrixElements;
use crate::decoherence::quasiparticle::{nqp_from_xqp, qp_relaxation, QuasiparticleEnv, DEFAULT_COOPER_PAIR_DENSITY};
use crate::error::{Error, Result};
use crate::params::QubitParams;

/// The `x_qp` term must reach this fraction of the total rate at some
/// temperature for the fit to be informative.
const SENSITIVITY_FRACTION: f64 = 0.01;

/// Fits `x_qp` to `(T [K], T1 [s])` data.
///
/// `Γ = 1/T1` is linear in `x_qp`, so the weighted least-squares problem
/// (weights `1/Γ²`, i.e. relative errors) is solved in closed form and the
/// estimate clipped at zero.
pub fn fit_xqp(
    data: &DataSeries,
    q: &QubitParams,
    omega01_ghz: f64,
    gap_uev: f64,
    m: MatrixElements,
) -> Result<FitResult> {
    data.require(2, "x_qp fit")?;
    if data.y().iter().any(|t1| !(*t1 > 0.0)) {
        return Err(Error::domain("T1 values must be positive"));
    }
    let probe = QuasiparticleEnv::new(1.0, gap_uev, DEFAULT_COOPER_PAIR_DENSITY)?;
    let none = probe.with_x_qp(0.0)?;
    let mut k = Vec::with_capacity(data.len());
    let mut eq = Vec::with_capacity(data.len());
    for &t in data.x() {
        let unit = qp_relaxation(q, omega01_ghz, &probe, t, m)?;
        let thermal = qp_relaxation(q, omega01_ghz, &none, t, m)?;
        k.push(unit.nonequilibrium);
        eq.push(thermal.total);
    }
    let gamma: Vec<f64> = data.y().iter().map(|t1| 1.0 / t1).collect();
    let w: Vec<f64> = gamma.iter().map(|g| 1.0 / (g * g)).collect();

    let skk: f64 = w.iter().zip(&k).map(|(w, k)| w * k * k).sum();
    let sky: f64 = (0..k.len()).map(|i| w[i] * k[i] * (gamma[i] - eq[i])).sum();
    let unclipped = sky / skk;
    let x = unclipped.max(0.0);

    let residuals: Vec<f64> = (0..k.len())
        .map(|i| w[i].sqrt() * (eq[i] + x * k[i] - gamma[i]))
        .collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let dof = (data.len() - 1).max(1) as f64;
    let sigma_x = (rss / dof / skk).sqrt();

    let env = probe.with_x_qp(x)?;
    let n_qp = nqp_from_xqp(&env);
    let mut result = FitResult {
        parameters: BTreeMap::from([("x_qp".to_string(), x), ("n_qp_per_um3".to_string(), n_qp)]),
        uncertainties: BTreeMap::from([
            ("x_qp".to_string(), sigma_x),
            ("n_qp_per_um3".to_string(), 2.0 * DEFAULT_COOPER_PAIR_DENSITY * sigma_x),
        ]),
        covariance: Some(vec![vec![sigma_x * sigma_x]]),
        parameter_order: vec!["x_qp".into()],
        residuals,
        residual_norm: rss.sqrt(),
        iterations: 1,
        converged: true,
        scaled_gradient: 0.0,
        cost_history: vec![0.5 * rss],
        flags: Vec::new(),
    };
    if unclipped < 0.0 {
        result.flag("clipped_at_zero");
    }
    // Sensitivity at a reference density that explains the lowest rate.
    let x_ref = if x > 0.0 { x } else { gamma.iter().cloned().fold(f64::INFINITY, f64::min) / k[0] };
    let informative = (0..k.len()).any(|i| x_ref * k[i] >= SENSITIVITY_FRACTION * (eq[i] + x_ref * k[i]));
    if !informative {
        result.flag("insensitive");
        result.uncertainties.insert("x_qp".into(), f64::INFINITY);
        result.uncertainties.insert("n_qp_per_um3".into(), f64::INFINITY);
    }
    Ok(result)
}
