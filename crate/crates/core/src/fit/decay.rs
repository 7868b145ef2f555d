use super::lm::{levenberg_marquardt, LmOptions};
use super::{assemble, DataSeries, FitResult, Transform};
use crate::decoherence::envelope::{decay_envelope, EnvelopeShape};
use crate::error::{Error, Result};

/// Fitted decay constants above this multiple of the time span are treated
/// as "no decay observed".
const MAX_SPAN_MULTIPLE: f64 = 10.0;

fn span(data: &DataSeries) -> f64 {
    data.x()[data.len() - 1] - data.x()[0]
}

/// First time at which `|y − c|` falls below `|a|/e`, else a third of the span.
fn crossing_time(data: &DataSeries, a: f64, c: f64, correction: impl Fn(f64) -> f64) -> f64 {
    let t0 = data.x()[0];
    data.x()
        .iter()
        .zip(data.y())
        .find(|(t, y)| (*y - c).abs() / correction(**t) < a.abs() / std::f64::consts::E)
        .map(|(t, _)| (t - t0).max(span(data) / data.len() as f64))
        .unwrap_or(span(data) / 3.0)
}

/// Fits `a·e^{−t/T1} + c` to `(t [s], signal)` data.
pub fn fit_t1_exponential(data: &DataSeries) -> Result<FitResult> {
    data.require(4, "T1 fit")?;
    let span = span(data);
    if !(span > 0.0) {
        return Err(Error::RankDeficient("all delays are equal".into()));
    }
    let (y0, yn) = (data.y()[0], data.y()[data.len() - 1]);
    let (a0, c0) = (y0 - yn, yn);
    let t1_0 = crossing_time(data, a0, c0, |_| 1.0);
    let x0 = [t1_0.ln(), a0, c0];
    let t = data.x();
    let residuals = |p: &[f64]| -> Result<Vec<f64>> {
        let t1 = p[0].exp();
        Ok((0..t.len())
            .map(|i| data.weight(i) * (p[1] * (-t[i] / t1).exp() + p[2] - data.y()[i]))
            .collect())
    };
    let out = levenberg_marquardt(residuals, &x0, &LmOptions::default())?;
    let mut result = assemble(
        &["t1_s", "amplitude", "offset"],
        &[Transform::Log, Transform::Identity, Transform::Identity],
        &out,
    );
    let t1 = result.get("t1_s").unwrap_or(f64::NAN);
    let amp = result.get("amplitude").unwrap_or(0.0);
    let scale = data.y().iter().fold(0.0f64, |m, y| m.max(y.abs()));
    if !(t1 <= MAX_SPAN_MULTIPLE * span) || amp.abs() <= 1e-9 * scale.max(f64::MIN_POSITIVE) {
        result.converged = false;
        result.flag("no_decay");
    }
    // A decay faster than the first delay step is determined by one point.
    let first_step = data.x().iter().map(|x| x - data.x()[0]).find(|d| *d > 0.0).unwrap_or(span);
    if t1 < first_step {
        result.converged = false;
        result.flag("unresolved_decay");
    }
    Ok(result)
}

/// Fits `a·envelope(t; T1, Γφ, shape) + c` with `T1` held fixed.
pub fn fit_envelope(data: &DataSeries, t1: f64, shape: EnvelopeShape) -> Result<FitResult> {
    data.require(6, "envelope fit")?;
    if !(t1 > 0.0) {
        return Err(Error::domain(format!("T1 must be positive, got {t1}")));
    }
    let span = span(data);
    if !(span > 0.0) {
        return Err(Error::RankDeficient("all delays are equal".into()));
    }
    let (y0, yn) = (data.y()[0], data.y()[data.len() - 1]);
    let (a0, c0) = (y0 - yn, yn);
    let t = data.x();
    // Dephasing-only 1/e time of the starting trace, with relaxation divided out.
    let t_phi = crossing_time(data, a0, c0, |tt| (-tt / (2.0 * t1)).exp());
    // The solver works with Γφ·span so all variables are of order one.
    let x0 = [span / t_phi, a0, c0];
    let residuals = |p: &[f64]| -> Result<Vec<f64>> {
        let g = p[0] / span;
        Ok((0..t.len())
            .map(|i| data.weight(i) * (p[1] * decay_envelope(t[i], t1, g.abs(), shape) + p[2] - data.y()[i]))
            .collect())
    };
    let out = levenberg_marquardt(residuals, &x0, &LmOptions::default())?;
    let mut result = assemble(
        &["gamma_phi_scaled", "amplitude", "offset"],
        &[Transform::Identity, Transform::Identity, Transform::Identity],
        &out,
    );
    let p = result.parameters.remove("gamma_phi_scaled").unwrap_or(0.0);
    let dp = result.uncertainties.remove("gamma_phi_scaled");
    result.parameters.insert("gamma_phi_per_s".into(), p.abs() / span);
    if let Some(dp) = dp {
        result.uncertainties.insert("gamma_phi_per_s".into(), dp / span);
    }
    if let Some(cov) = result.covariance.as_mut() {
        for v in cov[0].iter_mut() {
            *v /= span;
        }
        for row in cov.iter_mut() {
            row[0] /= span;
        }
    }
    result.parameter_order[0] = "gamma_phi_per_s".into();
    if result.get("amplitude").unwrap_or(0.0) < 0.0 {
        result.flag("negative_amplitude");
    }
    Ok(result)
}
