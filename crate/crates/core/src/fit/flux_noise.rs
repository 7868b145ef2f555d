use std::collections::BTreeMap;

use super::{DataSeries, FitResult};
use crate::analytic;
use crate::error::{Error, Result};
use crate::params::{FluxBias, QubitParams};
use crate::units::ghz_to_angular;

/// Points with `|f − 0.5|` at or below this are excluded.
pub const DEFAULT_EXCLUSION_WINDOW: f64 = 0.002;

/// Fits `A_Φ` to `(f, Γφ_E [s⁻¹])` data by ordinary least squares of the
/// echo rate against `|∂ω01/∂f|` (rad/s) with an intercept; `A_Φ = s²/ln 2`.
pub fn fit_flux_noise(data: &DataSeries, q: &QubitParams, window: f64) -> Result<FitResult> {
    if !(window >= 0.0) {
        return Err(Error::domain(format!("exclusion window must be non-negative, got {window}")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&f, &g) in data.x().iter().zip(data.y()) {
        if (f - 0.5).abs() > window {
            xs.push(ghz_to_angular(analytic::domega01_df(q, FluxBias::new(f)?).abs()));
            ys.push(g);
        }
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "flux-noise fit needs 3 points outside |f - 0.5| <= {window}, got {n}"
        )));
    }
    let nf = n as f64;
    let xm = xs.iter().sum::<f64>() / nf;
    let ym = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::RankDeficient("all retained points have the same flux slope".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| slope * x + intercept - y).collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let s2 = if n > 2 { rss / (n - 2) as f64 } else { 0.0 };
    let var_slope = s2 / sxx;
    let var_intercept = s2 * (1.0 / nf + xm * xm / sxx);
    let cov_si = -s2 * xm / sxx;

    let ln2 = std::f64::consts::LN_2;
    let a_phi = slope * slope / ln2;
    let d_a = 2.0 * slope / ln2;
    let sigma_a = d_a.abs() * var_slope.sqrt();
    let mut result = FitResult {
        parameters: BTreeMap::from([
            ("a_phi".to_string(), a_phi),
            ("sqrt_a_phi_micro_phi0".to_string(), a_phi.sqrt() * 1e6),
            ("slope".to_string(), slope),
            ("intercept_per_s".to_string(), intercept),
        ]),
        uncertainties: BTreeMap::from([
            ("a_phi".to_string(), sigma_a),
            ("slope".to_string(), var_slope.sqrt()),
            ("intercept_per_s".to_string(), var_intercept.sqrt()),
        ]),
        covariance: Some(vec![vec![var_slope, cov_si], vec![cov_si, var_intercept]]),
        parameter_order: vec!["slope".into(), "intercept_per_s".into()],
        residuals,
        residual_norm: rss.sqrt(),
        iterations: 1,
        converged: true,
        scaled_gradient: 0.0,
        cost_history: vec![0.5 * rss],
        flags: Vec::new(),
    };
    if slope < 0.0 {
        result.flag("negative_slope");
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoherence::{flux_dephasing_rates, FluxNoise};

    fn qubit() -> QubitParams {
        QubitParams::new(0.41, 85.0, 3.2, 78.0).unwrap()
    }

    fn synthetic(a_micro: f64) -> DataSeries {
        let noise = FluxNoise::from_micro_phi0(a_micro).unwrap();
        let q = qubit();
        let f: Vec<f64> = (0..41).map(|i| 0.48 + 0.001 * i as f64).collect();
        let g = f
            .iter()
            .map(|&x| {
                let d = analytic::domega01_df(&q, FluxBias::new(x).unwrap());
                flux_dephasing_rates(&noise, d, 1e-6).unwrap().echo
            })
            .collect();
        DataSeries::new(f, g).unwrap()
    }

    #[test]
    fn round_trip() {
        let r = fit_flux_noise(&synthetic(1.8), &qubit(), DEFAULT_EXCLUSION_WINDOW).unwrap();
        assert!((r.get("a_phi").unwrap() / (1.8e-6f64).powi(2) - 1.0).abs() < 1e-9);
        assert!((r.get("sqrt_a_phi_micro_phi0").unwrap() - 1.8).abs() < 1e-8);
        assert!(r.get("intercept_per_s").unwrap().abs() < 1e-3);
    }

    #[test]
    fn zero_rates() {
        let d = synthetic(1.8);
        let zero = DataSeries::new(d.x().to_vec(), vec![0.0; d.len()]).unwrap();
        let r = fit_flux_noise(&zero, &qubit(), DEFAULT_EXCLUSION_WINDOW).unwrap();
        assert_eq!(r.get("a_phi").unwrap(), 0.0);
    }

    #[test]
    fn points_on_the_line_do_not_move_the_slope() {
        let q = qubit();
        // rates on an offset line
        let f: Vec<f64> = vec![0.485, 0.49, 0.495, 0.505, 0.51];
        let line = |x: f64| 3e-6 * ghz_to_angular(analytic::domega01_df(&q, FluxBias::new(x).unwrap()).abs()) + 2e4;
        let noisy: Vec<f64> = f
            .iter()
            .enumerate()
            .map(|(i, &x)| line(x) * (1.0 + 0.05 * if i % 2 == 0 { 1.0 } else { -1.0 }))
            .collect();
        let base = fit_flux_noise(&DataSeries::new(f.clone(), noisy.clone()).unwrap(), &q, 0.002).unwrap();
        let s = base.get("slope").unwrap();
        let c = base.get("intercept_per_s").unwrap();
        let mut f2 = f.clone();
        let mut y2 = noisy.clone();
        for x in [0.482, 0.515, 0.52] {
            f2.push(x);
            y2.push(s * ghz_to_angular(analytic::domega01_df(&q, FluxBias::new(x).unwrap()).abs()) + c);
        }
        let more = fit_flux_noise(&DataSeries::new(f2, y2).unwrap(), &q, 0.002).unwrap();
        assert!((more.get("slope").unwrap() / s - 1.0).abs() < 1e-10);
    }

    #[test]
    fn window_leaves_too_few_points() {
        let d = DataSeries::new(vec![0.499, 0.5, 0.501, 0.51, 0.49], vec![1.0; 5]).unwrap();
        assert!(matches!(
            fit_flux_noise(&d, &qubit(), DEFAULT_EXCLUSION_WINDOW),
            Err(Error::InsufficientData(_))
        ));
    }
}
