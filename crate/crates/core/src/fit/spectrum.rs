use super::lm::{levenberg_marquardt, numeric_jacobian, scaled_condition, LmOptions};
use super::{assemble, DataSeries, FitResult, Transform};
use crate::analytic::{self, VALIDITY_RATIO_WARNING};
use crate::error::{Error, Result};
use crate::params::{FluxBias, QubitParams};

const MAX_CONDITION: f64 = 1e10;

/// Fits `(α, C_S, E_J)` of the perturbative model to `(f, ω01 [GHz])` data.
///
/// `ω01(f)` alone fixes only the gap and the curvature, so a measured
/// anharmonicity (GHz) is needed to free `α`. Without it `α` stays at
/// `init.alpha()` and the result carries the `alpha_fixed` flag.
pub fn fit_spectrum(data: &DataSeries, init: &QubitParams, anharmonicity: Option<f64>) -> Result<FitResult> {
    data.require(4, "spectrum fit")?;
    if data.distinct_x() < 2 {
        return Err(Error::RankDeficient("spectrum data contain a single flux value".into()));
    }
    let fluxes = data
        .x()
        .iter()
        .map(|&f| FluxBias::new(f))
        .collect::<Result<Vec<_>>>()?;
    let e_c = init.e_c();
    let free_alpha = anharmonicity.is_some();
    let a_weight = data
        .sigma()
        .map_or(1.0, |s| 1.0 / (s.iter().sum::<f64>() / s.len() as f64));

    let alpha_t = Transform::Logit { lo: 0.0, hi: 0.5 };
    let mut names = vec!["c_s_ff", "e_j_ghz"];
    let mut transforms = vec![Transform::Log, Transform::Log];
    let mut x0 = vec![init.c_s().ln(), init.e_j().ln()];
    if free_alpha {
        names.insert(0, "alpha");
        transforms.insert(0, alpha_t);
        x0.insert(0, alpha_t.to_internal(init.alpha()));
    }

    let unpack = |p: &[f64]| -> Result<QubitParams> {
        let (alpha, rest) = if free_alpha {
            (alpha_t.to_physical(p[0]), &p[1..])
        } else {
            (init.alpha(), p)
        };
        QubitParams::new(alpha, rest[1].exp(), e_c, rest[0].exp())
    };
    let residuals = |p: &[f64]| -> Result<Vec<f64>> {
        let q = unpack(p)?;
        let mut r: Vec<f64> = fluxes
            .iter()
            .zip(data.y())
            .enumerate()
            .map(|(i, (&f, y))| data.weight(i) * (analytic::omega01(&q, f) - y))
            .collect();
        if let Some(a) = anharmonicity {
            r.push(a_weight * (analytic::anharmonicity(&q) - a));
        }
        Ok(r)
    };

    let opts = LmOptions::default();
    let j0 = numeric_jacobian(&residuals, &x0, opts.fd_step)?;
    if scaled_condition(&j0) > MAX_CONDITION {
        return Err(Error::RankDeficient(
            "spectrum data do not constrain the fitted parameters".into(),
        ));
    }
    let out = levenberg_marquardt(residuals, &x0, &opts)?;
    let mut result = assemble(&names, &transforms, &out);
    if !free_alpha {
        result.parameters.insert("alpha".into(), init.alpha());
        result.flag("alpha_fixed");
    }
    let q = unpack(&out.x)?;
    if analytic::validity_ratio(&q) < VALIDITY_RATIO_WARNING {
        result.flag("low_validity");
    }
    let above = data.x().iter().any(|&f| f > 0.5);
    let below = data.x().iter().any(|&f| f < 0.5);
    if !(above && below) {
        result.flag("one_sided");
    }
    Ok(result)
}
