//! Round trips through every fit: spectrum, x_qp, envelopes, inversion
//! recovery and flux-noise amplitude.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use csfq::analytic;
use csfq::decoherence::{decay_envelope, flux_dephasing_rates, qp_relaxation_rate, EnvelopeShape, FluxNoise, QuasiparticleEnv};
use csfq::fit::{self, DataSeries, FitResult};
use csfq::{FluxBias, QubitParams};

fn show(name: &str, r: &FitResult) {
    let params: Vec<String> = r
        .parameters
        .iter()
        .map(|(k, v)| match r.uncertainty(k) {
            Some(s) => format!("{k} = {v:.5e} +/- {s:.1e}"),
            None => format!("{k} = {v:.5e}"),
        })
        .collect();
    println!("{name}: converged {}, {}", r.converged, params.join(", "));
    if !r.flags.is_empty() {
        println!("  flags: {:?}", r.flags);
    }
}

fn main() -> csfq::Result<()> {
    let q = QubitParams::new(0.41, 85.0, 3.2, 78.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mhz = Normal::new(0.0, 1e-3).unwrap();

    let f: Vec<f64> = (0..31).map(|i| 0.485 + 0.001 * i as f64).collect();
    let w = f
        .iter()
        .map(|&f| Ok(analytic::omega01(&q, FluxBias::new(f)?) + mhz.sample(&mut rng)))
        .collect::<csfq::Result<Vec<_>>>()?;
    let start = QubitParams::new(0.40, 80.0, 3.2, 72.0)?;
    show("spectrum", &fit::fit_spectrum(&DataSeries::new(f, w)?, &start, Some(analytic::anharmonicity(&q)))?);

    let m = analytic::junction_matrix_elements(&q);
    let env = QuasiparticleEnv::with_xqp(6e-8)?;
    let temps = vec![0.01, 0.05, 0.1, 0.15, 0.2];
    let t1s = temps
        .iter()
        .map(|&t| Ok(1.0 / qp_relaxation_rate(&q, 4.68, &env, t, m)?))
        .collect::<csfq::Result<Vec<_>>>()?;
    show("x_qp", &fit::fit_xqp(&DataSeries::new(temps, t1s)?, &q, 4.68, 200.0, m)?);

    let t: Vec<f64> = (0..61).map(|i| i as f64 * 200e-6 / 60.0).collect();
    let y: Vec<f64> = t
        .iter()
        .map(|&t| 0.8 * decay_envelope(t, 90e-6, 1.25e4, EnvelopeShape::Gaussian) + 0.1)
        .collect();
    let trace = DataSeries::new(t.clone(), y)?;
    for shape in EnvelopeShape::ALL {
        let r = fit::fit_envelope(&trace, 90e-6, shape)?;
        show(&format!("envelope ({}), residual {:.2e}", shape.name(), r.residual_norm), &r);
    }

    let y = t.iter().map(|&t| (-t / 90e-6).exp() + 0.05).collect();
    show("inversion recovery", &fit::fit_t1_exponential(&DataSeries::new(t, y)?)?);

    let noise = FluxNoise::from_micro_phi0(1.8)?;
    let f: Vec<f64> = (0..41).map(|i| 0.48 + 0.001 * i as f64).collect();
    let g = f
        .iter()
        .map(|&f| Ok(flux_dephasing_rates(&noise, analytic::domega01_df(&q, FluxBias::new(f)?), 1e-6)?.echo))
        .collect::<csfq::Result<Vec<_>>>()?;
    show("flux noise", &fit::fit_flux_noise(&DataSeries::new(f, g)?, &q, fit::DEFAULT_EXCLUSION_WINDOW)?);
    Ok(())
}
