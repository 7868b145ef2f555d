//! Echo and Ramsey dephasing from 1/f flux noise away from the optimal point.

use csfq::analytic;
use csfq::decoherence::flux::DEFAULT_RAMSEY_TIME;
use csfq::decoherence::{flux_dephasing_rates, ramsey_echo_ratio, FluxNoise};
use csfq::{FluxBias, QubitParams};

fn main() -> csfq::Result<()> {
    let q = QubitParams::new(0.41, 85.0, 3.2, 78.0)?;
    let noise = FluxNoise::from_micro_phi0(1.8)?;
    let t = DEFAULT_RAMSEY_TIME;
    println!(
        "sqrt(A_phi) = {:.2} uPhi0, omega_ir = {:.3} rad/s, Gamma_R/Gamma_E = {:.3}",
        noise.sqrt_amplitude_micro(),
        noise.omega_ir,
        ramsey_echo_ratio(noise.omega_ir, t)?
    );
    println!("{:>7} {:>12} {:>12} {:>12}", "f", "Gamma_E/s^-1", "Gamma_R/s^-1", "T_E/us");
    for i in 0..=10 {
        let f = FluxBias::new(0.5 + 0.001 * i as f64)?;
        let r = flux_dephasing_rates(&noise, analytic::domega01_df(&q, f), t)?;
        let t_e = if r.echo > 0.0 { 1e6 / r.echo } else { f64::INFINITY };
        println!("{:>7.3} {:>12.4e} {:>12.4e} {:>12.2}", f.value(), r.echo, r.ramsey, t_e);
    }
    Ok(())
}
