//! Effective photon temperature of an attenuator chain and the resulting
//! thermal-photon dephasing.

use csfq::decoherence::{effective_temperature, thermal_dephasing_rate, thermal_photon_population, AttenuationChain};

fn main() -> csfq::Result<()> {
    let omega_c = 8.219;
    let chain = AttenuationChain::illustrative();
    for s in chain.stages() {
        println!("stage {:>7.3} K  weight {:.1e}", s.temperature, s.weight);
    }
    let teff = effective_temperature(&chain, omega_c)?;
    let nbar = thermal_photon_population(omega_c, teff.temperature)?;
    let gamma = thermal_dephasing_rate(1.3, 0.892, nbar)?;
    println!("T_eff = {:.2} mK (clamped: {})", teff.temperature * 1e3, teff.clamped);
    println!("nbar = {nbar:.3e}");
    println!("T_phi = {:.2} ms", 1e3 / gamma);
    Ok(())
}
