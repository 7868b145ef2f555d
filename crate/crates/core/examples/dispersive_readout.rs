//! Couplings from the measured cavity pull, and the Purcell limit.

use csfq::cqed::{self, DispersiveSet};

fn main() -> csfq::Result<()> {
    let (omega01, omega12, omega_c0, omega_c, chi) = (4.68, 5.46, 8.2175, 8.219, 0.892);
    let d = cqed::extract_couplings(omega01, omega12, omega_c0, omega_c, chi)?;
    println!("chi01 = {:.3} MHz, chi12 = {:.3} MHz", d.chi01, d.chi12);
    println!("g01 = {:.2} MHz, g12 = {:.2} MHz, dispersive: {}", d.g01, d.g12, d.dispersive);

    let fwd = DispersiveSet::from_couplings(d.g01, d.g12, omega01, omega12, omega_c0)?;
    println!("forward 2chi = {:.4} MHz", 2.0 * fwd.chi);
    println!("dressed cavity = {:.5} GHz", fwd.dressed_cavity(omega_c0));

    let t1p = cqed::purcell_t1(1.3, d.g01, omega01, omega_c)?;
    println!("Purcell T1 = {:.3} ms ({})", t1p * 1e3, cqed::RATE_CONVENTION);
    Ok(())
}
