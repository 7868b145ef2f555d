//! Perturbative gap, anharmonicity and flux dispersion of the reference
//! device.

use csfq::analytic::{self, PerturbativeSpectrum};
use csfq::{FluxBias, QubitParams};

fn main() -> csfq::Result<()> {
    let q = QubitParams::new(0.41, 85.0, 3.2, 78.0)?;
    let s = PerturbativeSpectrum::new(&q);
    println!("E_CS = {:.4} GHz, beta = {:.2}", q.e_cs(), q.beta());
    println!("gap = {:.4} GHz, A = {:.4} GHz", s.delta, s.anharmonicity);
    println!("validity ratio = {:.1}{}", s.validity_ratio, if s.low_validity { " (low)" } else { "" });
    println!("{:>8} {:>12} {:>14}", "f", "omega01/GHz", "domega/df/GHz");
    for i in 0..=10 {
        let f = FluxBias::new(0.49 + 0.002 * i as f64)?;
        println!(
            "{:>8.3} {:>12.5} {:>14.3}",
            f.value(),
            analytic::omega01(&q, f),
            analytic::domega01_df(&q, f)
        );
    }
    Ok(())
}
