//! Ramsey, Hahn-echo and CPMG filter functions on a log frequency grid.

use csfq::filters::{filter_function, FilterSpec};

fn main() -> csfq::Result<()> {
    let tau = 20e-6;
    let specs = [
        ("Ramsey", FilterSpec::ramsey(tau)?),
        ("Hahn", FilterSpec::hahn(tau, 0.0)?),
        ("CPMG-20", FilterSpec::cpmg(20, tau, 0.0)?),
        ("CPMG-20, 100 ns pulses", FilterSpec::cpmg(20, tau, 100e-9)?),
    ];
    for (name, spec) in &specs {
        let (w_peak, g_peak) = (0..=4000)
            .map(|i| 1e3 * 10f64.powf(5.0 * i as f64 / 4000.0))
            .map(|w| (w, filter_function(spec, w)))
            .fold((0.0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        println!("{name:<24} peak g = {g_peak:.4} at omega = {w_peak:.4e} rad/s");
    }
    println!("pi N / tau for N = 20: {:.4e} rad/s", std::f64::consts::PI * 20.0 / tau);
    Ok(())
}
