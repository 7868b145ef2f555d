//! T1 limited by quasiparticle tunneling versus temperature.

use csfq::analytic;
use csfq::decoherence::{nqp_from_xqp, qp_relaxation, QuasiparticleEnv};
use csfq::QubitParams;

fn main() -> csfq::Result<()> {
    let q = QubitParams::new(0.41, 85.0, 3.2, 78.0)?;
    let m = analytic::junction_matrix_elements(&q);
    let env = QuasiparticleEnv::from_nqp(0.6)?;
    println!("x_qp = {:.3e}, n_qp = {:.2} um^-3", env.x_qp(), nqp_from_xqp(&env));
    println!("matrix elements: large {:.4}, small {:.4}", m.large, m.small);
    println!("{:>6} {:>10} {:>14} {:>14}", "T/mK", "T1/us", "noneq/s^-1", "thermal/s^-1");
    for t_mk in [10, 50, 100, 120, 150, 180, 200] {
        let r = qp_relaxation(&q, 4.68, &env, t_mk as f64 * 1e-3, m)?;
        println!(
            "{:>6} {:>10.2} {:>14.4e} {:>14.4e}",
            t_mk,
            1e6 / r.total,
            r.nonequilibrium,
            r.equilibrium_down + r.equilibrium_up
        );
    }
    Ok(())
}
