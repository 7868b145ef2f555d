//! Exact two-dimensional diagonalization at the optimal point and a grid
//! refinement check.

use std::time::Instant;

use csfq::numeric::{solve_2d, GridSpec, DEFAULT_STATES};
use csfq::{FluxBias, QubitParams};

fn main() -> csfq::Result<()> {
    let q = QubitParams::new(0.437, 136.75, 3.2, 60.0)?;
    println!("beta = C_S/C_J = {:.3}", q.beta());
    for n in [80, 120] {
        let start = Instant::now();
        let s = solve_2d(&q, FluxBias::OPTIMAL, GridSpec::new(n)?, DEFAULT_STATES)?;
        println!(
            "{n}x{n}: omega01 = {:.4} GHz, omega12 = {:.4} GHz, A = {:.4} GHz ({} Lanczos steps, {:.2?})",
            s.omega01,
            s.omega12,
            s.anharmonicity,
            s.iterations,
            start.elapsed()
        );
    }
    Ok(())
}
