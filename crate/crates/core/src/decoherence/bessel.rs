//! Modified Bessel functions of order zero.
//!
//! `K0` uses the ascending series for `x ≤ 2` and Steed's evaluation of the
//! Temme continued fraction above that.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 2.0;
const EPS: f64 = 1e-16;
const MAX_TERMS: usize = 10_000;

/// `I0(x)` by its power series. Accurate for moderate `|x|`.
pub fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        term *= q / (k * k) as f64;
        sum += term;
        if term < EPS * sum {
            break;
        }
    }
    sum
}

/// `K0(x)` for `x > 0`.
pub fn bessel_k0(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x <= SERIES_LIMIT {
        k0_series(x)
    } else {
        k0e_continued_fraction(x) * (-x).exp()
    })
}

/// Exponentially scaled `eˣ K0(x)`, finite for large arguments.
pub fn bessel_k0e(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x <= SERIES_LIMIT {
        k0_series(x) * x.exp()
    } else {
        k0e_continued_fraction(x)
    })
}

fn check(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("K0 needs a positive finite argument, got {x}")))
    }
}

// K0 = -(ln(x/2) + γ) I0 + Σ_k (x²/4)^k / (k!)² H_k
fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    for k in 1..MAX_TERMS {
        term *= q / (k * k) as f64;
        harmonic += 1.0 / k as f64;
        i0 += term;
        tail += term * harmonic;
        if term * harmonic < EPS * tail {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

fn k0e_continued_fraction(x: f64) -> f64 {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() / s
}
