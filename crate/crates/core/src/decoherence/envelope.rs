//! Coherence decay envelopes combining energy relaxation and pure dephasing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeShape {
    /// `e^{−t/2T1} e^{−(Γφ t)²}`, the `1/ω` noise form.
    Gaussian,
    /// `e^{−t/2T1} e^{−Γφ t}`.
    Exponential,
}

impl EnvelopeShape {
    pub const ALL: [EnvelopeShape; 2] = [EnvelopeShape::Gaussian, EnvelopeShape::Exponential];

    pub fn name(self) -> &'static str {
        match self {
            EnvelopeShape::Gaussian => "gaussian",
            EnvelopeShape::Exponential => "exponential",
        }
    }
}

pub fn decay_envelope(t: f64, t1: f64, gamma_phi: f64, shape: EnvelopeShape) -> f64 {
    let dephasing = match shape {
        EnvelopeShape::Gaussian => (gamma_phi * t).powi(2),
        EnvelopeShape::Exponential => gamma_phi * t,
    };
    (-t / (2.0 * t1) - dephasing).exp()
}

/// Time at which the envelope reaches `1/e`, s.
pub fn coherence_time(t1: f64, gamma_phi: f64, shape: EnvelopeShape) -> Result<f64> {
    if !(t1 > 0.0) {
        return Err(Error::domain(format!("T1 must be positive, got {t1}")));
    }
    if !(gamma_phi >= 0.0) {
        return Err(Error::domain(format!("dephasing rate must be non-negative, got {gamma_phi}")));
    }
    let b = 1.0 / (2.0 * t1);
    Ok(match shape {
        // Positive root of Γ² t² + b t − 1 = 0 in cancellation-free form.
        EnvelopeShape::Gaussian => 2.0 / (b + (b * b + 4.0 * gamma_phi * gamma_phi).sqrt()),
        EnvelopeShape::Exponential => 1.0 / (b + gamma_phi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bisect_one_over_e(t1: f64, g: f64, shape: EnvelopeShape) -> f64 {
        let target = (-1.0f64).exp();
        let (mut lo, mut hi) = (0.0, 2.0 * t1);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if decay_envelope(mid, t1, g, shape) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn limits() {
        for shape in EnvelopeShape::ALL {
            assert_eq!(decay_envelope(0.0, 90e-6, 1e4, shape), 1.0);
            let v = decay_envelope(180e-6, 90e-6, 0.0, shape);
            assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn one_over_e_points() {
        let (t1, g) = (90e-6, 1.0 / 160e-6);
        let gauss = coherence_time(t1, g, EnvelopeShape::Gaussian).unwrap();
        let expo = coherence_time(t1, g, EnvelopeShape::Exponential).unwrap();
        assert!((gauss - 103.97e-6).abs() < 0.01e-6, "{gauss}");
        assert!((expo - 84.71e-6).abs() < 0.01e-6, "{expo}");
        assert!((expo / 80e-6 - 1.0).abs() < 0.15);
        for shape in EnvelopeShape::ALL {
            let oracle = bisect_one_over_e(t1, g, shape);
            let got = coherence_time(t1, g, shape).unwrap();
            assert!((got / oracle - 1.0).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn bounded_and_decreasing(
            t in 0.0f64..1e-3,
            dt in 1e-9f64..1e-4,
            t1 in 1e-6f64..1e-3,
            g in 0.0f64..1e5,
        ) {
            for shape in EnvelopeShape::ALL {
                let a = decay_envelope(t, t1, g, shape);
                let b = decay_envelope(t + dt, t1, g, shape);
                prop_assert!((0.0..=1.0).contains(&a));
                prop_assert!(b <= a);
            }
        }
    }
}
