use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_POINTS: usize = 80;

/// Uniform periodic phase grid on `[−π, π)`, `n` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    n: usize,
}

impl GridSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 16 {
            return Err(Error::InvalidGrid(format!("need at least 16 points per axis, got {n}")));
        }
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("points per axis must be even, got {n}")));
        }
        Ok(GridSpec { n })
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n as f64
    }

    pub fn phase(&self, i: usize) -> f64 {
        -std::f64::consts::PI + self.spacing() * i as f64
    }

    pub fn phases(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.phase(i)).collect()
    }

    /// Integer wavenumber of FFT bin `k` (Nyquist bin mapped to `+n/2`).
    pub fn wavenumber(&self, k: usize) -> f64 {
        if k <= self.n / 2 {
            k as f64
        } else {
            k as f64 - self.n as f64
        }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n: DEFAULT_POINTS }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(GridSpec::new(80).is_ok());
        assert!(matches!(GridSpec::new(14), Err(Error::InvalidGrid(_))));
        assert!(matches!(GridSpec::new(81), Err(Error::InvalidGrid(_))));
        assert_eq!(GridSpec::default().points(), 80);
    }

    #[test]
    fn phases_cover_half_open_interval() {
        let g = GridSpec::new(16).unwrap();
        let p = g.phases();
        assert_eq!(p[0], -std::f64::consts::PI);
        assert!((p[8]).abs() < 1e-15);
        assert!(p[15] < std::f64::consts::PI);
        assert_eq!(g.wavenumber(3), 3.0);
        assert_eq!(g.wavenumber(8), 8.0);
        assert_eq!(g.wavenumber(15), -1.0);
    }
}
