//! Matrix-free Hamiltonians on periodic phase grids.
//!
//! The potential is diagonal on the grid; the kinetic part `Σ E_a n_a²` with
//! `n_a = −i ∂/∂φ_a` is applied in Fourier space, so a plane wave `e^{imφ}`
//! is an exact eigenvector with eigenvalue `E m²`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::GridSpec;

/// Real symmetric linear operator supplying matrix-vector products.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// `y = A x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// Projects a vector onto the invariant subspace the operator acts on.
    /// Identity unless the operator carries a symmetry constraint.
    fn restrict(&self, _v: &mut [f64]) {}

    /// Energy unit used to express convergence tolerances.
    fn energy_scale(&self) -> f64 {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    OneD,
    /// Row-major `[i_p][i_m]`.
    TwoD,
}

/// Grid Hamiltonian `K + U`.
///
/// For two-dimensional operators built by
/// [`build_hamiltonian_2d`](super::build_hamiltonian_2d) the operator acts on
/// the subspace of grid functions invariant under `(φ_p, φ_m) → (φ_p + π, φ_m + π)`.
/// That shift maps the junction phases `φ_1 = φ_p + φ_m`, `φ_2 = φ_p − φ_m`
/// onto `φ_1 + 2π`, `φ_2`, so the invariant subspace holds exactly the wave
/// functions that are 2π-periodic in every junction phase.
#[derive(Clone)]
pub struct HamiltonianOperator {
    grid: GridSpec,
    layout: Layout,
    potential: Vec<f64>,
    /// Kinetic eigenvalue per Fourier bin; for 2D stored transposed, `[k_m][k_p]`.
    kinetic: Vec<f64>,
    physical_sector: bool,
    energy_scale: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for HamiltonianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianOperator")
            .field("grid", &self.grid)
            .field("layout", &self.layout)
            .field("physical_sector", &self.physical_sector)
            .field("energy_scale", &self.energy_scale)
            .finish_non_exhaustive()
    }
}

impl HamiltonianOperator {
    /// One-dimensional operator `E_kin n² + U(φ)`.
    pub fn one_dimensional(grid: GridSpec, potential: Vec<f64>, kinetic_coeff: f64, energy_scale: f64) -> Self {
        let n = grid.points();
        assert_eq!(potential.len(), n, "potential length must match the grid");
        let kinetic = (0..n)
            .map(|k| {
                let m = grid.wavenumber(k);
                kinetic_coeff * m * m
            })
            .collect();
        Self::assemble(grid, Layout::OneD, potential, kinetic, false, energy_scale)
    }

    /// Two-dimensional operator `E_p n_p² + E_m n_m² + U(φ_p, φ_m)` with the
    /// potential given row-major as `[i_p][i_m]`.
    pub fn two_dimensional(
        grid: GridSpec,
        potential: Vec<f64>,
        e_p: f64,
        e_m: f64,
        physical_sector: bool,
        energy_scale: f64,
    ) -> Self {
        let n = grid.points();
        assert_eq!(potential.len(), n * n, "potential length must match the grid");
        let mut kinetic = vec![0.0; n * n];
        for km in 0..n {
            let m = grid.wavenumber(km);
            for kp in 0..n {
                let p = grid.wavenumber(kp);
                kinetic[km * n + kp] = e_p * p * p + e_m * m * m;
            }
        }
        Self::assemble(grid, Layout::TwoD, potential, kinetic, physical_sector, energy_scale)
    }

    fn assemble(
        grid: GridSpec,
        layout: Layout,
        potential: Vec<f64>,
        kinetic: Vec<f64>,
        physical_sector: bool,
        energy_scale: f64,
    ) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.points());
        let inverse = planner.plan_fft_inverse(grid.points());
        HamiltonianOperator {
            grid,
            layout,
            potential,
            kinetic,
            physical_sector,
            energy_scale,
            forward,
            inverse,
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn is_physical_sector(&self) -> bool {
        self.physical_sector
    }

    /// `φ_m` at each flattened grid index (the only phase for 1D operators).
    pub fn phi_m_values(&self) -> Vec<f64> {
        let n = self.grid.points();
        match self.layout {
            Layout::OneD => self.grid.phases(),
            Layout::TwoD => (0..n * n).map(|idx| self.grid.phase(idx % n)).collect(),
        }
    }

    /// `φ_p` at each flattened grid index; `None` for 1D operators.
    pub fn phi_p_values(&self) -> Option<Vec<f64>> {
        let n = self.grid.points();
        match self.layout {
            Layout::OneD => None,
            Layout::TwoD => Some((0..n * n).map(|idx| self.grid.phase(idx / n)).collect()),
        }
    }

    /// Kinetic part only, `y = K x`.
    pub fn apply_kinetic(&self, x: &[f64], y: &mut [f64]) {
        let n = self.grid.points();
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        match self.layout {
            Layout::OneD => {
                self.forward.process(&mut buf);
                for (c, k) in buf.iter_mut().zip(&self.kinetic) {
                    *c *= *k;
                }
                self.inverse.process(&mut buf);
                let scale = 1.0 / n as f64;
                for (yi, c) in y.iter_mut().zip(&buf) {
                    *yi = c.re * scale;
                }
            }
            Layout::TwoD => {
                let mut tmp = vec![Complex64::new(0.0, 0.0); n * n];
                // rows of [i_p][i_m] along φ_m
                self.forward.process(&mut buf);
                transpose(&buf, &mut tmp, n);
                // rows of [k_m][i_p] along φ_p
                self.forward.process(&mut tmp);
                for (c, k) in tmp.iter_mut().zip(&self.kinetic) {
                    *c *= *k;
                }
                self.inverse.process(&mut tmp);
                transpose(&tmp, &mut buf, n);
                self.inverse.process(&mut buf);
                let scale = 1.0 / (n * n) as f64;
                for (yi, c) in y.iter_mut().zip(&buf) {
                    *yi = c.re * scale;
                }
            }
        }
    }

    /// Dense matrix of the operator, column by column. Intended for small
    /// grids and cross-checks.
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let d = self.dim();
        let mut m = nalgebra::DMatrix::zeros(d, d);
        let mut e = vec![0.0; d];
        let mut col = vec![0.0; d];
        for j in 0..d {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            self.apply_unrestricted(&e, &mut col);
            m.column_mut(j).copy_from_slice(&col);
        }
        m
    }

    fn apply_unrestricted(&self, x: &[f64], y: &mut [f64]) {
        self.apply_kinetic(x, y);
        for ((yi, xi), u) in y.iter_mut().zip(x).zip(&self.potential) {
            *yi += u * xi;
        }
    }

    fn project_sector(&self, v: &mut [f64]) {
        let n = self.grid.points();
        let h = n / 2;
        for ip in 0..n {
            for im in 0..n {
                let a = ip * n + im;
                let b = ((ip + h) % n) * n + (im + h) % n;
                if a < b {
                    let avg = 0.5 * (v[a] + v[b]);
                    v[a] = avg;
                    v[b] = avg;
                }
            }
        }
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            dst[j * n + i] = src[i * n + j];
        }
    }
}

impl LinearOperator for HamiltonianOperator {
    fn dim(&self) -> usize {
        self.potential.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.apply_unrestricted(x, y);
        if self.physical_sector {
            self.project_sector(y);
        }
    }

    fn restrict(&self, v: &mut [f64]) {
        if self.physical_sector {
            self.project_sector(v);
        }
    }

    fn energy_scale(&self) -> f64 {
        self.energy_scale
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
        (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn plane_wave_is_kinetic_eigenvector_1d() {
        let g = GridSpec::new(32).unwrap();
        let op = HamiltonianOperator::one_dimensional(g, vec![0.0; 32], 0.37, 1.0);
        for m in [0i32, 1, 3, 7, 15] {
            let x: Vec<f64> = g.phases().iter().map(|p| (m as f64 * p).cos()).collect();
            let mut y = vec![0.0; 32];
            op.apply_kinetic(&x, &mut y);
            let e = 0.37 * (m * m) as f64;
            for (yi, xi) in y.iter().zip(&x) {
                assert!((yi - e * xi).abs() < 1e-12 * (1.0 + e), "m={m}");
            }
        }
    }

    #[test]
    fn plane_wave_is_kinetic_eigenvector_2d() {
        let g = GridSpec::new(16).unwrap();
        let n = 16;
        let op = HamiltonianOperator::two_dimensional(g, vec![0.0; n * n], 2.0, 0.3, false, 1.0);
        let (mp, mm) = (3.0, 5.0);
        let x: Vec<f64> = (0..n * n)
            .map(|i| (mp * g.phase(i / n) + mm * g.phase(i % n)).sin())
            .collect();
        let mut y = vec![0.0; n * n];
        op.apply_kinetic(&x, &mut y);
        let e = 2.0 * mp * mp + 0.3 * mm * mm;
        for (yi, xi) in y.iter().zip(&x) {
            assert!((yi - e * xi).abs() < 1e-12 * e);
        }
    }

    #[test]
    fn operator_is_symmetric() {
        let g = GridSpec::new(24).unwrap();
        let n = 24;
        let pot: Vec<f64> = (0..n * n)
            .map(|i| 2.0 * (1.0 - g.phase(i / n).cos() * g.phase(i % n).cos()))
            .collect();
        for sector in [false, true] {
            let op = HamiltonianOperator::two_dimensional(g, pot.clone(), 6.4, 0.29, sector, 1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let x = random_vec(&mut rng, n * n);
            let y = random_vec(&mut rng, n * n);
            let mut hx = vec![0.0; n * n];
            let mut hy = vec![0.0; n * n];
            op.apply(&x, &mut hx);
            op.apply(&y, &mut hy);
            let a = dot(&x, &hy);
            let b = dot(&hx, &y);
            assert!((a - b).abs() <= 1e-10 * a.abs().max(b.abs()), "{a} {b}");
        }
    }

    #[test]
    fn sector_projection_is_idempotent() {
        let g = GridSpec::new(16).unwrap();
        let op = HamiltonianOperator::two_dimensional(g, vec![1.0; 256], 1.0, 1.0, true, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut v = random_vec(&mut rng, 256);
        op.restrict(&mut v);
        let once = v.clone();
        op.restrict(&mut v);
        assert_eq!(once, v);
    }
}
