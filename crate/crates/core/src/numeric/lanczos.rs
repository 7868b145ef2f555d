//! Lanczos iteration with full reorthogonalization for the lowest few
//! eigenpairs of a real symmetric operator.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::operator::{dot, norm, LinearOperator};
use crate::error::{Error, Result};

/// Seed of the starting vector. Fixed so every solve is reproducible.
pub const START_SEED: u64 = 0x5eed_c5f0;
pub const MAX_STATES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    pub max_iter: usize,
    /// Residual tolerance in units of the operator's energy scale.
    pub tol: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            max_iter: 5000,
            tol: 1e-8,
            seed: START_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    /// Lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit-norm eigenvectors; the largest-magnitude component of each is positive.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
    /// `‖H v − E v‖` for each pair, same units as the eigenvalues.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

impl EigenResult {
    pub fn omega01(&self) -> Option<f64> {
        self.transition(0, 1)
    }

    pub fn omega12(&self) -> Option<f64> {
        self.transition(1, 2)
    }

    pub fn anharmonicity(&self) -> Option<f64> {
        Some(self.omega12()? - self.omega01()?)
    }

    fn transition(&self, i: usize, j: usize) -> Option<f64> {
        Some(self.eigenvalues.get(j)? - self.eigenvalues.get(i)?)
    }
}

/// Returns the `k` lowest eigenpairs of `op`.
pub fn lowest_eigenpairs<O: LinearOperator + ?Sized>(op: &O, k: usize, opts: &LanczosOptions) -> Result<EigenResult> {
    if k == 0 || k > MAX_STATES {
        return Err(Error::domain(format!("state count must be in 1..={MAX_STATES}, got {k}")));
    }
    let dim = op.dim();
    if k > dim {
        return Err(Error::domain(format!("requested {k} states from a {dim}-dimensional operator")));
    }
    let tol = opts.tol * op.energy_scale();
    let max_steps = opts.max_iter.min(dim);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    op.restrict(&mut v);
    let v_norm = norm(&v);
    if v_norm == 0.0 {
        return Err(Error::domain("starting vector vanished after restriction"));
    }
    v.iter_mut().for_each(|x| *x /= v_norm);

    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    let mut best = vec![f64::INFINITY; k];
    let mut op_norm: f64 = 0.0;
    let mut last_check = 0;

    for j in 0..max_steps {
        op.apply(&basis[j], &mut w);
        let alpha = dot(&basis[j], &w);
        axpy(-alpha, &basis[j], &mut w);
        if j > 0 {
            axpy(-betas[j - 1], &basis[j - 1], &mut w);
        }
        // Two passes of classical Gram-Schmidt keep the basis orthonormal to
        // working precision.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                axpy(-c, b, &mut w);
            }
        }
        op.restrict(&mut w);
        let beta = norm(&w);
        alphas.push(alpha);
        op_norm = op_norm.max(alpha.abs() + beta + betas.last().copied().unwrap_or(0.0));

        let m = j + 1;
        let breakdown = beta <= 1e-13 * op_norm.max(f64::MIN_POSITIVE);
        let due = m - last_check >= (m / 8).max(8);
        if m >= k && (breakdown || due || m == max_steps) {
            last_check = m;
            let (theta, s) = tridiagonal_eigen(&alphas, &betas);
            let estimates: Vec<f64> = (0..k).map(|i| beta * s[(m - 1, i)].abs()).collect();
            if breakdown || estimates.iter().all(|&e| e < tol) {
                let result = ritz_pairs(op, &basis, &theta, &s, k, m);
                for (b, r) in best.iter_mut().zip(&result.residuals) {
                    *b = b.min(*r);
                }
                if result.residuals.iter().all(|&r| r < tol) {
                    return Ok(result);
                }
            } else {
                for (b, e) in best.iter_mut().zip(&estimates) {
                    *b = b.min(*e);
                }
            }
        }
        if breakdown {
            // Invariant subspace exhausted without meeting the tolerance.
            return Err(Error::NoConvergence {
                iterations: m,
                best_residuals: best,
            });
        }
        betas.push(beta);
        let next: Vec<f64> = w.iter().map(|x| x / beta).collect();
        basis.push(next);
    }
    Err(Error::NoConvergence {
        iterations: max_steps,
        best_residuals: best,
    })
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Eigen-decomposition of the Lanczos tridiagonal, sorted ascending.
fn tridiagonal_eigen(alphas: &[f64], betas: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alphas.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let theta = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let s = DMatrix::from_fn(m, m, |r, c| eig.eigenvectors[(r, order[c])]);
    (theta, s)
}

fn ritz_pairs<O: LinearOperator + ?Sized>(
    op: &O,
    basis: &[Vec<f64>],
    theta: &[f64],
    s: &DMatrix<f64>,
    k: usize,
    m: usize,
) -> EigenResult {
    let dim = op.dim();
    let mut eigenvectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    let mut hy = vec![0.0; dim];
    for i in 0..k {
        let mut y = vec![0.0; dim];
        for (j, b) in basis.iter().take(m).enumerate() {
            axpy(s[(j, i)], b, &mut y);
        }
        let n = norm(&y);
        y.iter_mut().for_each(|x| *x /= n);
        fix_sign(&mut y);
        op.apply(&y, &mut hy);
        let r: f64 = hy
            .iter()
            .zip(&y)
            .map(|(h, v)| (h - theta[i] * v).powi(2))
            .sum::<f64>()
            .sqrt();
        residuals.push(r);
        eigenvectors.push(y);
    }
    EigenResult {
        eigenvalues: theta[..k].to_vec(),
        eigenvectors,
        residuals,
        iterations: m,
    }
}

fn fix_sign(v: &mut [f64]) {
    let mut idx = 0;
    let mut big = 0.0;
    for (i, x) in v.iter().enumerate() {
        // strict comparison keeps the first of equal-magnitude entries
        if x.abs() > big * (1.0 + 1e-12) {
            big = x.abs();
            idx = i;
        }
    }
    if v[idx] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}
