//! Exact diagonalization of the shunted flux-qubit Hamiltonian on a phase grid.
//!
//! The two-dimensional model uses the symmetric/antisymmetric phase
//! combinations `φ_p`, `φ_m` of the two large junctions,
//!
//! ```text
//! U = 2E_J(1 − cos φ_p cos φ_m) + αE_J(1 − cos(2πf + 2φ_m))
//! K = E_p n_p² + E_m n_m²,   E_p = 2E_C,   E_m = 2E_C / (1 + 2α + 2β)
//! ```
//!
//! with `β = C_S / C_J`. For `β → ∞`, `E_m → E_CS` and dropping `φ_p` leaves the
//! one-dimensional model built by [`build_hamiltonian_1d`].

mod grid;
mod lanczos;
mod operator;

pub use grid::{GridSpec, DEFAULT_POINTS};
pub use lanczos::{lowest_eigenpairs, EigenResult, LanczosOptions, MAX_STATES, START_SEED};
pub use operator::{HamiltonianOperator, Layout, LinearOperator};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{FluxBias, QubitParams};

/// States solved for by default: enough for `ω01` and `ω12`.
pub const DEFAULT_STATES: usize = 4;

/// `(E_p, E_m)` in GHz.
pub fn kinetic_coefficients(q: &QubitParams) -> (f64, f64) {
    let e_p = 2.0 * q.e_c();
    let e_m = 2.0 * q.e_c() / (1.0 + 2.0 * q.alpha() + 2.0 * q.beta());
    (e_p, e_m)
}

/// Potential of the two-dimensional model at one grid point, GHz.
pub fn potential_2d(q: &QubitParams, f: FluxBias, phi_p: f64, phi_m: f64) -> f64 {
    let two_pi_f = 2.0 * std::f64::consts::PI * f.value();
    2.0 * q.e_j() * (1.0 - phi_p.cos() * phi_m.cos()) + q.alpha() * q.e_j() * (1.0 - (two_pi_f + 2.0 * phi_m).cos())
}

/// Optimal-point potential of the one-dimensional model, GHz.
pub fn potential_1d(q: &QubitParams, phi: f64) -> f64 {
    2.0 * q.e_j() * (1.0 - phi.cos()) + q.alpha() * q.e_j() * (1.0 + (2.0 * phi).cos())
}

pub fn build_hamiltonian_2d(q: &QubitParams, f: FluxBias, grid: GridSpec) -> HamiltonianOperator {
    let n = grid.points();
    let phases = grid.phases();
    let mut potential = Vec::with_capacity(n * n);
    for &pp in &phases {
        for &pm in &phases {
            potential.push(potential_2d(q, f, pp, pm));
        }
    }
    let (e_p, e_m) = kinetic_coefficients(q);
    HamiltonianOperator::two_dimensional(grid, potential, e_p, e_m, true, q.e_j())
}

/// `H = E_CS n² + 2E_J(1 − cos φ) + αE_J(1 + cos 2φ)`, valid at `f = 0.5`.
pub fn build_hamiltonian_1d(q: &QubitParams, grid: GridSpec) -> HamiltonianOperator {
    let potential = grid.phases().iter().map(|&p| potential_1d(q, p)).collect();
    HamiltonianOperator::one_dimensional(grid, potential, q.e_cs(), q.e_j())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixElementKind {
    /// `sin(φ_m/2)`, the large-junction operator.
    SinHalfPhiM,
    /// `cos φ_m`, which equals `sin(φ_3/2)` for the small junction at `f = 0.5`.
    CosPhiM,
    /// `sin φ_m`, odd under `φ_m → −φ_m`; used for parity checks.
    SinPhiM,
}

impl MatrixElementKind {
    fn eval(self, phi_m: f64) -> f64 {
        match self {
            MatrixElementKind::SinHalfPhiM => (0.5 * phi_m).sin(),
            MatrixElementKind::CosPhiM => phi_m.cos(),
            MatrixElementKind::SinPhiM => phi_m.sin(),
        }
    }
}

/// `|⟨ψ_i| O(φ_m) |ψ_j⟩|` by grid quadrature.
pub fn numeric_matrix_element(
    h: &HamiltonianOperator,
    eig: &EigenResult,
    kind: MatrixElementKind,
    states: (usize, usize),
) -> Result<f64> {
    let (i, j) = states;
    let count = eig.eigenvectors.len();
    let (a, b) = match (eig.eigenvectors.get(i), eig.eigenvectors.get(j)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::domain(format!(
                "states ({i}, {j}) requested but only {count} eigenvectors available"
            )))
        }
    };
    if a.len() != h.dim() {
        return Err(Error::InconsistentInputs(
            "eigenvectors do not belong to this operator".into(),
        ));
    }
    let phi = h.phi_m_values();
    let s: f64 = a
        .iter()
        .zip(b)
        .zip(&phi)
        .map(|((x, y), p)| x * kind.eval(*p) * y)
        .sum();
    Ok(s.abs())
}

/// Levels and transitions from one exact solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericSpectrum {
    pub levels: Vec<f64>,
    pub omega01: f64,
    pub omega12: f64,
    pub anharmonicity: f64,
    pub max_residual: f64,
    pub iterations: usize,
}

impl NumericSpectrum {
    fn from_eigen(r: &EigenResult) -> Result<Self> {
        let (omega01, omega12) = match (r.omega01(), r.omega12()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::domain("need at least three states for omega12")),
        };
        Ok(NumericSpectrum {
            levels: r.eigenvalues.clone(),
            omega01,
            omega12,
            anharmonicity: omega12 - omega01,
            max_residual: r.residuals.iter().copied().fold(0.0, f64::max),
            iterations: r.iterations,
        })
    }
}

pub fn solve_2d(q: &QubitParams, f: FluxBias, grid: GridSpec, states: usize) -> Result<NumericSpectrum> {
    let h = build_hamiltonian_2d(q, f, grid);
    let r = lowest_eigenpairs(&h, states.max(3), &LanczosOptions::default())?;
    NumericSpectrum::from_eigen(&r)
}

pub fn solve_1d(q: &QubitParams, grid: GridSpec, states: usize) -> Result<NumericSpectrum> {
    let h = build_hamiltonian_1d(q, grid);
    let r = lowest_eigenpairs(&h, states.max(3), &LanczosOptions::default())?;
    NumericSpectrum::from_eigen(&r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxPoint {
    pub flux: f64,
    pub omega01: f64,
    pub omega12: f64,
}

/// One two-dimensional solve per flux point, in input order.
pub fn numeric_omega01_vs_flux(q: &QubitParams, fluxes: &[FluxBias], grid: GridSpec) -> Result<Vec<FluxPoint>> {
    fluxes.iter().map(|&f| flux_point(q, f, grid)).collect()
}

/// Single sweep point; errors carry the failing flux.
pub fn flux_point(q: &QubitParams, f: FluxBias, grid: GridSpec) -> Result<FluxPoint> {
    solve_2d(q, f, grid, DEFAULT_STATES)
        .map(|s| FluxPoint {
            flux: f.value(),
            omega01: s.omega01,
            omega12: s.omega12,
        })
        .map_err(|e| Error::AtFlux {
            flux: f.value(),
            source: Box::new(e),
        })
}
