//! Models of a capacitively-shunted flux qubit dispersively coupled to a 3D
//! cavity: perturbative and exact spectra, dispersive readout quantities,
//! decoherence channels, pulse-sequence filter functions and parameter
//! extraction by nonlinear least squares.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod cqed;
pub mod decoherence;
pub mod error;
pub mod filters;
pub mod fit;
pub mod numeric;
pub mod params;
pub mod units;

pub use error::{Error, Result};
pub use params::{CavityParams, FluxBias, QubitParams};
