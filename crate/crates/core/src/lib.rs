//! Transverse fields and surface impedance of a semi-infinite Maxwellian plasma with
//! specular reflection, solved by singular-eigenfunction expansion and cross-checked
//! against Fourier and finite-difference solvers.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32`, `f64`); the aliases below
//! fix it to `f64`.

// NaN-rejecting `!(x > 0)` guards are intentional; reference constants keep their published digits
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod dispersion;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod scalar;
pub mod solution;
pub mod specfun;
pub mod spectrum;

pub use dispersion::{lambda, lambda_boundary, make_params};
pub use error::{Error, Result};
pub use oracle::{fd_solve, fourier_impedance};
pub use solution::{compute_coefficients, compute_j, field_e, field_h, impedance};
pub use spectrum::{analyze, count_zeros, find_zeros, Region};

pub type Complex64 = num_complex::Complex<f64>;
pub type Params = dispersion::PlasmaParams<f64>;
pub type Spectrum = spectrum::SpectrumInfo<f64>;
pub type Coefficients = solution::SolutionCoefficients<f64>;
pub type Impedance = solution::ImpedanceResult<f64>;
pub type Profile = solution::FieldProfile<f64>;
pub type Oracle = oracle::OracleConfig<f64>;
