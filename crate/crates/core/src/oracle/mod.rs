//! Independent solutions of the same half-space problem, used to cross-check the
//! eigenfunction expansion.
//!
//! * Fourier route: extend `e` evenly, so `e''` picks up the source `2e'(0⁺)δ(x)`. The kinetic
//!   equation gives `h(k, μ) = E(k)/(z₀ + ikμ)` and the field equation
//!   `E(k) = 2e'(0)/D(k)`, `D(k) = Q² - k² + iα K(k)`,
//!   `K(k) = (1/√π) ∫ e^{-μ²}/(z₀ + ikμ) dμ = t(iz₀/k)/(ik)`. Then `e(0) = 1` fixes
//!   `e'(0) = [(2/π) ∫₀^∞ dk/D(k)]⁻¹`.
//! * Finite differences: the kinetic equation integrated exactly along characteristics for a
//!   piecewise-linear field, coupled to a three-point field equation on a graded grid.

mod fd;
mod fourier;

pub use fd::{fd_profile, fd_solve, FdSolution};
pub use fourier::{fourier_impedance, fourier_surface_derivative, kernel_k, FourierEstimate};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Resolutions for both oracle routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig<T> {
    /// Fourier cutoff; the analytic tail beyond it must stay below 1e-10 relative
    pub k_max: T,
    /// number of log-spaced initial panels in `k`
    pub n_k: usize,
    /// Gauss–Legendre velocity nodes on each half line (coarsest level)
    pub mu_nodes: usize,
    /// far boundary of the FD grid
    pub x_max: T,
    /// FD grid intervals (coarsest level)
    pub n_x: usize,
}

impl<T: Real> OracleConfig<T> {
    pub fn new(k_max: T, n_k: usize, mu_nodes: usize, x_max: T, n_x: usize) -> Result<Self> {
        let cfg = OracleConfig { k_max, n_k, mu_nodes, x_max, n_x };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_max > T::zero()) || !self.k_max.is_finite() || !(self.x_max > T::zero()) || !self.x_max.is_finite() {
            return Err(Error::Domain("oracle config needs positive finite k_max and x_max".into()));
        }
        if self.n_k < 8 || self.mu_nodes < 8 || self.n_x < 8 {
            return Err(Error::Domain(format!(
                "oracle resolutions must be at least 8 (n_k {}, mu_nodes {}, n_x {})",
                self.n_k, self.mu_nodes, self.n_x
            )));
        }
        Ok(())
    }
}

impl Default for OracleConfig<f64> {
    fn default() -> Self {
        OracleConfig { k_max: 1e4, n_k: 64, mu_nodes: 10, x_max: 25.0, n_x: 100 }
    }
}
