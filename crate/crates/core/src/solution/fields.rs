//! Field profiles `e(x)` and `h(x, μ)` from the eigenfunction expansion.
//!
//! `e(x) = (a z₀/√π) [Σ A_k η_k² e^{-η_k² - z₀x/η_k} + ∫₀^∞ η² e^{-η²} A(η) e^{-z₀x/η} dη]`
//!
//! `h(x, μ) = (a/√π) [Σ A_k η_k³ e^{-η_k² - z₀x/η_k}/(η_k - μ) + PV ∫₀^∞ η³ e^{-η²} A(η) e^{-z₀x/η}/(η - μ) dη]`
//! `+ θ(μ) λ(μ) A(μ) e^{-z₀x/μ}`
//!
//! The continuum weight `η² e^{-η²} A(η)` falls below double precision past `η = 12`, and
//! `e^{-z₀x/η}` below `e^{-46}` for `η < Re z₀ x / 46`, so the integrals run over that window.
//! For `|Im z₀| x` large the factor oscillates fast in `1/η`; panels are laid out uniformly in
//! `1/η` so each spans a couple of periods.

use rayon::prelude::*;

use super::{continuum_coefficient, continuum_weight, qspec, SolutionCoefficients};
use crate::dispersion::{lambda_boundary, PlasmaParams};
use crate::error::{Error, Result};
use crate::numerics::{integrate_fallible, integrate_principal_value_with, integrate_with_breakpoints};
use crate::scalar::{real, Cplx, Real};
use crate::spectrum::CUT_EXTENT;

const CUT_GRID: [f64; 15] = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0];
const DECAY_EXPONENT: f64 = 46.0;
const MAX_PANELS: usize = 4000;
/// `|μ - Re η_k|` below this rejects an `h` evaluation.
pub const POLE_REJECTION: f64 = 1e-12;

/// Field samples on a depth grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldProfile<T> {
    pub x_grid: Vec<T>,
    pub e_values: Vec<Cplx<T>>,
    /// optional `(x, μ, h)` samples
    pub h_samples: Vec<(T, T, Cplx<T>)>,
    /// discretization error estimate, for profiles from a grid solver
    pub error_estimate: Option<T>,
}

/// Integration panels for the continuum term at depth `x`, or `None` if it underflows.
fn continuum_panels<T: Real>(x: T, p: &PlasmaParams<T>) -> Option<Vec<T>> {
    let ext = T::lit(CUT_EXTENT);
    let lo = p.z0.re * x / T::lit(DECAY_EXPONENT);
    if lo >= ext {
        return None;
    }
    let mut pts: Vec<T> = vec![lo];
    pts.extend(CUT_GRID.iter().map(|v| T::lit(*v)).filter(|v| *v > lo));
    let omega = p.z0.im.abs() * x;
    if lo > T::zero() && omega > T::zero() {
        let (u0, u1) = (T::one() / ext, T::one() / lo);
        let du = (T::lit(4.0) * T::PI() / omega).max((u1 - u0) / T::lit(MAX_PANELS as f64));
        let mut u = u0 + du;
        while u < u1 {
            pts.push(T::one() / u);
            u = u + du;
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    pts.dedup();
    Some(pts)
}

fn decay<T: Real>(x: T, eta: Cplx<T>, p: &PlasmaParams<T>) -> Cplx<T> {
    (-(p.z0 * x) / eta).exp()
}

fn field_spec<T: Real>(coeffs: &SolutionCoefficients<T>, panels: usize) -> crate::numerics::QuadratureSpec<T> {
    qspec(1e-12, 1e-15 * coeffs.e_s.norm().as_f64(), panels + 20_000)
}

fn check_depth<T: Real>(x: T) -> Result<()> {
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!("depth must be finite and non-negative, got {x}")));
    }
    Ok(())
}

/// `e(x)` at one depth.
pub fn field_e_at<T: Real>(x: T, coeffs: &SolutionCoefficients<T>, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    check_depth(x)?;
    let at = |e: Error| Error::AtDepth { x: x.as_f64(), source: Box::new(e) };
    let mut sum = Cplx::from(T::zero());
    for (s, eta) in coeffs.a_scaled.iter().zip(&coeffs.spectrum.zeros) {
        sum = sum + s * eta * eta * decay(x, *eta, p);
    }
    if let Some(pts) = continuum_panels(x, p) {
        let spec = field_spec(coeffs, pts.len());
        let f = |eta: T| Ok(continuum_weight(eta, coeffs, p)? * decay(x, real(eta), p));
        sum = sum + integrate_fallible(f, |g| integrate_with_breakpoints(g, &pts, &spec)).map_err(at)?;
    }
    Ok(sum * p.a * p.z0 / T::PI().sqrt())
}

/// `e(x)` on a grid of depths, evaluated in parallel.
pub fn field_e<T: Real>(x_grid: &[T], coeffs: &SolutionCoefficients<T>, p: &PlasmaParams<T>) -> Result<FieldProfile<T>> {
    let e_values = x_grid.par_iter().map(|&x| field_e_at(x, coeffs, p)).collect::<Result<Vec<_>>>()?;
    Ok(FieldProfile { x_grid: x_grid.to_vec(), e_values, h_samples: Vec::new(), error_estimate: None })
}

/// `h(x, μ)`; for `μ > 0` the continuum term is a principal value plus the point term
/// `λ(μ) A(μ) e^{-z₀x/μ}`, `λ(μ)` being the principal-value (mean) boundary value.
pub fn field_h<T: Real>(x: T, mu: T, coeffs: &SolutionCoefficients<T>, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    check_depth(x)?;
    if !mu.is_finite() {
        return Err(Error::Domain(format!("non-finite mu {mu}")));
    }
    for eta in &coeffs.spectrum.zeros {
        if (mu - eta.re).abs() < T::lit(POLE_REJECTION) {
            return Err(Error::Domain(format!("mu = {mu} coincides with Re eta_k = {}", eta.re)));
        }
    }
    let at = |e: Error| Error::AtDepth { x: x.as_f64(), source: Box::new(e) };
    let mut sum = Cplx::from(T::zero());
    for (s, eta) in coeffs.a_scaled.iter().zip(&coeffs.spectrum.zeros) {
        sum = sum + s * eta * eta * eta / (eta - mu) * decay(x, *eta, p);
    }
    if let Some(pts) = continuum_panels(x, p) {
        let spec = field_spec(coeffs, pts.len());
        let (lo, hi) = (pts[0], *pts.last().expect("non-empty"));
        let g = |eta: T| Ok(continuum_weight(eta, coeffs, p)? * decay(x, real(eta), p) * eta);
        let cont = if mu > lo && mu < hi {
            integrate_fallible(g, |g| integrate_principal_value_with(g, mu, (lo, hi), &pts, &spec))
        } else {
            let h = |eta: T| Ok(g(eta)? / (eta - mu));
            integrate_fallible(h, |h| integrate_with_breakpoints(h, &pts, &spec))
        };
        sum = sum + cont.map_err(at)?;
    }
    let mut h = sum * p.a / T::PI().sqrt();
    if mu > T::zero() {
        let bv = lambda_boundary(mu, p).map_err(at)?;
        let a_mu = continuum_coefficient(mu, coeffs, p).map_err(at)?;
        h = h + bv.principal() * a_mu * decay(x, real(mu), p);
    }
    Ok(h)
}
