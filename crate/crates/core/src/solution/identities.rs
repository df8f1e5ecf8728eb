//! Numerical checks of the integral identities the coefficients satisfy. Each returns a
//! relative residual; the continuum integrals are independent quadratures of the jump
//! `1/λ⁺ - 1/λ⁻`.

use super::{continuum_weight, qspec, SolutionCoefficients};
use crate::dispersion::{inverse_jump, lambda, lambda_boundary, PlasmaParams};
use crate::error::{Error, Result};
use crate::numerics::{integrate_fallible, integrate_with_breakpoints, QuadratureSpec};
use crate::scalar::{cplx, Cplx, Real};
use crate::spectrum::CUT_EXTENT;

const HALF_GRID: [f64; 15] = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0];

fn half_grid<T: Real>() -> Vec<T> {
    HALF_GRID.iter().map(|v| T::lit(*v)).collect()
}

fn full_grid<T: Real>() -> Vec<T> {
    let mut g: Vec<T> = HALF_GRID.iter().rev().map(|v| -T::lit(*v)).collect();
    g.extend(HALF_GRID.iter().skip(1).map(|v| T::lit(*v)));
    g
}

fn default_spec<T: Real>() -> QuadratureSpec<T> {
    qspec(1e-13, 0.0, 20_000)
}

fn jump<T: Real>(eta: T, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    Ok(inverse_jump(&lambda_boundary(eta, p)?, p))
}

fn two_pi_i<T: Real>() -> Cplx<T> {
    cplx(T::zero(), T::TAU())
}

fn relative<T: Real>(lhs: Cplx<T>, rhs: Cplx<T>) -> T {
    (lhs - rhs).norm() / rhs.norm()
}

/// Reconstruction of the boundary amplitude,
/// `(1/√π) [Σ A_k η_k² e^{-η_k²} + ∫₀^∞ η² e^{-η²} A(η) dη] = e_s/(a z₀)`.
pub fn boundary_field_residual<T: Real>(coeffs: &SolutionCoefficients<T>, p: &PlasmaParams<T>) -> Result<T> {
    let disc = coeffs.a_scaled.iter().zip(&coeffs.spectrum.zeros).fold(Cplx::from(T::zero()), |acc, (s, eta)| acc + s * eta * eta);
    let spec = default_spec();
    let cont = integrate_fallible(|eta| continuum_weight(eta, coeffs, p), |g| integrate_with_breakpoints(g, &half_grid(), &spec))?;
    let lhs = (disc + cont) / T::PI().sqrt();
    Ok(relative(lhs, coeffs.e_s / (p.a * p.z0)))
}

/// `-Σ 1/λ'(η_k) + (1/2πi) ∫₀^∞ [1/λ⁺ - 1/λ⁻] dη = e_s/(a z₀ C₁)`.
pub fn jump_integral_residual<T: Real>(coeffs: &SolutionCoefficients<T>, p: &PlasmaParams<T>) -> Result<T> {
    let disc = coeffs.spectrum.lambda_prime_at_zeros.iter().fold(Cplx::from(T::zero()), |acc, d| acc - d.inv());
    let spec = default_spec();
    let cont = integrate_fallible(|eta| jump(eta, p), |g| integrate_with_breakpoints(g, &half_grid(), &spec))?;
    let lhs = disc + cont / two_pi_i::<T>();
    Ok(relative(lhs, coeffs.e_s / (p.a * p.z0 * coeffs.c1)))
}

/// Residue representation of `1/λ(z)` off the real axis,
/// `1/λ(z) = (1/2πi) ∫ [1/λ⁺ - 1/λ⁻] dη/(η - z) - Σ 2η_k / ((η_k² - z²) λ'(η_k))`.
/// A missed zero shows up as an O(1) residual.
pub fn check_residue_identity<T: Real>(z: Cplx<T>, coeffs: &SolutionCoefficients<T>, p: &PlasmaParams<T>) -> Result<T> {
    check_residue_identity_with(z, coeffs, p, &default_spec())
}

/// As [`check_residue_identity`] with an explicit quadrature spec.
pub fn check_residue_identity_with<T: Real>(
    z: Cplx<T>,
    coeffs: &SolutionCoefficients<T>,
    p: &PlasmaParams<T>,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    if z.im == T::zero() {
        return Err(Error::Domain("residue identity needs z off the real axis".into()));
    }
    let lhs = lambda(z, p)?.inv();
    let mut grid = full_grid::<T>();
    // keep a panel boundary under z when it sits close to the axis
    if z.re.abs() < T::lit(CUT_EXTENT) && !grid.contains(&z.re) {
        grid.push(z.re);
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    }
    let cont = integrate_fallible(|eta| Ok(jump(eta, p)? / (Cplx::from(eta) - z)), |g| integrate_with_breakpoints(g, &grid, spec))?;
    let mut rhs = cont / two_pi_i::<T>();
    for (eta, d) in coeffs.spectrum.zeros.iter().zip(&coeffs.spectrum.lambda_prime_at_zeros) {
        rhs = rhs - eta * T::lit(2.0) / ((eta * eta - z * z) * d);
    }
    Ok(relative(rhs, lhs))
}

/// `e'(0) = a z₀² C₁ [Σ 1/(η_k λ'(η_k)) - (1/2πi) ∫₀^∞ [1/λ⁺ - 1/λ⁻] dη/η]` by direct
/// quadrature; the bracket equals `-1/2`, giving [`super::surface_derivative`].
pub fn surface_derivative_by_quadrature<T: Real>(coeffs: &SolutionCoefficients<T>, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    let disc = coeffs
        .spectrum
        .zeros
        .iter()
        .zip(&coeffs.spectrum.lambda_prime_at_zeros)
        .fold(Cplx::from(T::zero()), |acc, (eta, d)| acc + (eta * d).inv());
    let spec = default_spec();
    let f = |eta: T| if eta == T::zero() { Ok(Cplx::from(T::zero())) } else { Ok(jump(eta, p)? / eta) };
    let cont = integrate_fallible(f, |g| integrate_with_breakpoints(g, &half_grid(), &spec))?;
    Ok(p.a * p.z0 * p.z0 * coeffs.c1 * (disc - cont / two_pi_i::<T>()))
}
