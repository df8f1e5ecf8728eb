//! Analytic solution of the half-space problem: the integral `J`, the expansion coefficients
//! `C₁`, `A_k`, `A(η)`, the field profiles and the surface impedance.
//!
//! With the boundary amplitude `e_s` (1 unless a caller scales it):
//!
//! * `J = (1/π) ∫₀^∞ dτ / λ(iτ)`, `C₁ = e_s / (a z₀ J)`
//! * `A_k e^{-η_k²} = -√π C₁ / (η_k² λ'(η_k))`
//! * `A(η) = C₁ e^{η²} [1/λ⁺ - 1/λ⁻] / (2√π i η²) = -C₁ a η / (λ⁺ λ⁻)`
//! * `e'(0) = -a z₀² C₁ / 2 = -z₀ e_s / (2J)`

mod fields;
mod identities;

pub use fields::{field_e, field_e_at, field_h, FieldProfile};
pub use identities::{
    boundary_field_residual, check_residue_identity, check_residue_identity_with, jump_integral_residual,
    surface_derivative_by_quadrature,
};

use crate::dispersion::{lambda, lambda_boundary, lambda_imaginary_axis, PlasmaParams};
use crate::error::{Error, Result};
use crate::numerics::{integrate_fallible, integrate_semi_infinite_split, QuadratureSpec};
use crate::scalar::{cplx, is_finite, iu, Cplx, Real};
use crate::spectrum::{analyze, SpectrumInfo, CONTOUR_FLOOR};
use crate::specfun::p_func;

/// `|λ(iτ)|` below this is treated as a pole of the `J` integrand.
pub const J_POLE_GUARD: f64 = 1e-12;

/// Quadrature spec with f64-calibrated tolerances widened for coarser scalars.
pub(crate) fn qspec<T: Real>(rel: f64, abs: f64, max_subdivisions: usize) -> QuadratureSpec<T> {
    let widen = T::eps_ratio().max(T::one());
    QuadratureSpec { rel_tol: T::lit(rel) * widen, abs_tol: T::lit(abs) * widen, max_subdivisions }
}

/// `J`, `C₁`, the discrete weights and the spectrum they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionCoefficients<T> {
    pub j: Cplx<T>,
    pub c1: Cplx<T>,
    /// `A_k e^{-η_k²}`, in the order of `spectrum.zeros`. The bare `A_k` overflows once
    /// `Re η_k² ≳ 700`, which happens near the resonance; see [`Self::a_discrete`].
    pub a_scaled: Vec<Cplx<T>>,
    pub spectrum: SpectrumInfo<T>,
    /// boundary amplitude `e(0)`
    pub e_s: Cplx<T>,
}

impl<T: Real> SolutionCoefficients<T> {
    /// Unscaled `A_k`; entries may be infinite.
    pub fn a_discrete(&self) -> Vec<Cplx<T>> {
        self.a_scaled.iter().zip(&self.spectrum.zeros).map(|(s, eta)| s * (eta * eta).exp()).collect()
    }

    /// `C₁` recovered from each pole-elimination condition `C₁ = -(1/√π) A_k η_k² e^{-η_k²} λ'(η_k)`.
    pub fn pole_conditions(&self) -> Vec<Cplx<T>> {
        let sp = T::PI().sqrt();
        self.a_scaled
            .iter()
            .zip(&self.spectrum.zeros)
            .zip(&self.spectrum.lambda_prime_at_zeros)
            .map(|((s, eta), d)| -(s * eta * eta * d) / sp)
            .collect()
    }

    /// Relative spread of the two pole conditions when there are two zero pairs.
    pub fn pole_condition_spread(&self) -> Option<T> {
        match self.pole_conditions().as_slice() {
            [c0, c1] => Some((c0 - c1).norm() / c0.norm().max(c1.norm())),
            _ => None,
        }
    }
}

/// `Z = R Z₀`; `Z` in Gaussian units given the speed of light `c` in the caller's units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpedanceResult<T> {
    pub z: Cplx<T>,
    /// normal-skin magnitude
    pub r: T,
    /// dimensionless impedance
    pub z0: Cplx<T>,
}

/// Position and half-width of the near-pole of `1/λ(iτ)` at `τ² = (1 - a/2)/(b - a)`.
fn near_pole<T: Real>(p: &PlasmaParams<T>) -> Option<(T, T)> {
    let s = ((Cplx::from(T::one()) - p.a * T::lit(0.5)) / p.b_minus_a).sqrt();
    if !is_finite(s) {
        return None;
    }
    Some((s.re.abs(), s.im.abs()))
}

fn j_breakpoints<T: Real>(p: &PlasmaParams<T>) -> Vec<T> {
    let mut pts: Vec<T> = [0.5, 1.0, 2.0, 4.0, 8.0].iter().map(|v| T::lit(*v)).collect();
    let mut end = T::lit(16.0);
    if let Some((tr, w)) = near_pole(p) {
        let mut g = T::lit(8.0);
        while g < tr {
            pts.push(g);
            g = g * T::lit(4.0);
        }
        for k in [-100.0, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 100.0] {
            pts.push(tr + w * T::lit(k));
        }
        end = end.max(tr * T::lit(3.0));
    }
    pts.retain(|x| x.is_finite() && *x > T::zero() && *x < end);
    pts.push(end);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    pts.dedup();
    pts
}

fn guarded<T: Real>(l: Cplx<T>, tau: T) -> Result<Cplx<T>> {
    if !is_finite(l) || l.norm() < T::lit(J_POLE_GUARD) {
        return Err(Error::Degenerate(format!("lambda(i tau) vanishes near tau = {tau}")));
    }
    Ok(l.inv())
}

fn j_half_axis<T, F>(p: &PlasmaParams<T>, inv_lambda: F) -> Result<Cplx<T>>
where
    T: Real,
    F: Fn(T) -> Result<Cplx<T>>,
{
    let spec = qspec(1e-13, 0.0, 20_000);
    let bps = j_breakpoints(p);
    let v = integrate_fallible(inv_lambda, |g| integrate_semi_infinite_split(g, &bps, &spec))?;
    Ok(v / T::PI())
}

/// `J = (1/π) ∫₀^∞ dτ / λ(iτ)` with `λ(iτ)` in its real closed form through `erfcx`.
pub fn compute_j<T: Real>(p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    j_half_axis(p, |tau| guarded(lambda_imaginary_axis(tau, p)?, tau))
}

fn lambda_on_imaginary_axis_complex<T: Real>(tau: T, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    if tau == T::zero() {
        return Ok(Cplx::from(T::one()));
    }
    lambda(cplx(T::zero(), tau), p)
}

/// `J` through the complex kernel, without the `erfcx` specialization.
pub fn compute_j_complex<T: Real>(p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    j_half_axis(p, |tau| guarded(lambda_on_imaginary_axis_complex(tau, p)?, tau))
}

/// `J = (1/2π) ∫_{-∞}^{∞} dτ / λ(iτ)` over the whole axis, the lower half through the
/// lower-half-plane kernel.
pub fn compute_j_full_axis<T: Real>(p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    let upper = j_half_axis(p, |tau| guarded(lambda_on_imaginary_axis_complex(tau, p)?, tau))?;
    let lower = j_half_axis(p, |tau| guarded(lambda_on_imaginary_axis_complex(-tau, p)?, -tau))?;
    Ok((upper + lower) * T::lit(0.5))
}

/// `J` from the reduced integrand
/// `W³ / [W³ - W γ² v_c² τ² + i γ v_c² p(iτ)]`, `W = ε - iγ`, `p(z) = -z³ t(z)`.
pub fn compute_j_reduced<T: Real>(p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    let w = cplx(p.epsilon, -p.gamma);
    let w3 = w * w * w;
    let gv2 = p.gamma * p.v_c * p.v_c;
    j_half_axis(p, |tau| {
        let pz = p_func(cplx(T::zero(), tau))?;
        let den = w3 - w * (gv2 * p.gamma * tau * tau) + iu::<T>() * pz * gv2;
        guarded(den / w3, tau)
    })
}

fn check_j<T: Real>(j: Cplx<T>) -> Result<Cplx<T>> {
    if !is_finite(j) || j.norm() < T::min_positive_value().sqrt() {
        return Err(Error::Degenerate(format!("J = {}{:+}i", j.re, j.im)));
    }
    Ok(j)
}

/// Coefficients with `e(0) = 1`.
pub fn compute_coefficients<T: Real>(p: &PlasmaParams<T>) -> Result<SolutionCoefficients<T>> {
    compute_coefficients_with(p, Cplx::from(T::one()))
}

/// Coefficients for boundary amplitude `e_s`; every field scales linearly with it.
pub fn compute_coefficients_with<T: Real>(p: &PlasmaParams<T>, e_s: Cplx<T>) -> Result<SolutionCoefficients<T>> {
    let spectrum = analyze(p)?;
    let j = compute_j(p)?;
    assemble_coefficients(p, spectrum, j, e_s)
}

/// Coefficients from an already computed spectrum and `J`.
pub fn assemble_coefficients<T: Real>(
    p: &PlasmaParams<T>,
    spectrum: SpectrumInfo<T>,
    j: Cplx<T>,
    e_s: Cplx<T>,
) -> Result<SolutionCoefficients<T>> {
    let j = check_j(j)?;
    let c1 = e_s / (p.a * p.z0 * j);
    let sp = T::PI().sqrt();
    let a_scaled = spectrum
        .zeros
        .iter()
        .zip(&spectrum.lambda_prime_at_zeros)
        .map(|(eta, d)| -(c1 * sp) / (eta * eta * d))
        .collect();
    Ok(SolutionCoefficients { j, c1, a_scaled, spectrum, e_s })
}

/// Continuum coefficient `A(η) = -C₁ a η / (λ⁺ λ⁻)`, odd in `η` and finite at 0.
pub fn continuum_coefficient<T: Real>(eta: T, coeffs: &SolutionCoefficients<T>, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    if !eta.is_finite() {
        return Err(Error::Domain(format!("non-finite eta {eta}")));
    }
    if eta == T::zero() {
        return Ok(Cplx::from(T::zero()));
    }
    let bv = lambda_boundary(eta, p)?;
    let m = bv.lambda_plus.norm().min(bv.lambda_minus.norm());
    if m < T::lit(CONTOUR_FLOOR) {
        return Err(Error::SpectralBoundary { mu: eta.as_f64(), magnitude: m.as_f64() });
    }
    Ok(-(coeffs.c1 * p.a * eta) / (bv.lambda_plus * bv.lambda_minus))
}

/// `η² e^{-η²} A(η)`, the continuum weight entering the field expansions.
pub fn continuum_weight<T: Real>(eta: T, coeffs: &SolutionCoefficients<T>, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    let a = continuum_coefficient(eta, coeffs, p)?;
    Ok(a * (eta * eta * (-(eta * eta)).exp()))
}

/// `e'(0) = -a z₀² C₁ / 2`.
pub fn surface_derivative<T: Real>(coeffs: &SolutionCoefficients<T>, p: &PlasmaParams<T>) -> Cplx<T> {
    -(p.a * p.z0 * p.z0 * coeffs.c1) * T::lit(0.5)
}

fn normal_skin<T: Real>(p: &PlasmaParams<T>, c: T) -> T {
    T::lit(2.0) * T::SQRT_2() * T::PI() * p.q.re / (c * p.alpha.re.sqrt())
}

/// `Z = -8πi Q J / (c z₀)`, split as `R = 2√2 π Q / (c √α)`, `Z₀ = -2√2 i √α J / z₀`.
pub fn impedance_from_j<T: Real>(p: &PlasmaParams<T>, j: Cplx<T>, c: T) -> Result<ImpedanceResult<T>> {
    let j = check_j(j)?;
    if !(c > T::zero()) || !c.is_finite() {
        return Err(Error::Domain(format!("speed of light must be positive, got {c}")));
    }
    let r = normal_skin(p, c);
    let z0 = -(iu::<T>() * j * (T::lit(2.0) * T::SQRT_2() * p.alpha.re.sqrt())) / p.z0;
    Ok(ImpedanceResult { z: z0 * r, r, z0 })
}

/// `Z = 4πi Q / (c e'(0))` from the surface derivative of a unit boundary field.
pub fn impedance_from_eprime<T: Real>(p: &PlasmaParams<T>, eprime: Cplx<T>, c: T) -> Result<ImpedanceResult<T>> {
    if !is_finite(eprime) || eprime.norm() == T::zero() {
        return Err(Error::Degenerate(format!("e'(0) = {}{:+}i", eprime.re, eprime.im)));
    }
    if !(c > T::zero()) || !c.is_finite() {
        return Err(Error::Domain(format!("speed of light must be positive, got {c}")));
    }
    let r = normal_skin(p, c);
    let z0 = iu::<T>() * (T::SQRT_2() * p.alpha.re.sqrt()) / eprime;
    Ok(ImpedanceResult { z: z0 * r, r, z0 })
}

/// Surface impedance with `c = 1`.
pub fn impedance<T: Real>(p: &PlasmaParams<T>) -> Result<ImpedanceResult<T>> {
    impedance_with_c(p, T::one())
}

pub fn impedance_with_c<T: Real>(p: &PlasmaParams<T>, c: T) -> Result<ImpedanceResult<T>> {
    impedance_from_j(p, compute_j(p)?, c)
}

/// Impedance evaluated through [`compute_j_reduced`].
pub fn impedance_reduced<T: Real>(p: &PlasmaParams<T>) -> Result<ImpedanceResult<T>> {
    impedance_from_j(p, compute_j_reduced(p)?, T::one())
}
