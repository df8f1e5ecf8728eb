//! Plasma parameters and the dispersion function
//! `λ(z) = 1 + (b - a) z² + a z² λ₀(z) = 1 + b z² + a z³ t(z)`.
//!
//! `λ` is even and sectionally analytic with the real axis as its cut. Off the axis it is
//! evaluated through the kernel of [`crate::specfun`]; on the axis through the boundary
//! values `λ±(μ) = λ(μ) ± i√π a μ³ e^{-μ²}`, `λ(μ)` being the principal-value form.

use crate::error::{Error, Result};
use crate::scalar::{cplx, is_finite, iu, real, Cplx, Real};
use crate::specfun::{self, AxisValue, Kernel};

/// Reduced inputs `γ = ω/ω_p`, `ε = ν/ω_p`, `v_c` and the derived constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmaParams<T> {
    pub gamma: T,
    pub epsilon: T,
    pub v_c: T,
    /// `1 - iγ/ε`
    pub z0: Cplx<T>,
    /// `γ v_c / ε`
    pub q: Cplx<T>,
    /// anomaly parameter `γ v_c² / ε³`
    pub alpha: Cplx<T>,
    /// `-iγ v_c² / (ε - iγ)³`
    pub a: Cplx<T>,
    /// `γ² v_c² / (ε - iγ)²`
    pub b: Cplx<T>,
    /// `b - a = v_c² γ [γε + i(1 - γ²)] / (ε - iγ)³`, free of the cancellation near γ = 1
    pub b_minus_a: Cplx<T>,
}

/// Builds [`PlasmaParams`] from the reduced inputs.
pub fn make_params<T: Real>(gamma: T, epsilon: T, v_c: T) -> Result<PlasmaParams<T>> {
    for (name, v) in [("gamma", gamma), ("epsilon", epsilon), ("v_c", v_c)] {
        if !(v > T::zero()) || !v.is_finite() {
            return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
        }
    }
    let one = T::one();
    let w = cplx(epsilon, -gamma);
    let w3 = w * w * w;
    let v2 = v_c * v_c;
    let z0 = cplx(one, -gamma / epsilon);
    let q = real(gamma * v_c / epsilon);
    let alpha = real(gamma * v2 / (epsilon * epsilon * epsilon));
    let a = cplx(T::zero(), -gamma * v2) / w3;
    let b = real(gamma * gamma * v2) / (w * w);
    let b_minus_a = cplx(gamma * epsilon, (one - gamma) * (one + gamma)) * (v2 * gamma) / w3;
    let p = PlasmaParams { gamma, epsilon, v_c, z0, q, alpha, a, b, b_minus_a };
    if ![z0, q, alpha, a, b, b_minus_a].iter().all(|z| is_finite(*z)) {
        return Err(Error::Domain(format!("parameters overflow: gamma {gamma}, epsilon {epsilon}, v_c {v_c}")));
    }
    Ok(p)
}

impl<T: Real> PlasmaParams<T> {
    /// Inverse construction from `(Q, α, z₀)`: with `g = -Im z₀ = γ/ε`,
    /// `ε = Q/√(gα)`, `γ = gε`, `v_c = Q/g`. Requires `Re z₀ = 1`, `Im z₀ < 0`, `Q, α > 0`.
    pub fn from_raw(q: T, alpha: T, z0: Cplx<T>) -> Result<Self> {
        let tol = T::lit(64.0) * T::epsilon();
        if (z0.re - T::one()).abs() > tol || !(z0.im < T::zero()) || !(q > T::zero()) || !(alpha > T::zero()) {
            return Err(Error::Domain("raw parameters need Re z0 = 1, Im z0 < 0, Q > 0, alpha > 0".into()));
        }
        let g = -z0.im;
        let epsilon = q / (g * alpha).sqrt();
        make_params(g * epsilon, epsilon, q / g)
    }

    /// Asymptotic location `ζ` of the far zeros, `(b - a) ζ² + 1 - a/2 = 0`, with `Re ζ ≥ 0`.
    pub fn asymptotic_zero(&self) -> Cplx<T> {
        let one = Cplx::from(T::one());
        let z = ((one - self.a * T::lit(0.5)) / (-self.b_minus_a)).sqrt();
        if z.re < T::zero() {
            -z
        } else {
            z
        }
    }
}

/// One-sided limits of `λ` on the cut at `μ = at`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryValues<T> {
    pub lambda_plus: Cplx<T>,
    pub lambda_minus: Cplx<T>,
    pub at: T,
}

impl<T: Real> BoundaryValues<T> {
    /// Principal-value `λ(μ) = (λ⁺ + λ⁻)/2`.
    pub fn principal(&self) -> Cplx<T> {
        (self.lambda_plus + self.lambda_minus) * T::lit(0.5)
    }
}

fn from_kernel<T: Real>(z: Cplx<T>, k: &Kernel<T>, p: &PlasmaParams<T>) -> (Cplx<T>, Cplx<T>) {
    let z2 = z * z;
    let lam = Cplx::from(T::one()) + p.b_minus_a * z2 + p.a * z2 * k.lambda0;
    let two = T::lit(2.0);
    let dlam = p.b_minus_a * z * two + p.a * (z * k.lambda0 * two + z2 * k.lambda0_prime);
    (lam, dlam)
}

fn off_axis<T: Real>(z: Cplx<T>) -> Result<()> {
    if !is_finite(z) {
        return Err(Error::Domain(format!("non-finite argument {}{:+}i", z.re, z.im)));
    }
    if z.im == T::zero() {
        return Err(Error::Domain(format!(
            "lambda is discontinuous across the real axis; use lambda_boundary at mu = {}",
            z.re
        )));
    }
    Ok(())
}

/// `λ(z)` for `z` off the real axis.
pub fn lambda<T: Real>(z: Cplx<T>, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    off_axis(z)?;
    let k = specfun::kernel(z, AxisValue::Principal)?;
    Ok(from_kernel(z, &k, p).0)
}

/// `λ'(z) = 2(b - a) z + a (2 z λ₀ + z² λ₀')`, with `λ₀' = t - 2 z λ₀`.
pub fn lambda_prime<T: Real>(z: Cplx<T>, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    off_axis(z)?;
    let k = specfun::kernel(z, AxisValue::Principal)?;
    Ok(from_kernel(z, &k, p).1)
}

/// `(λ(z), λ'(z))` off the real axis.
pub fn lambda_with_prime<T: Real>(z: Cplx<T>, p: &PlasmaParams<T>) -> Result<(Cplx<T>, Cplx<T>)> {
    off_axis(z)?;
    let k = specfun::kernel(z, AxisValue::Principal)?;
    Ok(from_kernel(z, &k, p))
}

/// Boundary values `λ±(μ)` on the cut.
pub fn lambda_boundary<T: Real>(mu: T, p: &PlasmaParams<T>) -> Result<BoundaryValues<T>> {
    let z = real(mu);
    let kp = specfun::kernel(z, AxisValue::Plus)?;
    let km = specfun::kernel(z, AxisValue::Minus)?;
    Ok(BoundaryValues { lambda_plus: from_kernel(z, &kp, p).0, lambda_minus: from_kernel(z, &km, p).0, at: mu })
}

/// Jump `1/λ⁺(μ) - 1/λ⁻(μ) = -2i√π a μ³ e^{-μ²} / (λ⁺ λ⁻)`, computed without cancellation.
pub fn inverse_jump<T: Real>(bv: &BoundaryValues<T>, p: &PlasmaParams<T>) -> Cplx<T> {
    let mu = bv.at;
    let g = mu * mu * mu * (-(mu * mu)).exp() * T::lit(2.0) * T::PI().sqrt();
    -iu::<T>() * p.a * g / (bv.lambda_plus * bv.lambda_minus)
}

/// Four-term far-field expansion
/// `(b - a) z² + (1 - a/2) - 3a/(4z²) - 15a/(8z⁴)`, valid for `|z| ≥ 8` off the axis.
pub fn lambda_asymptotic<T: Real>(z: Cplx<T>, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    if !is_finite(z) || z.norm() < T::lit(specfun::FAR_FIELD_RADIUS) {
        return Err(Error::Domain(format!("lambda_asymptotic needs |z| >= 8, got |z| = {}", z.norm())));
    }
    let z2 = z * z;
    let one = Cplx::from(T::one());
    Ok(p.b_minus_a * z2 + one - p.a * T::lit(0.5) - p.a * T::lit(0.75) / z2 - p.a * T::lit(1.875) / (z2 * z2))
}

/// `λ₀(iτ) = 1 - √π τ erfcx(τ)` for real `τ`, through `erfcx` below |τ| = 8 and the real
/// asymptotic series `-Σ_{n≥1} (-1)ⁿ (2n-1)!! / (2τ²)ⁿ` beyond, where the difference cancels.
pub fn lambda0_imaginary_axis<T: Real>(tau: T) -> Result<T> {
    let tau = tau.abs();
    if tau < T::lit(specfun::FAR_FIELD_RADIUS) {
        return Ok(T::one() - T::PI().sqrt() * tau * specfun::erfcx(tau)?);
    }
    if !tau.is_finite() {
        return Err(Error::Domain(format!("non-finite tau {tau}")));
    }
    let u = -T::one() / (T::lit(2.0) * tau * tau);
    let mut term = T::one();
    let mut sum = T::zero();
    for n in 1..200 {
        let next = term * u * T::lit((2 * n - 1) as f64);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum = sum - term;
        if term.abs() <= T::epsilon() * T::lit(0.25) * sum.abs() {
            break;
        }
    }
    Ok(sum)
}

/// `λ(iτ) = 1 - (b - a) τ² - a τ² λ₀(iτ)` for real `τ`.
pub fn lambda_imaginary_axis<T: Real>(tau: T, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    let l0 = lambda0_imaginary_axis(tau)?;
    let t2 = tau * tau;
    Ok(Cplx::from(T::one()) - p.b_minus_a * t2 - p.a * (t2 * l0))
}

/// Continuation of the upper-half-plane branch of `λ` (and `λ'`) to the whole plane.
///
/// Below the axis `t_up(z) = t(z) + 2i√π e^{-z²}`; on the axis this is `λ⁺`.
pub fn lambda_upper_continued<T: Real>(z: Cplx<T>, p: &PlasmaParams<T>) -> Result<(Cplx<T>, Cplx<T>)> {
    if !is_finite(z) {
        return Err(Error::Domain("non-finite argument".into()));
    }
    if z.im >= T::zero() {
        let k = specfun::kernel(z, AxisValue::Plus)?;
        return Ok(from_kernel(z, &k, p));
    }
    let k = specfun::kernel(z, AxisValue::Principal)?;
    let t = k.t + iu::<T>() * (-(z * z)).exp() * (T::lit(2.0) * T::PI().sqrt());
    let lambda0 = Cplx::from(T::one()) + z * t;
    let kc = Kernel { t, lambda0, lambda0_prime: t - z * lambda0 * T::lit(2.0) };
    Ok(from_kernel(z, &kc, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Cplx<f64>;

    fn base() -> PlasmaParams<f64> {
        make_params(1e-3, 1e-3, 1e-3).unwrap()
    }

    fn rel(a: C, b: C) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn make_params_examples() {
        let p = make_params(0.3, 0.3, 2.0).unwrap();
        assert_eq!(p.z0, C::new(1.0, -1.0));
        let p = base();
        assert!((p.q - C::from(1e-3)).norm() < 1e-18);
        assert!((p.alpha - C::from(1.0)).norm() < 1e-14);
        assert!((p.b * p.z0 * p.z0 - p.q * p.q).norm() < 1e-14 * p.q.norm_sqr());
        assert!(make_params(0.0, 1.0, 1.0).is_err());
        assert!(make_params(1.0, -1.0, 1.0).is_err());
        assert!(make_params(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn raw_round_trip() {
        let p = make_params(0.7, 2e-3, 5e-3).unwrap();
        let r: PlasmaParams<f64> = PlasmaParams::from_raw(p.q.re, p.alpha.re, p.z0).unwrap();
        assert!(((r.gamma - 0.7) / 0.7).abs() < 1e-14);
        assert!(((r.epsilon - 2e-3) / 2e-3).abs() < 1e-14);
        assert!(((r.v_c - 5e-3) / 5e-3).abs() < 1e-14);
        assert!(PlasmaParams::from_raw(1.0, 1.0, C::new(2.0, -1.0)).is_err());
    }

    #[test]
    fn b_minus_a_closed_form_matches_difference() {
        for &g in &[1e-3f64, 0.5, 0.999, 1.0, 1.001, 2.0] {
            let p = make_params(g, 1e-3, 1e-3).unwrap();
            let d = p.b - p.a;
            assert!((p.b_minus_a - d).norm() <= 1e-12 * p.a.norm().max(p.b.norm()));
        }
    }

    #[test]
    fn lambda_examples() {
        let p = base();
        let z = C::new(0.0, 1e-8);
        assert!((lambda(z, &p).unwrap() - 1.0).norm() < 1e-12);
        let tau = 1.0;
        let direct = lambda(C::new(0.0, tau), &p).unwrap();
        let via_erfcx = C::from(1.0) - (p.b - p.a) * tau * tau
            - p.a * tau * tau * (1.0 - std::f64::consts::PI.sqrt() * tau * specfun::erfcx(tau).unwrap());
        assert!(rel(direct, via_erfcx) < 1e-13);
        assert!(matches!(lambda(C::new(0.5, 0.0), &p), Err(Error::Domain(_))));
        assert!(lambda_prime(C::new(0.5, 0.0), &p).is_err());
    }

    #[test]
    fn lambda_boundary_examples() {
        let p = base();
        let bv = lambda_boundary(0.0, &p).unwrap();
        assert_eq!(bv.lambda_plus, C::from(1.0));
        assert_eq!(bv.lambda_minus, C::from(1.0));
        let bv = lambda_boundary(1.0, &p).unwrap();
        let jump = C::new(0.0, 2.0 * std::f64::consts::PI.sqrt()) * p.a * (-1.0f64).exp();
        assert!(rel(bv.lambda_plus - bv.lambda_minus, jump) < 1e-14);
        let mu = 0.7;
        let bv = lambda_boundary(mu, &p).unwrap();
        let above = lambda(C::new(mu, 1e-7), &p).unwrap();
        let below = lambda(C::new(mu, -1e-7), &p).unwrap();
        assert!((above - bv.lambda_plus).norm() < 1e-5);
        assert!((below - bv.lambda_minus).norm() < 1e-5);
    }

    #[test]
    fn inverse_jump_matches_difference() {
        let p = make_params(0.5, 1e-3, 1e-3).unwrap();
        for &mu in &[0.2, 1.0, 2.5] {
            let bv = lambda_boundary(mu, &p).unwrap();
            let d = bv.lambda_plus.inv() - bv.lambda_minus.inv();
            // the direct difference is only good to roundoff in 1/λ
            assert!((inverse_jump(&bv, &p) - d).norm() < 1e-14 * bv.lambda_plus.inv().norm());
        }
    }

    #[test]
    fn lambda_prime_examples() {
        let p = base();
        assert!(lambda_prime(C::new(0.0, 1e-8), &p).unwrap().norm() < 1e-6);
        let z = C::new(0.5, 0.5);
        let h = 1e-6;
        let fd = (lambda(z + h, &p).unwrap() - lambda(z - h, &p).unwrap()) / (2.0 * h);
        let d = lambda_prime(z, &p).unwrap();
        assert!(rel(fd, d) < 1e-6);
    }

    #[test]
    fn lambda_asymptotic_examples() {
        let p = base();
        let z10 = C::new(0.0, 10.0);
        let z20 = C::new(0.0, 20.0);
        let l10 = lambda(z10, &p).unwrap();
        let l20 = lambda(z20, &p).unwrap();
        let d10 = (l10 - lambda_asymptotic(z10, &p).unwrap()).norm();
        let d20 = (l20 - lambda_asymptotic(z20, &p).unwrap()).norm();
        assert!(d10 / l10.norm() < 1e-6);
        let ratio = d10 / d20;
        assert!(ratio > 64.0 / 3.0 && ratio < 64.0 * 3.0, "ratio {ratio}");
        let z = C::new(0.0, 100.0);
        let lead = p.b_minus_a * z * z;
        assert!((lambda(z, &p).unwrap() / lead - 1.0).norm() < 1e-3);
        assert!(lambda_asymptotic(C::new(3.0, 1.0), &p).is_err());
    }

    #[test]
    fn imaginary_axis_form_is_accurate_far_out() {
        // near γ = 1 the far-field λ(iτ) is a small difference of large terms
        let p = make_params(1.0, 1e-3, 1e-3).unwrap();
        for &tau in &[0.5, 7.9, 8.1, 100.0, 3e4, 1e6] {
            let a = lambda_imaginary_axis(tau, &p).unwrap();
            let b = lambda(C::new(0.0, tau), &p).unwrap();
            assert!(rel(a, b) < 1e-12, "τ {tau}: {a} vs {b}");
        }
    }

    #[test]
    fn continuation_is_smooth_across_the_axis() {
        let p = make_params(1.3, 1e-3, 1e-3).unwrap();
        for &x in &[0.4, 2.0, 30.0] {
            let (up, dup) = lambda_upper_continued(C::new(x, 1e-9), &p).unwrap();
            let (dn, ddn) = lambda_upper_continued(C::new(x, -1e-9), &p).unwrap();
            assert!((up - dn).norm() < 1e-7 * (1.0 + up.norm()));
            assert!((dup - ddn).norm() < 1e-6 * (1.0 + dup.norm()));
            let bv = lambda_boundary(x, &p).unwrap();
            let (on, _) = lambda_upper_continued(C::new(x, 0.0), &p).unwrap();
            assert_eq!(on, bv.lambda_plus);
        }
        let z = C::new(1.2, -0.8);
        let h = 1e-4;
        let fd = (lambda_upper_continued(z + h, &p).unwrap().0 - lambda_upper_continued(z - h, &p).unwrap().0) / (2.0 * h);
        let exact = lambda_upper_continued(z, &p).unwrap().1;
        // |λ'| ~ 1e-5 here while |λ| ~ 1: compare against the roundoff scale of λ
        assert!((fd - exact).norm() < 1e-10, "{fd} vs {exact}");
    }

    proptest! {
        #[test]
        fn construction_identities(g in 1e-3f64..3.0, e in 1e-4f64..1.0, v in 1e-4f64..1.0) {
            let p = make_params(g, e, v).unwrap();
            let z03 = p.z0 * p.z0 * p.z0;
            prop_assert!((p.a * z03 + C::i() * p.alpha).norm() < 1e-14 * p.alpha.norm());
            prop_assert!((p.b * p.z0 * p.z0 - p.q * p.q).norm() < 1e-14 * p.q.norm_sqr());
            prop_assert_eq!(p.z0.re, 1.0);
        }

        #[test]
        fn imaginary_axis_formula(tau in -50.0f64..50.0, g in 0.01f64..2.0) {
            prop_assume!(tau.abs() > 1e-9);
            let p = make_params(g, 1e-3, 1e-3).unwrap();
            let l = lambda(C::new(0.0, tau), &p).unwrap();
            let t2 = tau * tau;
            let l0 = 1.0 - std::f64::consts::PI.sqrt() * tau.abs() * specfun::erfcx(tau.abs()).unwrap();
            let f = C::from(1.0) - p.b_minus_a * t2 - p.a * t2 * l0;
            // the erfcx difference itself loses ~τ² relative digits at large τ
            prop_assert!((l - f).norm() < 1e-12 * l.norm() * (1.0 + t2 * 1e-2));
        }

        #[test]
        fn evenness(x in -15.0f64..15.0, y in 0.01f64..15.0, g in 0.01f64..2.0) {
            let p = make_params(g, 1e-3, 1e-3).unwrap();
            let z = C::new(x, y);
            let l = lambda(z, &p).unwrap();
            prop_assert!((l - lambda(-z, &p).unwrap()).norm() < 1e-12 * l.norm());
            let d = lambda_prime(z, &p).unwrap();
            prop_assert!((d + lambda_prime(-z, &p).unwrap()).norm() < 1e-12 * d.norm());
        }

        #[test]
        fn sokhotskii_limit(mu in -3.0f64..3.0) {
            let p = base();
            let bv = lambda_boundary(mu, &p).unwrap();
            let above = lambda(C::new(mu, 1e-8), &p).unwrap();
            prop_assert!((above - bv.lambda_plus).norm() < 1e-6);
        }
    }
}
