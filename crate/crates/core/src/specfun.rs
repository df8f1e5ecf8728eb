//! Gaussian Hilbert transform and the functions built from it.
//!
//! `t(z) = (1/√π) ∫ e^{-μ²}/(μ - z) dμ` is sectionally analytic with the whole real axis as
//! its cut. Above the axis `t(z) = i√π w(z)` with `w` the Faddeeva function, below it
//! `t(z) = -t(-z) = conj(t(conj z))`. On the axis the principal value is `t(μ) = -2 F(μ)`,
//! `F` being Dawson's integral, and the one-sided limits are `t±(μ) = -2F(μ) ± i√π e^{-μ²}`.
//!
//! Evaluation regions in the closed upper half plane:
//!
//! | region                              | method                                   |
//! |-------------------------------------|------------------------------------------|
//! | `|z| < 1`                           | Taylor series of `F`                     |
//! | `1 ≤ |z| < 8`, `Im z ≤ 1.5`         | Rybicki's exponentially convergent sum   |
//! | `1 ≤ |z| < 8`, `Im z > 1.5`         | Laplace continued fraction (Lentz)       |
//! | `|z| ≥ 8`                           | asymptotic series in `1/z²`              |
//!
//! The far-field series carries no exponentially small term off the axis and its optimal
//! truncation error at `|z| = 8` is below `e^{-64}`, so it also yields `λ₀` and `λ₀'` without
//! the cancellation that `1 + z t(z)` suffers at large `|z|`.

use crate::error::{Error, Result};
use crate::scalar::{cplx, is_finite, iu, real, Cplx, Real};

/// Radius beyond which the asymptotic series is used.
pub const FAR_FIELD_RADIUS: f64 = 8.0;
const TAYLOR_RADIUS: f64 = 1.0;
const RYBICKI_MAX_IM: f64 = 1.5;
const RYBICKI_STEP: f64 = 0.2;
const RYBICKI_HALF_WIDTH: i64 = 41;
const MAX_CF_TERMS: usize = 10_000;

/// `t`, `λ₀ = 1 + z t` and `λ₀' = t - 2 z λ₀` evaluated together.
#[derive(Debug, Clone, Copy)]
pub struct Kernel<T> {
    pub t: Cplx<T>,
    pub lambda0: Cplx<T>,
    pub lambda0_prime: Cplx<T>,
}

impl<T: Real> Kernel<T> {
    fn from_t(z: Cplx<T>, t: Cplx<T>) -> Self {
        let lambda0 = Cplx::from(T::one()) + z * t;
        let two = T::lit(2.0);
        Kernel { t, lambda0, lambda0_prime: t - z * lambda0 * two }
    }

    fn reflect(self) -> Self {
        // t odd, λ₀ even, λ₀' odd under z -> -z
        Kernel { t: -self.t, lambda0: self.lambda0, lambda0_prime: -self.lambda0_prime }
    }
}

/// Which value to return for a real argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisValue {
    Principal,
    Plus,
    Minus,
}

fn check_finite<T: Real>(z: Cplx<T>) -> Result<()> {
    if is_finite(z) {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite argument {}{:+}i", z.re, z.im)))
    }
}

fn sqrt_pi<T: Real>() -> T {
    T::PI().sqrt()
}

/// Taylor series of Dawson's integral, `F(z) = Σ (-2z²)ⁿ z / (2n+1)!!`.
fn dawson_taylor<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let m2z2 = -(z * z) * T::lit(2.0);
    let mut term = z;
    let mut sum = z;
    for n in 0..200 {
        term = term * m2z2 / T::lit((2 * n + 3) as f64);
        sum = sum + term;
        if term.norm() <= T::epsilon() * T::lit(0.25) * sum.norm() {
            break;
        }
    }
    sum
}

/// Rybicki: `F(z) ≈ (1/√π) Σ_{n odd} e^{-(z - n h)²} / n`, error `~ exp(π Im z / h - (π / 2h)²)`.
fn dawson_rybicki<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let h = T::lit(RYBICKI_STEP);
    let center = (z.re / h).round().to_i64().unwrap_or(0);
    let mut sum = Cplx::from(T::zero());
    for n in (center - RYBICKI_HALF_WIDTH)..=(center + RYBICKI_HALF_WIDTH) {
        if n % 2 == 0 {
            continue;
        }
        let nf = T::lit(n as f64);
        let d = z - real(nf * h);
        sum = sum + (-(d * d)).exp() / nf;
    }
    sum / sqrt_pi::<T>()
}

fn dawson_complex<T: Real>(z: Cplx<T>) -> Cplx<T> {
    if z.norm() < T::lit(TAYLOR_RADIUS) {
        dawson_taylor(z)
    } else {
        dawson_rybicki(z)
    }
}

/// Laplace continued fraction `z - (1/2)/(z - 1/(z - (3/2)/(z - …)))`, modified Lentz.
fn laplace_fraction<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let tiny = T::lit(1e-300).max(T::min_positive_value());
    let guard = |v: Cplx<T>| if v.norm() == T::zero() { real(tiny) } else { v };
    let mut f = guard(z);
    let mut c = f;
    let mut d = Cplx::from(T::zero());
    for j in 1..MAX_CF_TERMS {
        let a = -T::lit(j as f64 * 0.5);
        d = guard(z + d * a);
        c = guard(z + real(a) / c);
        d = d.inv();
        let delta = c * d;
        f = f * delta;
        if (delta - Cplx::from(T::one())).norm() <= T::epsilon() {
            break;
        }
    }
    f
}

/// Asymptotic expansion: `t = -(1/z) Σ (2n-1)!! uⁿ`, `λ₀ = -Σ_{n≥1} (2n-1)!! uⁿ`,
/// `λ₀' = (1/z) Σ_{n≥1} 2n (2n-1)!! uⁿ`, `u = 1/(2z²)`.
fn far_field<T: Real>(z: Cplx<T>) -> Kernel<T> {
    let u = (z * z * T::lit(2.0)).inv();
    let mut a = Cplx::from(T::one());
    let mut s0 = a;
    let mut s1 = Cplx::from(T::zero());
    let mut s2 = Cplx::from(T::zero());
    let quarter_eps = T::epsilon() * T::lit(0.25);
    for n in 1..400 {
        let next = a * u * T::lit((2 * n - 1) as f64);
        if next.norm() > a.norm() {
            break;
        }
        a = next;
        s0 = s0 + a;
        s1 = s1 + a;
        s2 = s2 + a * T::lit((2 * n) as f64);
        if a.norm() <= quarter_eps * s1.norm() {
            break;
        }
    }
    let zi = z.inv();
    Kernel { t: -s0 * zi, lambda0: -s1, lambda0_prime: s2 * zi }
}

/// Kernel in the closed upper half plane; on the axis `t` is the principal value.
fn kernel_upper<T: Real>(z: Cplx<T>) -> Kernel<T> {
    if z.norm() >= T::lit(FAR_FIELD_RADIUS) {
        far_field(z)
    } else {
        near_field(z)
    }
}

fn near_field<T: Real>(z: Cplx<T>) -> Kernel<T> {
    let r = z.norm();
    let sp = sqrt_pi::<T>();
    if z.im == T::zero() {
        let t = dawson_complex(z) * T::lit(-2.0);
        return Kernel::from_t(z, cplx(t.re, T::zero()));
    }
    let t = if r < T::lit(TAYLOR_RADIUS) || z.im <= T::lit(RYBICKI_MAX_IM) {
        // t = i√π w,  w = e^{-z²} + (2i/√π) F(z)
        let w = (-(z * z)).exp() + iu::<T>() * dawson_complex(z) * (T::lit(2.0) / sp);
        iu::<T>() * w * sp
    } else {
        -laplace_fraction(z).inv()
    };
    Kernel::from_t(z, t)
}

/// `t`, `λ₀`, `λ₀'` for any argument. Real arguments take the requested axis value.
pub fn kernel<T: Real>(z: Cplx<T>, axis: AxisValue) -> Result<Kernel<T>> {
    check_finite(z)?;
    if z.im > T::zero() {
        return Ok(kernel_upper(z));
    }
    if z.im < T::zero() {
        return Ok(kernel_upper(-z).reflect());
    }
    let k = kernel_upper(z);
    if axis == AxisValue::Principal {
        return Ok(k);
    }
    let sign = if axis == AxisValue::Plus { T::one() } else { -T::one() };
    let jump = iu::<T>() * sqrt_pi::<T>() * (-(z.re * z.re)).exp() * sign;
    Ok(Kernel::from_t(z, k.t + jump))
}

/// Gaussian Hilbert transform `t(z) = (1/√π) ∫ e^{-μ²}/(μ - z) dμ`; principal value on the axis.
pub fn gauss_hilbert<T: Real>(z: Cplx<T>) -> Result<Cplx<T>> {
    Ok(kernel(z, AxisValue::Principal)?.t)
}

/// One-sided limits `(t⁺(μ), t⁻(μ))` on the real axis.
pub fn gauss_hilbert_limits<T: Real>(mu: T) -> Result<(Cplx<T>, Cplx<T>)> {
    let plus = kernel(real(mu), AxisValue::Plus)?.t;
    let minus = kernel(real(mu), AxisValue::Minus)?.t;
    Ok((plus, minus))
}

/// Van Kampen dispersion function `λ₀(z) = (1/√π) ∫ μ e^{-μ²}/(μ - z) dμ = 1 + z t(z)`.
pub fn lambda0<T: Real>(z: Cplx<T>) -> Result<Cplx<T>> {
    Ok(kernel(z, AxisValue::Principal)?.lambda0)
}

/// `λ₀'(z) = t(z) - 2 z λ₀(z)`, from `t' = -2 λ₀`.
pub fn lambda0_prime<T: Real>(z: Cplx<T>) -> Result<Cplx<T>> {
    Ok(kernel(z, AxisValue::Principal)?.lambda0_prime)
}

/// `p(z) = -(z³/√π) ∫ e^{-μ²}/(μ - z) dμ = -z³ t(z)`.
pub fn p_func<T: Real>(z: Cplx<T>) -> Result<Cplx<T>> {
    Ok(-(z * z * z) * gauss_hilbert(z)?)
}

/// Faddeeva function `w(z) = e^{-z²} erfc(-iz)` for `Im z ≥ 0`.
pub fn faddeeva_upper<T: Real>(z: Cplx<T>) -> Result<Cplx<T>> {
    if z.im < T::zero() {
        return Err(Error::Domain("faddeeva_upper needs Im z >= 0".into()));
    }
    let t = kernel(z, AxisValue::Plus)?.t;
    Ok(-iu::<T>() * t / sqrt_pi::<T>())
}

/// Dawson's integral `F(x) = e^{-x²} ∫₀ˣ e^{s²} ds` for real `x`.
pub fn dawson<T: Real>(x: T) -> Result<T> {
    check_finite(real(x))?;
    Ok(-T::lit(0.5) * kernel_upper(real(x)).t.re)
}

/// Scaled complementary error function `e^{x²} erfc(x)`, `x ≥ 0`.
///
/// Independent of the complex kernel: Taylor series of `erf` below 0.5, the real Laplace
/// continued fraction up to 50, asymptotic series beyond.
pub fn erfcx<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("erfcx of non-finite {x}")));
    }
    if x < T::zero() {
        return Err(Error::Domain(format!("erfcx requires x >= 0, got {x}")));
    }
    let sp = sqrt_pi::<T>();
    if x < T::lit(0.5) {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        for n in 1..100 {
            let nf = T::lit(n as f64);
            term = -term * x2 / nf;
            let contrib = term / (T::lit(2.0) * nf + T::one());
            sum = sum + contrib;
            if contrib.abs() <= T::epsilon() * T::lit(0.25) * sum.abs() {
                break;
            }
        }
        let erf = sum * T::lit(2.0) / sp;
        return Ok(x2.exp() * (T::one() - erf));
    }
    if x < T::lit(50.0) {
        let tiny = T::lit(1e-300).max(T::min_positive_value());
        let mut f = x;
        let mut c = f;
        let mut d = T::zero();
        for j in 1..MAX_CF_TERMS {
            let a = T::lit(j as f64 * 0.5);
            d = x + a * d;
            if d == T::zero() {
                d = tiny;
            }
            c = x + a / c;
            if c == T::zero() {
                c = tiny;
            }
            d = d.recip();
            let delta = c * d;
            f = f * delta;
            if (delta - T::one()).abs() <= T::epsilon() {
                break;
            }
        }
        return Ok(T::one() / (sp * f));
    }
    let u = T::one() / (T::lit(2.0) * x * x);
    let mut a = T::one();
    let mut sum = T::one();
    for n in 1..60 {
        a = -a * u * T::lit((2 * n - 1) as f64);
        sum = sum + a;
        if a.abs() <= T::epsilon() * T::lit(0.25) {
            break;
        }
    }
    Ok(sum / (x * sp))
}
