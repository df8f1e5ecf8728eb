use super::OracleConfig;
use crate::dispersion::PlasmaParams;
use crate::error::{Error, Result};
use crate::numerics::{integrate_fallible, integrate_with_breakpoints};
use crate::scalar::{cplx, iu, Cplx, Real};
use crate::solution::{impedance_from_eprime, qspec};
use crate::specfun::gauss_hilbert;

/// Relative bound on the analytic tail correction beyond `k_max`.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// `e'(0)` from the Fourier route with the pieces of its evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierEstimate<T> {
    pub surface_derivative: Cplx<T>,
    /// `∫₀^{k_max} dk/D`
    pub body: Cplx<T>,
    /// analytic `∫_{k_max}^∞ dk/D`
    pub tail: Cplx<T>,
    /// bound on the neglected tail terms
    pub tail_error: T,
}

/// `K(k) = (1/√π) ∫ e^{-μ²}/(z₀ + ikμ) dμ` for `k ≥ 0`; `K(0) = 1/z₀`.
pub fn kernel_k<T: Real>(k: T, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    if !(k >= T::zero()) || !k.is_finite() {
        return Err(Error::Domain(format!("kernel_k needs finite k >= 0, got {k}")));
    }
    if k == T::zero() {
        return Ok(p.z0.inv());
    }
    // z₀ + ikμ = ik(μ - iz₀/k), and Im(iz₀/k) = 1/k > 0
    let zeta = iu::<T>() * p.z0 / k;
    Ok(gauss_hilbert(zeta)? / cplx(T::zero(), k))
}

fn denominator<T: Real>(k: T, p: &PlasmaParams<T>) -> Result<Cplx<T>> {
    Ok(p.q * p.q - k * k + iu::<T>() * p.alpha * kernel_k(k, p)?)
}

fn k_breakpoints<T: Real>(p: &PlasmaParams<T>, cfg: &OracleConfig<T>) -> Vec<T> {
    // zero of D in the local limit K → 1/z₀
    let kp = (p.q * p.q + iu::<T>() * p.alpha / p.z0).sqrt();
    let (kr, w) = (kp.re.abs(), kp.im.abs());
    let k_max = cfg.k_max;
    let lo = T::lit(1e-4) * kp.norm().min(T::one());
    let mut pts = vec![T::zero()];
    let ratio = (k_max / lo).ln() / T::lit(cfg.n_k as f64);
    for i in 0..cfg.n_k {
        pts.push(lo * (ratio * T::lit(i as f64)).exp());
    }
    for m in [-100.0, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 100.0] {
        pts.push(kr + w * T::lit(m));
    }
    pts.retain(|x| x.is_finite() && *x >= T::zero() && *x < k_max);
    pts.push(k_max);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    pts.dedup();
    pts
}

/// `e'(0)` for `e(0) = 1` through the Fourier route.
pub fn fourier_surface_derivative<T: Real>(p: &PlasmaParams<T>, cfg: &OracleConfig<T>) -> Result<FourierEstimate<T>> {
    cfg.validate()?;
    let pts = k_breakpoints(p, cfg);
    let spec = qspec(1e-13, 0.0, 50_000);
    let body = integrate_fallible(|k| Ok(denominator(k, p)?.inv()), |g| integrate_with_breakpoints(g, &pts, &spec))?;
    // 1/D = -1/k² (1 + Q²/k² + iα√π/k³ + …) for large k, where K(k) → √π/k
    let kk = cfg.k_max;
    let k3 = kk * kk * kk;
    let q2 = p.q * p.q;
    let tail = -(Cplx::from(kk.recip()) + q2 / (k3 * T::lit(3.0)) + iu::<T>() * p.alpha * T::PI().sqrt() / (k3 * kk * T::lit(4.0)));
    let tail_error = (q2.norm() * q2.norm() + T::lit(2.0) * p.alpha.norm() * p.z0.norm()) / (T::lit(5.0) * k3 * kk * kk);
    let total = body + tail;
    if tail_error > T::lit(TAIL_TOLERANCE) * total.norm() {
        return Err(Error::Cutoff { k_max: kk.as_f64(), tail: (tail_error / total.norm()).as_f64() });
    }
    let surface_derivative = (total * T::lit(2.0) / T::PI()).inv();
    Ok(FourierEstimate { surface_derivative, body, tail, tail_error })
}

/// Dimensionless impedance `Z₀` (and `Z` with `c = 1`) through the Fourier route.
pub fn fourier_impedance<T: Real>(p: &PlasmaParams<T>, cfg: &OracleConfig<T>) -> Result<crate::solution::ImpedanceResult<T>> {
    let est = fourier_surface_derivative(p, cfg)?;
    impedance_from_eprime(p, est.surface_derivative, T::one())
}
