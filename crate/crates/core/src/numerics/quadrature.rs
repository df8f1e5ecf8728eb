//! Globally adaptive Gauss–Kronrod (10/21) quadrature for complex-valued integrands.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{pair, Cplx, Real};

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525634525,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the odd-indexed Kronrod nodes
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Tolerances and subdivision budget for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(rel_tol: T, abs_tol: T, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > T::zero()) || !(abs_tol >= T::zero()) || !abs_tol.is_finite() || max_subdivisions < 1 {
            return Err(Error::Domain(format!(
                "invalid quadrature spec: rel_tol {rel_tol}, abs_tol {abs_tol}, max_subdivisions {max_subdivisions}"
            )));
        }
        Ok(QuadratureSpec { rel_tol, abs_tol, max_subdivisions })
    }

    /// Same spec with both tolerances scaled by `factor`.
    pub fn tightened(&self, factor: T) -> Self {
        QuadratureSpec { rel_tol: self.rel_tol * factor, abs_tol: self.abs_tol * factor, ..*self }
    }
}

impl Default for QuadratureSpec<f64> {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-12, abs_tol: 0.0, max_subdivisions: 2000 }
    }
}

/// Integral estimate with its error bound and the work spent.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: Cplx<T>,
    pub error: T,
    pub subdivisions: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    value: Cplx<T>,
    error: T,
    floor: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.a.partial_cmp(&self.a).unwrap_or(Ordering::Equal))
    }
}

fn kronrod21<T: Real, F: Fn(T) -> Cplx<T>>(f: &F, a: T, b: T) -> Panel<T> {
    let half = (b - a) * T::lit(0.5);
    let center = (a + b) * T::lit(0.5);
    let fc = f(center);
    let mut res_k = fc * T::lit(WGK[10]);
    let mut res_g = Cplx::from(T::zero());
    let mut res_abs = fc.norm() * T::lit(WGK[10]);
    let mut fv = [(Cplx::from(T::zero()), Cplx::from(T::zero())); 10];
    for j in 0..10 {
        let dx = half * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let w = T::lit(WGK[j]);
        res_k = res_k + (f1 + f2) * w;
        res_abs = res_abs + (f1.norm() + f2.norm()) * w;
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * T::lit(WG[j / 2]);
        }
        fv[j] = (f1, f2);
    }
    let mean = res_k * T::lit(0.5);
    let mut res_asc = (fc - mean).norm() * T::lit(WGK[10]);
    for (j, (f1, f2)) in fv.iter().enumerate() {
        res_asc = res_asc + ((*f1 - mean).norm() + (*f2 - mean).norm()) * T::lit(WGK[j]);
    }
    let h = half.abs();
    let value = res_k * half;
    let res_abs = res_abs * h;
    let res_asc = res_asc * h;
    let mut err = ((res_k - res_g) * half).norm();
    if res_asc != T::zero() && err != T::zero() {
        err = res_asc * T::one().min((T::lit(200.0) * err / res_asc).powf(T::lit(1.5)));
    }
    let floor = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        err = err.max(floor);
    }
    let floor = floor.max(T::min_positive_value());
    if !err.is_finite() || !value.re.is_finite() || !value.im.is_finite() {
        err = T::infinity();
    }
    Panel { a, b, value, error: err, floor }
}

/// Adaptive integration over consecutive panels defined by `points` (sorted, at least two).
pub fn integrate_estimate<T, F>(f: F, points: &[T], spec: &QuadratureSpec<T>) -> Result<Estimate<T>>
where
    T: Real,
    F: Fn(T) -> Cplx<T>,
{
    if points.len() < 2 {
        return Err(Error::Domain("integration needs at least two points".into()));
    }
    for w in points.windows(2) {
        if !(w[0] < w[1]) || !w[0].is_finite() || !w[1].is_finite() {
            return Err(Error::Domain(format!("integration points must be finite and increasing ({} , {})", w[0], w[1])));
        }
    }
    let mut heap: BinaryHeap<Panel<T>> = points.windows(2).map(|w| kronrod21(&f, w[0], w[1])).collect();
    let mut frozen: Vec<Panel<T>> = Vec::new();
    let mut subdivisions = heap.len();
    // running totals drive the loop; the returned value is re-summed from the panels
    let mut value = heap.iter().fold(Cplx::from(T::zero()), |acc, p| acc + p.value);
    let mut error = heap.iter().fold(T::zero(), |acc, p| acc + p.error);
    let finish = |heap: &BinaryHeap<Panel<T>>, frozen: &[Panel<T>]| {
        let mut panels: Vec<&Panel<T>> = heap.iter().chain(frozen.iter()).collect();
        panels.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
        let v = panels.iter().fold(Cplx::from(T::zero()), |acc, p| acc + p.value);
        let e = panels.iter().fold(T::zero(), |acc, p| acc + p.error);
        (v, e)
    };
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * value.norm());
        // an empty heap means every panel sits at its roundoff floor
        if error.is_finite() && (error <= target || heap.is_empty()) {
            let (v, e) = finish(&heap, &frozen);
            return Ok(Estimate { value: v, error: e, subdivisions });
        }
        if heap.is_empty() || subdivisions >= spec.max_subdivisions {
            let (v, e) = finish(&heap, &frozen);
            return Err(Error::Quadrature { estimate: pair(v), error_bound: e.as_f64(), subdivisions });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = (worst.a + worst.b) * T::lit(0.5);
        let width = worst.b - worst.a;
        let scale = worst.a.abs().max(worst.b.abs());
        let at_roundoff = worst.error <= worst.floor;
        if width <= T::lit(1000.0) * T::epsilon() * scale || !(mid > worst.a && mid < worst.b) || at_roundoff {
            if !worst.error.is_finite() {
                return Err(Error::Quadrature { estimate: pair(value), error_bound: f64::INFINITY, subdivisions });
            }
            frozen.push(worst);
            continue;
        }
        let left = kronrod21(&f, worst.a, mid);
        let right = kronrod21(&f, mid, worst.b);
        value = value - worst.value + left.value + right.value;
        error = if worst.error.is_finite() {
            (error - worst.error + left.error + right.error).max(T::zero())
        } else {
            heap.iter().chain(frozen.iter()).fold(left.error + right.error, |acc, p| acc + p.error)
        };
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
}

/// `∫_a^b f`, adaptive Gauss–Kronrod.
pub fn integrate<T, F>(f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<Cplx<T>>
where
    T: Real,
    F: Fn(T) -> Cplx<T>,
{
    if a == b {
        return Ok(Cplx::from(T::zero()));
    }
    if a > b {
        return integrate(f, b, a, spec).map(|v| -v);
    }
    Ok(integrate_estimate(f, &[a, b], spec)?.value)
}

/// Integral over `[points[0], points[last]]` with panel boundaries at every point.
pub fn integrate_with_breakpoints<T, F>(f: F, points: &[T], spec: &QuadratureSpec<T>) -> Result<Cplx<T>>
where
    T: Real,
    F: Fn(T) -> Cplx<T>,
{
    Ok(integrate_estimate(f, points, spec)?.value)
}

/// Compactifying substitution for `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiInfiniteMap {
    /// `τ = u/(1-u)`
    Rational,
    /// `τ = tan(πu/2)`
    Tangent,
}

impl SemiInfiniteMap {
    fn forward<T: Real>(self, u: T) -> (T, T) {
        match self {
            SemiInfiniteMap::Rational => {
                let d = T::one() - u;
                (u / d, T::one() / (d * d))
            }
            SemiInfiniteMap::Tangent => {
                let h = T::FRAC_PI_2();
                let c = (h * u).cos();
                ((h * u).tan(), h / (c * c))
            }
        }
    }

    fn inverse<T: Real>(self, tau: T) -> T {
        match self {
            SemiInfiniteMap::Rational => tau / (T::one() + tau),
            SemiInfiniteMap::Tangent => tau.atan() / T::FRAC_PI_2(),
        }
    }
}

/// `∫_0^∞ f` through the substitution `map`, with optional breakpoints given in `τ`.
pub fn integrate_semi_infinite_map<T, F>(f: F, map: SemiInfiniteMap, breakpoints: &[T], spec: &QuadratureSpec<T>) -> Result<Cplx<T>>
where
    T: Real,
    F: Fn(T) -> Cplx<T>,
{
    let mut pts = vec![T::zero()];
    let mut sorted: Vec<T> = breakpoints.iter().copied().filter(|b| *b > T::zero() && b.is_finite()).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    for b in sorted {
        let u = map.inverse(b);
        if u > *pts.last().expect("non-empty") && u < T::one() {
            pts.push(u);
        }
    }
    pts.push(T::one());
    let g = |u: T| {
        let (tau, jac) = map.forward(u);
        if !tau.is_finite() || !jac.is_finite() {
            return Cplx::from(T::zero());
        }
        f(tau) * jac
    };
    integrate_with_breakpoints(g, &pts, spec)
}

/// `∫_0^∞ f` for an absolutely integrable `f`, using `τ = u/(1-u)`.
pub fn integrate_semi_infinite<T, F>(f: F, spec: &QuadratureSpec<T>) -> Result<Cplx<T>>
where
    T: Real,
    F: Fn(T) -> Cplx<T>,
{
    integrate_semi_infinite_map(f, SemiInfiniteMap::Rational, &[], spec)
}

/// `∫_0^∞ f` with `f` integrated directly on `[0, T]` (panels at the breakpoints, `T` the last
/// one) and the tail mapped by `τ = T/(1-w)`, `w ∈ [0, 1)`. Suited to integrands with narrow
/// features at known, possibly large, positions.
pub fn integrate_semi_infinite_split<T, F>(f: F, breakpoints: &[T], spec: &QuadratureSpec<T>) -> Result<Cplx<T>>
where
    T: Real,
    F: Fn(T) -> Cplx<T>,
{
    let mut pts = vec![T::zero()];
    let mut sorted: Vec<T> = breakpoints.iter().copied().filter(|b| *b > T::zero() && b.is_finite()).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    for b in sorted {
        if b > *pts.last().expect("non-empty") {
            pts.push(b);
        }
    }
    if pts.len() == 1 {
        pts.push(T::one());
    }
    let t_end = *pts.last().expect("non-empty");
    pts.push(t_end + T::one());
    let g = |v: T| {
        if v <= t_end {
            return f(v);
        }
        let d = T::one() - (v - t_end);
        let tau = t_end / d;
        if !tau.is_finite() {
            return Cplx::from(T::zero());
        }
        f(tau) * (t_end / (d * d))
    };
    integrate_with_breakpoints(g, &pts, spec)
}

/// Principal value of `∫_a^b g(η)/(η - pole) dη` by singularity subtraction:
/// `∫ (g(η) - g(pole))/(η - pole) dη + g(pole) ln((b - pole)/(pole - a))`.
pub fn integrate_principal_value<T, G>(g: G, pole: T, interval: (T, T), spec: &QuadratureSpec<T>) -> Result<Cplx<T>>
where
    T: Real,
    G: Fn(T) -> Cplx<T>,
{
    integrate_principal_value_with(g, pole, interval, &[], spec)
}

/// As [`integrate_principal_value`], with extra panel boundaries inside the interval.
pub fn integrate_principal_value_with<T, G>(
    g: G,
    pole: T,
    (a, b): (T, T),
    breakpoints: &[T],
    spec: &QuadratureSpec<T>,
) -> Result<Cplx<T>>
where
    T: Real,
    G: Fn(T) -> Cplx<T>,
{
    if !(a < pole && pole < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("pole {pole} outside the open interval ({a}, {b})")));
    }
    let g0 = g(pole);
    let h = |eta: T| {
        let d = eta - pole;
        if d == T::zero() {
            Cplx::from(T::zero())
        } else {
            (g(eta) - g0) / d
        }
    };
    let mut pts: Vec<T> = vec![a, pole, b];
    pts.extend(breakpoints.iter().copied().filter(|p| *p > a && *p < b && *p != pole));
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    pts.dedup();
    let regular = integrate_with_breakpoints(h, &pts, spec)?;
    Ok(regular + g0 * ((b - pole) / (pole - a)).ln())
}

/// `n`-point Gauss–Legendre nodes and weights on `[a, b]`, by Newton iteration on `P_n`.
pub fn gauss_legendre<T: Real>(n: usize, a: T, b: T) -> Result<(Vec<T>, Vec<T>)> {
    if n == 0 || !(a < b) {
        return Err(Error::Domain(format!("gauss_legendre needs n >= 1 and a < b (n = {n})")));
    }
    let half = (b - a) * T::lit(0.5);
    let mid = (b + a) * T::lit(0.5);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, refined in f64
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = mid - half * T::lit(x);
        nodes[n - 1 - i] = mid + half * T::lit(x);
        weights[i] = half * T::lit(w);
        weights[n - 1 - i] = half * T::lit(w);
    }
    Ok((nodes, weights))
}

/// Runs `integrator` on a fallible integrand. The first error raised by `f` is returned in
/// place of the integral; after it the integrand reads zero so the integrator winds down fast.
pub fn integrate_fallible<T, F, I>(f: F, integrator: I) -> Result<Cplx<T>>
where
    T: Real,
    F: Fn(T) -> Result<Cplx<T>>,
    I: FnOnce(&dyn Fn(T) -> Cplx<T>) -> Result<Cplx<T>>,
{
    let trapped: RefCell<Option<Error>> = RefCell::new(None);
    let g = |x: T| -> Cplx<T> {
        if trapped.borrow().is_some() {
            return Cplx::from(T::zero());
        }
        match f(x) {
            Ok(v) => v,
            Err(e) => {
                *trapped.borrow_mut() = Some(e);
                Cplx::from(T::zero())
            }
        }
    };
    let result = integrator(&g);
    match trapped.into_inner() {
        Some(e) => Err(e),
        None => result,
    }
}
