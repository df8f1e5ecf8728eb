//! Discrete spectrum: zero count, D⁺/D⁻ classification and the zeros `η_k` of `λ`.
//!
//! Zeros of the even, sectionally analytic `λ` come in pairs `±η`, one member of each pair in
//! the upper half plane, where `λ` coincides with its upper branch. The total count is
//! therefore `N = 2 W`, `W` being the winding number of the upper branch around the rectangle
//! `[-L, L] × [0, H]` whose bottom side runs along the cut and carries `λ⁺`. The count is
//! cross-checked against the cut form `N = 2 + (1/π) Δ_{(0,∞)} arg(λ⁺/λ⁻)`.
//!
//! Zeros are isolated by recursive subdivision of the rectangle with winding counts and
//! polished by Newton iteration on the continued upper branch, so iterates may cross the axis.

use crate::dispersion::{lambda_boundary, lambda_upper_continued, PlasmaParams};
use crate::error::{Error, Result};
use crate::numerics::{argument_change, argument_change_open, newton_refine_with, PathSegment};
use crate::scalar::{cplx, pair, real, Cplx, Real};

/// Magnitude below which `λ` is treated as vanishing on a contour.
pub const CONTOUR_FLOOR: f64 = 1e-8;
/// Lower bound on `|λ'(η_k)|` for a zero to count as simple.
pub const SIMPLICITY_FLOOR: f64 = 1e-10;
/// Residual bound `|λ(η_k)| < RESIDUAL_TOL · max(1, |λ'(η_k) η_k|)`.
pub const RESIDUAL_TOL: f64 = 1e-12;
/// Beyond this `|μ|` the jump `λ⁺ - λ⁻ ∝ μ³ e^{-μ²}` is below double precision.
pub const CUT_EXTENT: f64 = 12.0;
const MAX_DEPTH: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Region {
    DPlus,
    DMinus,
}

/// Zero count, region and the decaying member of each zero pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumInfo<T> {
    pub n_zeros: usize,
    pub region: Region,
    /// `η_k` with `Re(z₀/η_k) > 0`, sorted by modulus
    pub zeros: Vec<Cplx<T>>,
    /// `λ'(η_k)` of the sectional `λ`
    pub lambda_prime_at_zeros: Vec<Cplx<T>>,
}

/// Rectangle `[x0, x1] × [y0, y1]` in the closed upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBox<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
}

impl<T: Real> SearchBox<T> {
    /// `[-L, L] × [0, H]` with `L = H = scale · max(16, 8|ζ|)`, `ζ` the asymptotic zero.
    pub fn for_params(p: &PlasmaParams<T>, scale: T) -> Self {
        let r = T::lit(16.0).max(T::lit(8.0) * p.asymptotic_zero().norm()) * scale;
        SearchBox { x0: -r, x1: r, y0: T::zero(), y1: r }
    }

    fn contains(&self, z: Cplx<T>, slack: T) -> bool {
        let sx = (self.x1 - self.x0) * slack;
        let sy = (self.y1 - self.y0) * slack;
        z.re >= self.x0 - sx && z.re <= self.x1 + sx && z.im >= self.y0 - sy && z.im <= self.y1 + sy
    }

    fn center(&self) -> Cplx<T> {
        let h = T::lit(0.5);
        cplx((self.x0 + self.x1) * h, (self.y0 + self.y1) * h)
    }
}

/// Sample points on `[a, b]` with spacing at most `max(0.25, |z|/10)`, so features of `λ`
/// that scale with `|z|` are resolved before adaptive refinement.
fn edge_points<T: Real>(a: Cplx<T>, b: Cplx<T>) -> Vec<Cplx<T>> {
    let len = (b - a).norm();
    let dir = (b - a) / len;
    let mut pts = vec![a];
    let mut s = T::zero();
    let min_step = T::lit(0.25);
    let rel_step = T::lit(0.1);
    loop {
        let z = a + dir * s;
        // step from the point nearer the origin
        let ahead = a + dir * (s + min_step);
        let r = z.norm().min(ahead.norm());
        s = s + min_step.max(rel_step * r);
        if s >= len * (T::one() - T::lit(1e-12)) {
            break;
        }
        pts.push(a + dir * s);
    }
    pts.push(b);
    pts
}

fn polyline<T: Real>(corners: &[Cplx<T>]) -> Vec<PathSegment<T>> {
    let mut segs = Vec::new();
    for i in 0..corners.len() {
        let a = corners[i];
        let b = corners[(i + 1) % corners.len()];
        let pts = edge_points(a, b);
        for w in pts.windows(2) {
            segs.push(PathSegment { start: w[0], end: w[1], samples: 2 });
        }
    }
    segs
}

fn box_path<T: Real>(bx: &SearchBox<T>) -> Vec<PathSegment<T>> {
    polyline(&[cplx(bx.x0, bx.y0), cplx(bx.x1, bx.y0), cplx(bx.x1, bx.y1), cplx(bx.x0, bx.y1)])
}

/// Winding of `f` around the boundary of `bx` (counter-clockwise).
pub fn box_winding<T, F>(f: &F, bx: &SearchBox<T>) -> Result<i64>
where
    T: Real,
    F: Fn(Cplx<T>) -> Result<Cplx<T>>,
{
    let turns = argument_change(f, &box_path(bx), T::lit(CONTOUR_FLOOR))? / T::TAU();
    let n = turns.round();
    if (turns - n).abs() > T::lit(0.25) {
        return Err(Error::WindingRefinement { at: pair(bx.center()) });
    }
    Ok(n.to_i64().unwrap_or(0))
}

fn upper_branch<T: Real>(p: &PlasmaParams<T>) -> impl Fn(Cplx<T>) -> Result<Cplx<T>> + '_ {
    move |z| Ok(lambda_upper_continued(z, p)?.0)
}

fn boundary_error<T: Real>(e: Error, p: &PlasmaParams<T>) -> Error {
    match e {
        Error::ZeroOnContour { at } if at.1 == 0.0 => {
            let mu = T::lit(at.0);
            let magnitude = lambda_boundary(mu, p)
                .map(|bv| bv.lambda_plus.norm().min(bv.lambda_minus.norm()).as_f64())
                .unwrap_or(f64::NAN);
            Error::SpectralBoundary { mu: at.0, magnitude }
        }
        other => other,
    }
}

/// `N = 2 + (1/π) Δ arg(λ⁺/λ⁻)` over `(0, CUT_EXTENT)`.
pub fn count_zeros_cut<T: Real>(p: &PlasmaParams<T>) -> Result<i64> {
    let f = |z: Cplx<T>| -> Result<Cplx<T>> {
        let bv = lambda_boundary(z.re, p)?;
        let m = bv.lambda_plus.norm().min(bv.lambda_minus.norm());
        if m <= T::lit(CONTOUR_FLOOR) {
            return Err(Error::SpectralBoundary { mu: z.re.as_f64(), magnitude: m.as_f64() });
        }
        Ok(bv.lambda_plus / bv.lambda_minus)
    };
    let n = 480;
    let ext = T::lit(CUT_EXTENT);
    let segs: Vec<PathSegment<T>> = (0..n)
        .map(|i| {
            let a = ext * T::lit(i as f64) / T::lit(n as f64);
            let b = ext * T::lit((i + 1) as f64) / T::lit(n as f64);
            PathSegment { start: real(a), end: real(b), samples: 2 }
        })
        .collect();
    let turns = argument_change_open(f, &segs, T::zero())? / T::PI();
    let k = turns.round();
    if (turns - k).abs() > T::lit(0.25) {
        return Err(Error::WindingRefinement { at: (0.0, 0.0) });
    }
    Ok(2 + k.to_i64().unwrap_or(0))
}

/// Total zero count `N = 2 W` over an explicit search box.
pub fn count_zeros_in<T: Real>(p: &PlasmaParams<T>, bx: &SearchBox<T>) -> Result<i64> {
    let f = upper_branch(p);
    box_winding(&f, bx).map(|w| 2 * w).map_err(|e| boundary_error(e, p))
}

/// Total number of zeros of `λ` in the plane; `N ∈ {2, 4}`.
pub fn count_zeros<T: Real>(p: &PlasmaParams<T>) -> Result<usize> {
    let n = count_zeros_in(p, &SearchBox::for_params(p, T::one()))?;
    let n_cut = count_zeros_cut(p)?;
    if n != n_cut {
        return Err(Error::Refinement(format!(
            "rectangle count {n} disagrees with cut count {n_cut}"
        )));
    }
    if n != 2 && n != 4 {
        return Err(Error::ZeroCount(n));
    }
    Ok(n as usize)
}

fn split<T: Real>(bx: &SearchBox<T>, fx: T, fy: T) -> [SearchBox<T>; 4] {
    let xm = bx.x0 + (bx.x1 - bx.x0) * fx;
    let ym = bx.y0 + (bx.y1 - bx.y0) * fy;
    [
        SearchBox { x0: bx.x0, x1: xm, y0: bx.y0, y1: ym },
        SearchBox { x0: xm, x1: bx.x1, y0: bx.y0, y1: ym },
        SearchBox { x0: bx.x0, x1: xm, y0: ym, y1: bx.y1 },
        SearchBox { x0: xm, x1: bx.x1, y0: ym, y1: bx.y1 },
    ]
}

/// Locates the `count` zeros of `f` inside `bx` by winding-count subdivision and Newton
/// iteration on `fdf`. `tol(z)` is the residual bound at a candidate `z`.
pub fn isolate_zeros<T, F, D, R>(f: &F, fdf: &D, tol: &R, bx: SearchBox<T>, count: i64) -> Result<Vec<Cplx<T>>>
where
    T: Real,
    F: Fn(Cplx<T>) -> Result<Cplx<T>>,
    D: Fn(Cplx<T>) -> Result<(Cplx<T>, Cplx<T>)>,
    R: Fn(Cplx<T>, Cplx<T>) -> T,
{
    let mut found = Vec::new();
    let mut stack = vec![(bx, count, 0usize)];
    let fractions = [0.5, 0.4713, 0.5362, 0.4191, 0.5827];
    while let Some((b, n, depth)) = stack.pop() {
        if n <= 0 {
            continue;
        }
        if depth > MAX_DEPTH {
            return Err(Error::SubdivisionExhausted);
        }
        if n == 1 {
            if let Some(z) = polish(fdf, tol, b.center()).ok().filter(|z| b.contains(*z, T::lit(1e-6))) {
                found.push(z);
                continue;
            }
        }
        let mut children = None;
        for (i, &fx) in fractions.iter().enumerate() {
            let fy = T::lit(fractions[(i + 2) % fractions.len()]);
            let parts = split(&b, T::lit(fx), fy);
            let counts: Result<Vec<i64>> = parts.iter().map(|c| box_winding(f, c)).collect();
            match counts {
                Ok(c) if c.iter().sum::<i64>() == n && c.iter().all(|k| *k >= 0) => {
                    children = Some(parts.into_iter().zip(c).collect::<Vec<_>>());
                    break;
                }
                Ok(_) | Err(Error::ZeroOnContour { .. }) | Err(Error::WindingRefinement { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        let Some(children) = children else {
            return Err(Error::SubdivisionExhausted);
        };
        for (c, k) in children {
            stack.push((c, k, depth + 1));
        }
    }
    found.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap_or(std::cmp::Ordering::Equal));
    Ok(found)
}

fn polish<T, D, R>(fdf: &D, tol: &R, start: Cplx<T>) -> Result<Cplx<T>>
where
    T: Real,
    D: Fn(Cplx<T>) -> Result<(Cplx<T>, Cplx<T>)>,
    R: Fn(Cplx<T>, Cplx<T>) -> T,
{
    let (_, d0) = fdf(start)?;
    let guess_tol = tol(start, d0) * T::lit(0.1);
    let z = newton_refine_with(fdf, start, guess_tol, 100)?;
    // the bound depends on λ' at the root; tighten once more if needed
    let (fz, dz) = fdf(z)?;
    if fz.norm() < tol(z, dz) {
        return Ok(z);
    }
    newton_refine_with(fdf, z, tol(z, dz) * T::lit(0.5), 20)
}

fn residual_bound<T: Real>(z: Cplx<T>, dz: Cplx<T>) -> T {
    T::lit(RESIDUAL_TOL) * T::one().max(dz.norm() * z.norm())
}

/// Locates the `n/2` zeros with `Re(z₀/η) > 0` and evaluates `λ'` there.
pub fn find_zeros<T: Real>(p: &PlasmaParams<T>, n: usize) -> Result<SpectrumInfo<T>> {
    find_zeros_in(p, n, &SearchBox::for_params(p, T::one()))
}

/// As [`find_zeros`] over an explicit search box.
pub fn find_zeros_in<T: Real>(p: &PlasmaParams<T>, n: usize, bx: &SearchBox<T>) -> Result<SpectrumInfo<T>> {
    if n != 2 && n != 4 {
        return Err(Error::ZeroCount(n as i64));
    }
    let f = upper_branch(p);
    let fdf = |z: Cplx<T>| lambda_upper_continued(z, p);
    let upper = isolate_zeros(&f, &fdf, &residual_bound, *bx, (n / 2) as i64).map_err(|e| boundary_error(e, p))?;
    let mut zeros = Vec::with_capacity(upper.len());
    let mut primes = Vec::with_capacity(upper.len());
    for zeta in upper {
        if zeta.im < T::zero() {
            // the continued branch has slipped below the cut: the point sits on ∂D
            return Err(Error::SpectralBoundary { mu: zeta.re.as_f64(), magnitude: zeta.im.abs().as_f64() });
        }
        let (_, d_up) = lambda_upper_continued(zeta, p)?;
        if d_up.norm() < T::lit(SIMPLICITY_FLOOR) {
            return Err(Error::SpectralBoundary { mu: zeta.re.as_f64(), magnitude: d_up.norm().as_f64() });
        }
        // λ even: λ'(-ζ) = -λ'(ζ)
        let (eta, d) = if (p.z0 / zeta).re > T::zero() { (zeta, d_up) } else { (-zeta, -d_up) };
        zeros.push(eta);
        primes.push(d);
    }
    let mut order: Vec<usize> = (0..zeros.len()).collect();
    order.sort_by(|&i, &j| zeros[i].norm().partial_cmp(&zeros[j].norm()).unwrap_or(std::cmp::Ordering::Equal));
    let region = if n == 4 { Region::DPlus } else { Region::DMinus };
    Ok(SpectrumInfo {
        n_zeros: n,
        region,
        zeros: order.iter().map(|&i| zeros[i]).collect(),
        lambda_prime_at_zeros: order.iter().map(|&i| primes[i]).collect(),
    })
}

/// Count and locate in one call.
pub fn analyze<T: Real>(p: &PlasmaParams<T>) -> Result<SpectrumInfo<T>> {
    let n = count_zeros(p)?;
    find_zeros(p, n)
}
