//! Argument-principle winding numbers along closed polylines.

use crate::error::{Error, Result};
use crate::scalar::{cplx, is_finite, pair, Cplx, Real};

const MAX_BISECTIONS: usize = 60;

/// Straight piece of a contour, sampled uniformly before adaptive refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSegment<T> {
    pub start: Cplx<T>,
    pub end: Cplx<T>,
    pub samples: usize,
}

impl<T: Real> PathSegment<T> {
    pub fn new(start: Cplx<T>, end: Cplx<T>, samples: usize) -> Result<Self> {
        if samples < 2 {
            return Err(Error::Domain(format!("path segment needs at least 2 samples, got {samples}")));
        }
        if !is_finite(start) || !is_finite(end) {
            return Err(Error::Domain("path segment endpoints must be finite".into()));
        }
        Ok(PathSegment { start, end, samples })
    }

    fn point(&self, s: T) -> Cplx<T> {
        self.start + (self.end - self.start) * s
    }
}

fn close_enough<T: Real>(a: Cplx<T>, b: Cplx<T>) -> bool {
    (a - b).norm() <= T::lit(64.0) * T::epsilon() * (T::one() + a.norm().max(b.norm()))
}

fn check_contiguous<T: Real>(path: &[PathSegment<T>]) -> Result<()> {
    if path.is_empty() {
        return Err(Error::OpenContour);
    }
    for w in path.windows(2) {
        if !close_enough(w[0].end, w[1].start) {
            return Err(Error::OpenContour);
        }
    }
    Ok(())
}

fn check_closed<T: Real>(path: &[PathSegment<T>]) -> Result<()> {
    check_contiguous(path)?;
    let (Some(first), Some(last)) = (path.first(), path.last()) else {
        return Err(Error::OpenContour);
    };
    if !close_enough(last.end, first.start) {
        return Err(Error::OpenContour);
    }
    Ok(())
}

/// Continuous change of `arg f` along `path`, in radians.
///
/// Consecutive samples are bisected until every phase step is below π/2. Any sample with
/// `|f| ≤ threshold` is reported as a zero on the contour.
pub fn argument_change<T, F>(f: F, path: &[PathSegment<T>], threshold: T) -> Result<T>
where
    T: Real,
    F: Fn(Cplx<T>) -> Result<Cplx<T>>,
{
    check_closed(path)?;
    accumulate(f, path, threshold)
}

/// As [`argument_change`] along a contiguous path that need not close.
pub fn argument_change_open<T, F>(f: F, path: &[PathSegment<T>], threshold: T) -> Result<T>
where
    T: Real,
    F: Fn(Cplx<T>) -> Result<Cplx<T>>,
{
    check_contiguous(path)?;
    accumulate(f, path, threshold)
}

fn accumulate<T, F>(f: F, path: &[PathSegment<T>], threshold: T) -> Result<T>
where
    T: Real,
    F: Fn(Cplx<T>) -> Result<Cplx<T>>,
{
    let eval = |z: Cplx<T>| -> Result<Cplx<T>> {
        let v = f(z)?;
        if !is_finite(v) || v.norm() <= threshold {
            return Err(Error::ZeroOnContour { at: pair(z) });
        }
        Ok(v)
    };
    let quarter_turn = T::FRAC_PI_2();
    let mut total = T::zero();
    for seg in path {
        let n = seg.samples - 1;
        let mut s_prev = T::zero();
        let mut f_prev = eval(seg.start)?;
        for i in 1..=n {
            let s_next = T::lit(i as f64) / T::lit(n as f64);
            let f_next = eval(seg.point(s_next))?;
            // depth-first bisection of (s_prev, s_next)
            let mut stack = vec![(s_next, f_next, 0usize)];
            let (mut sa, mut fa) = (s_prev, f_prev);
            while let Some(&(sb, fb, depth)) = stack.last() {
                let step = (fb / fa).arg();
                if step.abs() < quarter_turn {
                    total = total + step;
                    stack.pop();
                    sa = sb;
                    fa = fb;
                    continue;
                }
                if depth >= MAX_BISECTIONS {
                    return Err(Error::WindingRefinement { at: pair(seg.point(sa)) });
                }
                let sm = (sa + sb) * T::lit(0.5);
                let fm = eval(seg.point(sm))?;
                stack.push((sm, fm, depth + 1));
            }
            s_prev = s_next;
            f_prev = f_next;
        }
    }
    Ok(total)
}

/// Winding number of `f` around 0 along the closed `path` (zeros minus poles enclosed,
/// counter-clockwise orientation positive).
pub fn winding_number<T, F>(f: F, path: &[PathSegment<T>], threshold: T) -> Result<i64>
where
    T: Real,
    F: Fn(Cplx<T>) -> Result<Cplx<T>>,
{
    let turns = argument_change(f, path, threshold)? / T::TAU();
    let n = turns.round();
    if (turns - n).abs() > T::lit(0.25) {
        let at = path.first().map(|s| pair(s.start)).unwrap_or((f64::NAN, f64::NAN));
        return Err(Error::WindingRefinement { at });
    }
    Ok(n.to_i64().unwrap_or(0))
}

/// Counter-clockwise rectangle `[x0, x1] × [y0, y1]` as four segments.
pub fn rectangle<T: Real>(x0: T, x1: T, y0: T, y1: T, samples: usize) -> Result<Vec<PathSegment<T>>> {
    if !(x0 < x1 && y0 < y1) {
        return Err(Error::Domain("rectangle corners must be ordered".into()));
    }
    let c = [cplx(x0, y0), cplx(x1, y0), cplx(x1, y1), cplx(x0, y1)];
    (0..4).map(|i| PathSegment::new(c[i], c[(i + 1) % 4], samples)).collect()
}

/// Counter-clockwise regular polygon inscribed in the circle `|z - center| = radius`.
pub fn circle<T: Real>(center: Cplx<T>, radius: T, sides: usize) -> Result<Vec<PathSegment<T>>> {
    if sides < 3 || !(radius > T::zero()) {
        return Err(Error::Domain("circle needs radius > 0 and at least 3 sides".into()));
    }
    let pt = |k: usize| {
        if k == sides {
            return center + Cplx::from_polar(radius, T::zero());
        }
        center + Cplx::from_polar(radius, T::TAU() * T::lit(k as f64) / T::lit(sides as f64))
    };
    (0..sides).map(|k| PathSegment::new(pt(k), pt(k + 1), 2)).collect()
}
