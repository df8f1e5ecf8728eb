//! Complex Newton iteration.

use crate::error::{Error, Result};
use crate::scalar::{is_finite, pair, Cplx, Real};

/// Newton iteration on a function that returns `(f(z), f'(z))` or fails.
///
/// Steps that increase `|f|` are halved up to 30 times. Returns the first iterate with
/// `|f| < tol`; otherwise the error carries every iterate visited.
pub fn newton_refine_with<T, F>(mut fdf: F, z0: Cplx<T>, tol: T, max_iter: usize) -> Result<Cplx<T>>
where
    T: Real,
    F: FnMut(Cplx<T>) -> Result<(Cplx<T>, Cplx<T>)>,
{
    let mut trace = vec![pair(z0)];
    let mut z = z0;
    let (mut fz, mut dfz) = fdf(z)?;
    for _ in 0..=max_iter {
        if fz.norm() < tol {
            return Ok(z);
        }
        if !is_finite(fz) || !is_finite(dfz) || dfz.norm() == T::zero() {
            break;
        }
        let step = fz / dfz;
        let mut scale = T::one();
        let mut accepted = None;
        for _ in 0..30 {
            let cand = z - step * scale;
            let (fc, dc) = fdf(cand)?;
            if is_finite(fc) && fc.norm() < fz.norm() {
                accepted = Some((cand, fc, dc));
                break;
            }
            scale = scale * T::lit(0.5);
        }
        let Some((zn, fn_, dn)) = accepted else {
            break;
        };
        z = zn;
        fz = fn_;
        dfz = dn;
        trace.push(pair(z));
    }
    Err(Error::Newton { trace })
}

/// Newton iteration with separate closures for `f` and its exact derivative.
pub fn newton_refine<T, F, D>(f: F, df: D, z0: Cplx<T>, tol: T, max_iter: usize) -> Result<Cplx<T>>
where
    T: Real,
    F: Fn(Cplx<T>) -> Cplx<T>,
    D: Fn(Cplx<T>) -> Cplx<T>,
{
    newton_refine_with(|z| Ok((f(z), df(z))), z0, tol, max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Cplx<f64>;

    #[test]
    fn quadratic_root() {
        let r = newton_refine(|z: C| z * z + 1.0, |z: C| z * 2.0, C::new(0.2, 0.8), 1e-14, 50).unwrap();
        assert!((r - C::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn linear_converges_in_one_step() {
        let mut calls = 0;
        let r = newton_refine_with(
            |z: C| {
                calls += 1;
                Ok((z - 1.0, C::from(1.0)))
            },
            C::new(-7.0, 3.0),
            1e-14,
            50,
        )
        .unwrap();
        assert_eq!(r, C::new(1.0, 0.0));
        assert_eq!(calls, 2);
    }

    #[test]
    fn residual_contract_holds() {
        let f = |z: C| z * z * z - z * 2.0 + 2.0;
        let df = |z: C| z * z * 3.0 - 2.0;
        for &start in &[C::new(0.5, 0.5), C::new(-2.0, 0.1), C::new(1.0, -1.0)] {
            if let Ok(r) = newton_refine(f, df, start, 1e-13, 100) {
                assert!(f(r).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn failure_carries_trace() {
        // no root: e^z
        match newton_refine(|z: C| z.exp(), |z: C| z.exp(), C::new(0.0, 0.0), 1e-300, 5) {
            Err(Error::Newton { trace }) => assert!(trace.len() >= 2),
            other => panic!("{other:?}"),
        }
        match newton_refine(|z: C| z * z + 1.0, |_: C| C::from(0.0), C::new(0.3, 0.3), 1e-12, 5) {
            Err(Error::Newton { trace }) => assert_eq!(trace.len(), 1),
            other => panic!("{other:?}"),
        }
    }
}
