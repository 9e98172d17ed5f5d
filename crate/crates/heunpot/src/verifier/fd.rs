//! Central finite differences with an adaptive step: order 6 for the first
//! and third derivatives, order 8 for the second.
//!
//! Each derivative is estimated at h = 2·10⁻²·2⁻ᵏ, k = 0..13, and the estimate
//! whose larger change against its two neighbouring steps is smallest is kept.
//! A step whose stencil cannot be evaluated (for instance because it leaves the
//! branch) is skipped.

use crate::{Error, Result, C64};

pub const STEPS: usize = 14;
pub const H0: f64 = 2e-2;

const D1: [f64; 7] = [-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
const D2: [f64; 9] =
    [-1.0 / 560.0, 8.0 / 315.0, -1.0 / 5.0, 8.0 / 5.0, -205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
const D3: [f64; 9] =
    [-7.0 / 240.0, 3.0 / 10.0, -169.0 / 120.0, 61.0 / 30.0, 0.0, -61.0 / 30.0, 169.0 / 120.0, -3.0 / 10.0, 7.0 / 240.0];

fn stencil<T, F>(f: &F, x: f64, h: f64, half: i32) -> Option<Vec<T>>
where
    F: Fn(f64) -> Result<T>,
{
    (-half..=half).map(|j| f(x + j as f64 * h).ok()).collect()
}

/// Picks the estimate that changes least against both neighbouring steps, so a
/// single accidental agreement between two coarse steps cannot win. Falls back
/// to a single neighbour, then to any valid estimate.
fn select<T: Copy>(est: &[Option<T>], dist: impl Fn(T, T) -> f64) -> Option<(T, f64)> {
    let step = |k: usize| H0 * 0.5f64.powi(k as i32);
    fn keep<T>(best: &mut Option<(T, f64, f64)>, v: T, d: f64, h: f64) {
        if best.as_ref().map_or(true, |b| d < b.1) {
            *best = Some((v, d, h));
        }
    }
    let mut best: Option<(T, f64, f64)> = None;
    for k in 1..est.len().saturating_sub(1) {
        if let (Some(a), Some(b), Some(c)) = (est[k - 1], est[k], est[k + 1]) {
            keep(&mut best, b, dist(a, b).max(dist(b, c)), step(k));
        }
    }
    if best.is_none() {
        for k in 0..est.len().saturating_sub(1) {
            if let (Some(a), Some(b)) = (est[k], est[k + 1]) {
                keep(&mut best, b, dist(a, b), step(k + 1));
            }
        }
    }
    best.map(|(v, _, h)| (v, h)).or_else(|| est.iter().enumerate().find_map(|(k, e)| e.map(|v| (v, step(k)))))
}

/// f″(x) and the step used.
pub fn second_derivative<F>(f: F, x: f64) -> Result<(C64, f64)>
where
    F: Fn(f64) -> Result<C64>,
{
    let est: Vec<Option<C64>> = (0..STEPS)
        .map(|k| {
            let h = H0 * 0.5f64.powi(k as i32);
            stencil(&f, x, h, 4).map(|v| v.iter().zip(D2).map(|(&y, c)| y * c).sum::<C64>() / (h * h))
        })
        .collect();
    select(&est, |a, b| (a - b).norm())
        .ok_or_else(|| Error::GridTooCoarse(format!("no finite-difference stencil fits around x = {x}")))
}

/// f′(x) and the step used.
pub fn first_derivative<F>(f: F, x: f64) -> Result<(C64, f64)>
where
    F: Fn(f64) -> Result<C64>,
{
    let est: Vec<Option<C64>> = (0..STEPS)
        .map(|k| {
            let h = H0 * 0.5f64.powi(k as i32);
            stencil(&f, x, h, 3).map(|v| v.iter().zip(D1).map(|(&y, c)| y * c).sum::<C64>() / h)
        })
        .collect();
    select(&est, |a, b| (a - b).norm())
        .ok_or_else(|| Error::GridTooCoarse(format!("no finite-difference stencil fits around x = {x}")))
}

/// z′, z″, z‴ at one step.
fn derivs(v: &[f64], h: f64) -> (f64, f64, f64) {
    let d1 = v[1..8].iter().zip(D1).map(|(y, c)| y * c).sum::<f64>() / h;
    let d2 = v.iter().zip(D2).map(|(y, c)| y * c).sum::<f64>() / (h * h);
    let d3 = v.iter().zip(D3).map(|(y, c)| y * c).sum::<f64>() / (h * h * h);
    (d1, d2, d3)
}

/// {z, x} = z‴/z′ − (3/2)(z″/z′)².
pub fn schwarzian<F>(zmap: F, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let est: Vec<Option<f64>> = (0..STEPS)
        .map(|k| {
            let h = H0 * 0.5f64.powi(k as i32);
            let v = stencil(&zmap, x, h, 4)?;
            let (d1, d2, d3) = derivs(&v, h);
            let size = v.iter().fold(0.0f64, |m, y| m.max(y.abs()));
            if d1.abs() <= 1e-12 * size / h || !d1.is_finite() {
                return None;
            }
            let r = d2 / d1;
            Some(d3 / d1 - 1.5 * r * r)
        })
        .collect();
    select(&est, |a, b| (a - b).abs()).map(|(v, _)| v).ok_or(Error::DerivativeBreakdown(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_sine() {
        let (d, _) = second_derivative(|x| Ok(C64::new(x.sin(), x.cos())), 0.7).unwrap();
        assert!((d - C64::new(-0.7f64.sin(), -0.7f64.cos())).norm() < 1e-11);
        let (d, _) = first_derivative(|x| Ok(C64::new(x.sin(), 0.0)), 0.7).unwrap();
        assert!((d.re - 0.7f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn stencil_convergence() {
        // error shrinks under refinement until rounding takes over
        let f = |x: f64| -> Result<C64> { Ok(C64::new((2.0 * x).exp(), 0.0)) };
        let exact = 4.0 * 0.6f64.exp();
        let err = |h: f64| {
            let v = stencil(&f, 0.3, h, 4).unwrap();
            (v.iter().zip(D2).map(|(&y, c)| y * c).sum::<C64>() / (h * h)).re - exact
        };
        let (e1, e2) = (err(0.08).abs(), err(0.04).abs());
        assert!(e2 < e1 / 30.0, "{e1} {e2}");
        assert!(err(2e-2 / 64.0).abs() < 1e-9);
    }

    #[test]
    fn skipped_stencils() {
        // f undefined below 0: only small steps fit near x = 0.05
        let f = |x: f64| if x < 0.0 { Err(Error::OutOfBranch(x)) } else { Ok(C64::new(x * x * x, 0.0)) };
        let (d, h) = second_derivative(f, 0.05).unwrap();
        assert!((d.re - 0.3).abs() < 1e-9 && h < 0.05 / 3.0);
        assert!(second_derivative(|x| Err::<C64, _>(Error::OutOfBranch(x)), 0.0).is_err());
    }

    #[test]
    fn schwarzian_examples() {
        assert!((schwarzian(|x| Ok(x.exp()), 0.4).unwrap() + 0.5).abs() < 1e-8);
        let mobius = |x: f64| Ok((2.0 * x + 1.0) / (0.5 * x + 3.0));
        assert!(schwarzian(mobius, 0.2).unwrap().abs() < 1e-8);
        assert!((schwarzian(|x| Ok(x.tan()), 0.3).unwrap() - 2.0).abs() < 1e-8);
        assert!(matches!(schwarzian(|_| Ok(1.0), 0.0), Err(Error::DerivativeBreakdown(_))));
    }
}
