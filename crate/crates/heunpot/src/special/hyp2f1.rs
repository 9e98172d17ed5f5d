//! Gauss hypergeometric function ₂F₁(α, β; γ; z).
//!
//! Maclaurin series near the origin, otherwise the Pfaff transformation or one
//! of the connection formulas around 1 and ∞, whichever gives the smallest
//! effective argument. Connection formulas with a near-integer exponent
//! difference (the logarithmic cases) are never used; when nothing else
//! converges the function is continued along a path by Taylor stepping the
//! hypergeometric equation.

use super::gamma::ln_gamma;
use super::{integer_distance, nonpositive_integer};
use crate::{Error, Result, C64};
use std::f64::consts::PI;

const MAX_TERMS: usize = 10_000;
const DIRECT_RADIUS: f64 = 0.8;
const MAX_RADIUS: f64 = 0.98;
/// Exponent differences closer than this to an integer count as logarithmic.
const LOG_CASE: f64 = 1e-4;
/// Taylor steps use at most this fraction of the distance to the nearest singular point.
const STEP_FRACTION: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypergeometricArgs {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub z: C64,
}

impl HypergeometricArgs {
    pub fn new(alpha: C64, beta: C64, gamma: C64, z: C64) -> Self {
        HypergeometricArgs { alpha, beta, gamma, z }
    }

    pub fn real(alpha: f64, beta: f64, gamma: f64, z: f64) -> Self {
        Self::new(alpha.into(), beta.into(), gamma.into(), z.into())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Principal,
    /// Boundary value from Im z > 0 on the cut z > 1.
    Upper,
}

/// Principal-branch ₂F₁; fails with `ArgumentOnCut` for real z ≥ 1 unless the
/// series terminates.
pub fn gauss_2f1(args: &HypergeometricArgs, tol: f64) -> Result<C64> {
    evaluate(args, tol, Side::Principal)
}

/// ₂F₁ continued to the upper lip of the cut: for real z > 1 this is
/// lim_{η→0⁺} ₂F₁(α, β; γ; z + iη). Elsewhere identical to [`gauss_2f1`].
pub fn gauss_2f1_upper(args: &HypergeometricArgs, tol: f64) -> Result<C64> {
    evaluate(args, tol, Side::Upper)
}

fn evaluate(args: &HypergeometricArgs, tol: f64, side: Side) -> Result<C64> {
    let HypergeometricArgs { alpha: a, beta: b, gamma: c, z } = *args;
    if !(tol > 0.0) {
        return Err(Error::ParameterOutOfRange { name: "tol", value: tol });
    }
    let tol = tol.max(1e-17);
    if nonpositive_integer(c, 1e-13).is_some() {
        return Err(Error::PoleAtGamma(c));
    }
    if z == C64::new(0.0, 0.0) {
        return Ok(C64::new(1.0, 0.0));
    }
    let terminating = [a, b].iter().filter_map(|&p| nonpositive_integer(p, 1e-12)).min();
    if let Some(n) = terminating {
        return Ok(polynomial(a, b, c, z, n as usize));
    }
    let on_cut = z.im == 0.0 && z.re >= 1.0;
    if on_cut {
        if side == Side::Principal {
            return Err(Error::ArgumentOnCut(z));
        }
        return upper_lip(a, b, c, z.re, tol);
    }
    if z.norm() <= DIRECT_RADIUS {
        return maclaurin(a, b, c, z, tol);
    }
    principal_transformed(a, b, c, z, tol)
}

/// Partial sum up to and including zⁿ.
fn polynomial(a: C64, b: C64, c: C64, z: C64, n: usize) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..n {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
    }
    sum
}

pub(crate) fn maclaurin(a: C64, b: C64, c: C64, z: C64, tol: f64) -> Result<C64> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let k = n as f64;
        let den = (c + k) * (k + 1.0);
        if den == C64::new(0.0, 0.0) {
            return Err(Error::PoleAtGamma(c));
        }
        term *= (a + k) * (b + k) / den * z;
        sum += term;
        if term == C64::new(0.0, 0.0) {
            return Ok(sum);
        }
        if term.norm() <= tol * sum.norm() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence(format!("2F1 series did not settle within {MAX_TERMS} terms at z = {z}")))
}

/// exp(Σ lnΓ(num) − Σ lnΓ(den)), zero if any denominator sits on a pole.
fn gamma_ratio(num: &[C64], den: &[C64]) -> C64 {
    if den.iter().any(|&d| nonpositive_integer(d, 0.0).is_some()) {
        return C64::new(0.0, 0.0);
    }
    let mut s = C64::new(0.0, 0.0);
    for &x in num {
        s += ln_gamma(x);
    }
    for &x in den {
        s -= ln_gamma(x);
    }
    s.exp()
}

#[derive(Clone, Copy)]
enum Route {
    Pfaff,
    OneMinus,
    Inverse,
    InverseOneMinus,
    OneMinusInverse,
}

fn principal_transformed(a: C64, b: C64, c: C64, z: C64, tol: f64) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    let log_cab = integer_distance(c - a - b) < LOG_CASE;
    let log_ab = integer_distance(a - b) < LOG_CASE;
    let mut candidates: Vec<(f64, Route)> = vec![(((z / (z - 1.0)).norm()), Route::Pfaff)];
    if !log_cab {
        candidates.push(((one - z).norm(), Route::OneMinus));
        candidates.push(((one - one / z).norm(), Route::OneMinusInverse));
    }
    if !log_ab {
        candidates.push((1.0 / z.norm(), Route::Inverse));
        candidates.push((1.0 / (one - z).norm(), Route::InverseOneMinus));
    }
    let (r, route) = candidates.into_iter().min_by(|x, y| x.0.total_cmp(&y.0)).expect("Pfaff route is always present");
    if r.min(z.norm()) > MAX_RADIUS {
        return continuation(a, b, c, &[z * (0.5 / z.norm()), z], tol);
    }
    if z.norm() <= r {
        return maclaurin(a, b, c, z, tol);
    }
    let ln_1mz = (one - z).ln();
    match route {
        Route::Pfaff => {
            let w = z / (z - 1.0);
            Ok((-a * ln_1mz).exp() * maclaurin(a, c - b, c, w, tol)?)
        }
        Route::OneMinus => one_minus(a, b, c, one - z, ln_1mz, tol),
        Route::Inverse => inverse(a, b, c, one / z, (-z).ln(), tol),
        Route::InverseOneMinus => {
            let w = one / (one - z);
            let b1 = gamma_ratio(&[c, b - a], &[b, c - a]);
            let b2 = gamma_ratio(&[c, a - b], &[a, c - b]);
            let t1 = if b1 == C64::new(0.0, 0.0) {
                b1
            } else {
                b1 * (-a * ln_1mz).exp() * maclaurin(a, c - b, a - b + 1.0, w, tol)?
            };
            let t2 = if b2 == C64::new(0.0, 0.0) {
                b2
            } else {
                b2 * (-b * ln_1mz).exp() * maclaurin(b, c - a, b - a + 1.0, w, tol)?
            };
            Ok(t1 + t2)
        }
        Route::OneMinusInverse => {
            let w = one - one / z;
            let ln_z = z.ln();
            let a1 = gamma_ratio(&[c, c - a - b], &[c - a, c - b]);
            let a2 = gamma_ratio(&[c, a + b - c], &[a, b]);
            let t1 = if a1 == C64::new(0.0, 0.0) {
                a1
            } else {
                a1 * (-a * ln_z).exp() * maclaurin(a, a - c + 1.0, a + b - c + 1.0, w, tol)?
            };
            let t2 = if a2 == C64::new(0.0, 0.0) {
                a2
            } else {
                a2 * ((c - a - b) * ln_1mz + (a - c) * ln_z).exp() * maclaurin(c - a, one - a, c - a - b + 1.0, w, tol)?
            };
            Ok(t1 + t2)
        }
    }
}

/// Continues ₂F₁ from `path[0]` (inside the unit disk) along the polyline.
/// Each Taylor step stays within half the distance to 0 and 1, so the path
/// must keep clear of both and of the cut it is meant to avoid.
fn continuation(a: C64, b: C64, c: C64, path: &[C64], tol: f64) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    let mut z0 = path[0];
    let mut f = maclaurin(a, b, c, z0, tol)?;
    let mut df = a * b / c * maclaurin(a + one, b + one, c + one, z0, tol)?;
    for &target in &path[1..] {
        loop {
            let dist = (target - z0).norm();
            if dist == 0.0 {
                break;
            }
            let reach = STEP_FRACTION * z0.norm().min((z0 - one).norm());
            let last = dist <= reach;
            let z1 = if last { target } else { z0 + (target - z0) * (reach / dist) };
            (f, df) = taylor_step(a, b, c, z0, f, df, z1 - z0, tol)?;
            z0 = z1;
            if last {
                break;
            }
        }
    }
    Ok(f)
}

/// Value and derivative at z0 + w from those at z0, via the Taylor
/// recurrence of z(1−z)F″ + [c − (a+b+1)z]F′ − abF = 0 about z0.
#[allow(clippy::too_many_arguments)]
fn taylor_step(a: C64, b: C64, c: C64, z0: C64, f: C64, df: C64, w: C64, tol: f64) -> Result<(C64, C64)> {
    let p0 = z0 * (1.0 - z0);
    let p1 = 1.0 - 2.0 * z0;
    let q0 = c - (a + b + 1.0) * z0;
    let q1 = -(a + b + 1.0);
    let r = -a * b;
    // terms are carried pre-multiplied by wⁿ to keep them in range near a singular point
    let (mut prev, mut cur) = (f, df * w);
    let mut val = prev + cur;
    let mut der = df;
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let k = n as f64;
        let next = -((p1 * k * (k + 1.0) + q0 * (k + 1.0)) * cur * w + (-k * (k - 1.0) + q1 * k + r) * prev * w * w)
            / (p0 * (k + 1.0) * (k + 2.0));
        let dterm = next * (k + 2.0) / w;
        val += next;
        der += dterm;
        prev = cur;
        cur = next;
        if next.norm() <= tol * val.norm() && dterm.norm() <= tol * der.norm() {
            small += 1;
            if small >= 3 {
                return Ok((val, der));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence(format!("Taylor continuation of 2F1 stalled near z = {z0}")))
}

/// Connection formula around z = 1 with `w = 1 − z` and `ln_w` the chosen branch of ln(1 − z).
fn one_minus(a: C64, b: C64, c: C64, w: C64, ln_w: C64, tol: f64) -> Result<C64> {
    let a1 = gamma_ratio(&[c, c - a - b], &[c - a, c - b]);
    let a2 = gamma_ratio(&[c, a + b - c], &[a, b]);
    let t1 = if a1 == C64::new(0.0, 0.0) { a1 } else { a1 * maclaurin(a, b, a + b - c + 1.0, w, tol)? };
    let t2 = if a2 == C64::new(0.0, 0.0) {
        a2
    } else {
        a2 * ((c - a - b) * ln_w).exp() * maclaurin(c - a, c - b, c - a - b + 1.0, w, tol)?
    };
    Ok(t1 + t2)
}

/// Connection formula around ∞ with `w = 1/z` and `ln_mz` the chosen branch of ln(−z).
fn inverse(a: C64, b: C64, c: C64, w: C64, ln_mz: C64, tol: f64) -> Result<C64> {
    let b1 = gamma_ratio(&[c, b - a], &[b, c - a]);
    let b2 = gamma_ratio(&[c, a - b], &[a, c - b]);
    let t1 = if b1 == C64::new(0.0, 0.0) {
        b1
    } else {
        b1 * (-a * ln_mz).exp() * maclaurin(a, a - c + 1.0, a - b + 1.0, w, tol)?
    };
    let t2 = if b2 == C64::new(0.0, 0.0) {
        b2
    } else {
        b2 * (-b * ln_mz).exp() * maclaurin(b, b - c + 1.0, b - a + 1.0, w, tol)?
    };
    Ok(t1 + t2)
}

fn upper_lip(a: C64, b: C64, c: C64, t: f64, tol: f64) -> Result<C64> {
    let log_cab = integer_distance(c - a - b) < LOG_CASE;
    let log_ab = integer_distance(a - b) < LOG_CASE;
    if t == 1.0 {
        let s = c - a - b;
        if s.re > 0.0 {
            return Ok(gamma_ratio(&[c, s], &[c - a, c - b]));
        }
        return Err(Error::NoConvergence(format!("2F1 diverges at z = 1 (Re(c-a-b) = {})", s.re)));
    }
    let r1 = if log_cab { f64::INFINITY } else { t - 1.0 };
    let r2 = if log_ab { f64::INFINITY } else { 1.0 / t };
    if r1.min(r2) > MAX_RADIUS {
        let path = [C64::new(0.4, 0.4), C64::new(t, 0.6), C64::new(t, 0.0)];
        return continuation(a, b, c, &path, tol);
    }
    if r1 <= r2 {
        let ln_w = C64::new((t - 1.0).ln(), -PI);
        one_minus(a, b, c, C64::new(1.0 - t, 0.0), ln_w, tol)
    } else {
        let ln_mz = C64::new(t.ln(), -PI);
        inverse(a, b, c, C64::new(1.0 / t, 0.0), ln_mz, tol)
    }
}
