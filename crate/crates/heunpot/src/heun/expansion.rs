//! Expansion of the Heun function in Gauss functions ₂F₁(α, β; γ₀ − n; z).
//!
//! The coefficients obey a three-term recurrence. When the series does not
//! terminate the coefficients decay only algebraically and the partial sums
//! converge to a solution of an inhomogeneous equation, so the sum is accepted
//! only when the recurrence boundary term |c_{N+1}R_{N+1}| + |c_N P_N| has
//! vanished along with the terms themselves.

use super::{Gamma0Choice, HeunParams, SmallTerms};
use crate::special::{gauss_2f1_upper, nonpositive_integer, HypergeometricArgs};
use crate::{Error, Result, C64};

const MAX_TERMS: usize = 10_000;
/// Window over which the boundary term must at least halve.
const STALL_WINDOW: usize = 100;

#[derive(Clone, Copy)]
pub(crate) struct ExpansionRecurrence {
    pub a: C64,
    pub q: C64,
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub epsilon: C64,
    pub g0: C64,
}

impl ExpansionRecurrence {
    pub fn new(p: &HeunParams, choice: Gamma0Choice) -> Self {
        let g0 = match choice {
            Gamma0Choice::Gamma => p.gamma,
            Gamma0Choice::Alpha => p.alpha,
            Gamma0Choice::Beta => p.beta,
        };
        ExpansionRecurrence { a: p.a3, q: p.q, alpha: p.alpha, beta: p.beta, gamma: p.gamma, epsilon: p.epsilon, g0 }
    }

    pub fn r(&self, n: usize) -> C64 {
        let n = n as f64;
        let g = self.g0 - n;
        self.a / g * (self.gamma - g) * (self.alpha - g) * (self.beta - g)
    }

    /// Qₙ without the −q term.
    pub fn q_tilde(&self, n: usize) -> C64 {
        let n = n as f64;
        let s = self.gamma - self.g0 + n;
        (1.0 - self.a) * (self.epsilon + s) * (self.g0 - n - 1.0)
            + self.a * s * (self.alpha + self.beta - self.g0 + n)
            + self.a * self.alpha * self.beta
    }

    pub fn q(&self, n: usize) -> C64 {
        self.q_tilde(n) - self.q
    }

    pub fn p(&self, n: usize) -> C64 {
        let n = n as f64;
        (self.a - 1.0) * (self.epsilon + self.gamma - self.g0 + n) * (self.g0 - n - 1.0)
    }
}

/// Terms and derivative terms of Σ cₙ ₂F₁(α, β; γ₀ − n; z), normalised so u(0) = 1.
fn sum(p: &HeunParams, choice: Gamma0Choice, z: C64, tol: f64, derivative: bool) -> Result<(C64, C64)> {
    p.require_canonical()?;
    let rec = ExpansionRecurrence::new(p, choice);
    let zero = C64::new(0.0, 0.0);
    let tol = tol.max(1e-17);
    let f = |n: usize| -> Result<(C64, C64)> {
        let c = rec.g0 - n as f64;
        if nonpositive_integer(c, 1e-13).is_some() {
            return Err(Error::RecurrenceBreakdown(n));
        }
        let v = gauss_2f1_upper(&HypergeometricArgs::new(rec.alpha, rec.beta, c, z), tol)?;
        let d = if derivative {
            rec.alpha * rec.beta / c
                * gauss_2f1_upper(&HypergeometricArgs::new(rec.alpha + 1.0, rec.beta + 1.0, c + 1.0, z), tol)?
        } else {
            zero
        };
        Ok((v, d))
    };
    let (f0, d0) = f(0)?;
    let mut c = vec![C64::new(1.0, 0.0)];
    let mut total = f0;
    let mut dtotal = d0;
    let mut norm = C64::new(1.0, 0.0);
    let mut stop = SmallTerms::default();
    let size = |n: usize| rec.r(n).norm() + rec.q_tilde(n).norm() + rec.q.norm() + rec.p(n).norm();
    let mut scale = size(0);
    let mut boundary_hist: Vec<f64> = Vec::new();
    let mut cmax = 1.0f64;
    for n in 1..MAX_TERMS {
        let rn = rec.r(n);
        let num = rec.q(n - 1) * c[n - 1] + if n >= 2 { rec.p(n - 2) * c[n - 2] } else { zero };
        if rn == zero || !rn.is_finite() {
            return Err(Error::RecurrenceBreakdown(n));
        }
        let cn = -num / rn;
        c.push(cn);
        norm += cn;
        scale = scale.max(c[n - 1].norm() * size(n - 1));
        let boundary = (cn * rn).norm() + (c[n - 1] * rec.p(n - 1)).norm();
        boundary_hist.push(boundary);

        cmax = cmax.max(cn.norm());
        let settled = boundary <= 1e-13 * scale;
        // Terminated: cₙ and the coupling back to cₙ₋₁ both vanish, so every later
        // coefficient does too and the (possibly singular) later terms are skipped.
        let terminated = settled && cn.norm() <= 1e-11 * cmax;
        let mut small = false;
        if !terminated {
            let (fv, dv) = f(n)?;
            let term = cn * fv;
            total += term;
            dtotal += cn * dv;
            small = stop.push(term.norm(), total.norm(), tol);
        }
        if terminated || small && settled {
            if norm == zero {
                return Err(Error::NoConvergence("expansion sums to zero at the origin".into()));
            }
            return Ok((total / norm, dtotal / norm));
        }
        if n >= 2 * STALL_WINDOW && boundary > 0.5 * boundary_hist[n - 1 - STALL_WINDOW] {
            return Err(Error::NoConvergence(format!(
                "hypergeometric expansion coefficients decay too slowly (boundary term {boundary:.3e} after {n} terms); \
                 the series does not represent a Heun solution"
            )));
        }
    }
    Err(Error::NoConvergence(format!("hypergeometric expansion did not settle within {MAX_TERMS} terms")))
}

/// Heun function as Σ cₙ ₂F₁(α, β; γ₀ − n; z), normalised to H(0) = 1.
///
/// For real z > 1 the Gauss functions are taken on the upper lip of their cut.
pub fn hypergeometric_expansion_eval(p: &HeunParams, choice: Gamma0Choice, z: C64, tol: f64) -> Result<C64> {
    Ok(sum(p, choice, z, tol, false)?.0)
}

/// (H, H') from the expansion.
pub fn hypergeometric_expansion_with_derivative(
    p: &HeunParams,
    choice: Gamma0Choice,
    z: C64,
    tol: f64,
) -> Result<(C64, C64)> {
    sum(p, choice, z, tol, true)
}
