//! General Heun equation
//!
//! ```text
//! u'' + (γ/(z−a₁) + δ/(z−a₂) + ε/(z−a₃)) u' + (αβ z − q)/((z−a₁)(z−a₂)(z−a₃)) u = 0,
//! ```
//!
//! with γ + δ + ε = α + β + 1. Series evaluation works in canonical position
//! (a₁, a₂, a₃) = (0, 1, a); [`to_canonical`] moves general parameters there.

mod expansion;
mod frobenius;
mod termination;

pub use expansion::{hypergeometric_expansion_eval, hypergeometric_expansion_with_derivative};
pub use frobenius::{frobenius_eval, frobenius_with_derivative, SeriesSolution};
pub use termination::{frobenius_termination, hypergeom_termination, TerminationRoot};

use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};

const FUCHS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeunParams {
    pub a1: C64,
    pub a2: C64,
    pub a3: C64,
    pub q: C64,
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub delta: C64,
    pub epsilon: C64,
}

/// Which local solution at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MuChoice {
    /// μ = 0
    Zero,
    /// μ = 1 − γ
    OneMinusGamma,
}

/// Which parameter plays γ₀ in the ₂F₁(α, β; γ₀ − n; z) expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gamma0Choice {
    Gamma,
    Alpha,
    Beta,
}

/// Affine map z ↦ (z − origin)/scale onto canonical position.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub origin: C64,
    pub scale: C64,
}

impl AffineMap {
    pub fn apply(&self, z: C64) -> C64 {
        (z - self.origin) / self.scale
    }

    pub fn invert(&self, t: C64) -> C64 {
        self.origin + self.scale * t
    }
}

impl HeunParams {
    /// Canonical parameters with ε fixed by the Fuchs relation.
    pub fn canonical(a: C64, q: C64, alpha: C64, beta: C64, gamma: C64, delta: C64) -> Self {
        let epsilon = alpha + beta + 1.0 - gamma - delta;
        HeunParams { a1: C64::new(0.0, 0.0), a2: C64::new(1.0, 0.0), a3: a, q, alpha, beta, gamma, delta, epsilon }
    }

    /// Canonical parameters with δ fixed by the Fuchs relation.
    pub fn canonical_with_epsilon(a: C64, q: C64, alpha: C64, beta: C64, gamma: C64, epsilon: C64) -> Self {
        let mut p = Self::canonical(a, q, alpha, beta, gamma, C64::new(0.0, 0.0));
        p.delta = alpha + beta + 1.0 - gamma - epsilon;
        p.epsilon = epsilon;
        p
    }

    /// γ + δ + ε − α − β − 1.
    pub fn fuchs_defect(&self) -> C64 {
        self.gamma + self.delta + self.epsilon - self.alpha - self.beta - 1.0
    }

    pub fn validate(&self) -> Result<()> {
        let d = [(self.a1 - self.a2).norm(), (self.a1 - self.a3).norm(), (self.a2 - self.a3).norm()];
        if d.contains(&0.0) {
            return Err(Error::CoincidentSingularities);
        }
        let scale =
            1.0 + self.alpha.norm() + self.beta.norm() + self.gamma.norm() + self.delta.norm() + self.epsilon.norm();
        if self.fuchs_defect().norm() > FUCHS_TOL * scale {
            return Err(Error::InvalidSpec(format!("Fuchs relation violated by {}", self.fuchs_defect())));
        }
        Ok(())
    }

    pub fn is_canonical(&self) -> bool {
        self.a1 == C64::new(0.0, 0.0) && self.a2 == C64::new(1.0, 0.0)
    }

    /// a₃ of a canonical parameter set.
    pub fn a(&self) -> C64 {
        self.a3
    }

    pub(crate) fn require_canonical(&self) -> Result<()> {
        if !self.is_canonical() {
            return Err(Error::InvalidSpec("Heun parameters are not in canonical position (0, 1, a)".into()));
        }
        self.validate()
    }

    /// Left-hand side of the Heun equation for given u, u', u'' at z.
    pub fn apply(&self, z: C64, u: C64, du: C64, d2u: C64) -> C64 {
        let (z1, z2, z3) = (z - self.a1, z - self.a2, z - self.a3);
        d2u + (self.gamma / z1 + self.delta / z2 + self.epsilon / z3) * du
            + (self.alpha * self.beta * z - self.q) / (z1 * z2 * z3) * u
    }

    /// Largest term magnitude of [`HeunParams::apply`], used to make residuals relative.
    pub fn apply_scale(&self, z: C64, u: C64, du: C64, d2u: C64) -> f64 {
        let (z1, z2, z3) = (z - self.a1, z - self.a2, z - self.a3);
        let t1 = d2u.norm();
        let t2 = ((self.gamma / z1 + self.delta / z2 + self.epsilon / z3) * du).norm();
        let t3 = ((self.alpha * self.beta * z - self.q) / (z1 * z2 * z3) * u).norm();
        t1.max(t2).max(t3)
    }
}

/// Moves a₁, a₂, a₃ to 0, 1, a with a = (a₃ − a₁)/(a₂ − a₁).
///
/// The exponent parameters are invariant; the accessory parameter becomes
/// q_c = (q − αβ a₁)/(a₂ − a₁).
pub fn to_canonical(p: &HeunParams) -> Result<(HeunParams, AffineMap)> {
    p.validate()?;
    let scale = p.a2 - p.a1;
    let map = AffineMap { origin: p.a1, scale };
    let mut c = *p;
    c.a1 = C64::new(0.0, 0.0);
    c.a2 = C64::new(1.0, 0.0);
    c.a3 = (p.a3 - p.a1) / scale;
    c.q = (p.q - p.alpha * p.beta * p.a1) / scale;
    Ok((c, map))
}

/// Stopping rule shared by the series: three consecutive small terms.
#[derive(Default)]
pub(crate) struct SmallTerms {
    run: usize,
}

impl SmallTerms {
    pub(crate) fn push(&mut self, term: f64, sum: f64, tol: f64) -> bool {
        if term <= tol * sum {
            self.run += 1;
        } else {
            self.run = 0;
        }
        self.run >= 3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn canonical_examples() {
        let p = HeunParams::canonical(c(0.5, 0.0), c(0.2, 0.0), c(0.3, 0.0), c(0.4, 0.0), c(1.2, 0.0), c(0.7, 0.0));
        let (q, m) = to_canonical(&p).unwrap();
        assert_eq!(q, p);
        assert_eq!(m.apply(c(0.3, 0.1)), c(0.3, 0.1));

        let mut p = p;
        p.a1 = c(-1.0, 0.0);
        p.a2 = c(1.0, 0.0);
        p.a3 = c(0.0, 0.0);
        let (q, _) = to_canonical(&p).unwrap();
        assert!((q.a() - c(0.5, 0.0)).norm() < 1e-15);

        p.a1 = c(0.0, 0.0);
        p.a2 = c(2.0, 0.0);
        p.a3 = c(4.0, 0.0);
        let (q, m) = to_canonical(&p).unwrap();
        assert!((q.a() - c(2.0, 0.0)).norm() < 1e-15);
        assert!((m.apply(c(1.0, 0.0)) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn coincident_singularities() {
        let mut p = HeunParams::canonical(c(0.5, 0.0), c(0.2, 0.0), c(0.3, 0.0), c(0.4, 0.0), c(1.2, 0.0), c(0.7, 0.0));
        p.a3 = p.a2;
        assert_eq!(to_canonical(&p).unwrap_err(), Error::CoincidentSingularities);
    }

    #[test]
    fn affine_map_preserves_the_equation() {
        // H_canon(t(z)) must satisfy the general-position equation.
        let mut p =
            HeunParams::canonical(c(0.0, 0.0), c(0.3, -0.2), c(0.4, 0.1), c(-0.6, 0.2), c(1.3, 0.1), c(0.6, -0.3));
        p.a1 = c(0.5, 0.0);
        p.a2 = c(2.5, 0.0);
        p.a3 = c(-1.5, 0.0);
        let (cp, map) = to_canonical(&p).unwrap();
        let s = map.scale;
        let z = c(0.9, 0.1);
        let (u, du, d2u) = frobenius_with_derivative(&cp, MuChoice::Zero, map.apply(z), crate::SERIES_TOL).unwrap();
        let (du, d2u) = (du / s, d2u / (s * s));
        let res = p.apply(z, u, du, d2u).norm() / p.apply_scale(z, u, du, d2u);
        assert!(res < 1e-12, "{res}");
    }
}
