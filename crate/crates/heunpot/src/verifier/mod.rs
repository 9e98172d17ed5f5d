//! Independent checks of the constructed solutions.
//!
//! The residual check differentiates ψ(x) numerically and never calls the
//! series derivatives; the ODE oracle integrates the Schrödinger equation
//! directly. Neither shares code with the other.

mod fd;
mod ode;

pub use fd::{first_derivative, schwarzian, second_derivative};
pub use ode::{integrate_schrodinger, ode_integrate, OdeSolution};

use crate::catalog::{potential_value, CoordinateMap, PotentialSpec};
use crate::solution::{exponent_set, heun_params, Sign, Wavefunction};
use crate::{par, Error, Result, C64};
use serde::Serialize;

/// Something that claims to solve ψ″ + k(E − V(x))ψ = 0.
pub trait Schrodinger1D {
    fn psi(&self, x: f64) -> Result<C64>;
    fn potential(&self, x: f64) -> Result<f64>;
    fn energy(&self) -> f64;
    /// k = 2m/ħ².
    fn coupling(&self) -> f64;
}

impl Schrodinger1D for Wavefunction {
    fn psi(&self, x: f64) -> Result<C64> {
        Wavefunction::psi(self, x)
    }
    fn potential(&self, x: f64) -> Result<f64> {
        Wavefunction::potential(self, x)
    }
    fn energy(&self) -> f64 {
        self.energy
    }
    fn coupling(&self) -> f64 {
        Wavefunction::coupling(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub grid: Vec<f64>,
    /// |ψ″ + k(E − V)ψ| at each grid point.
    pub residuals: Vec<f64>,
    pub max_rel_residual: f64,
    /// max |kEψ| over the grid (max |k(E − V)ψ| when E = 0).
    pub scale: f64,
    /// Finite-difference step chosen at each point.
    pub steps: Vec<f64>,
}

/// Residual of the Schrödinger equation on `grid`, with ψ″ from 6th-order central differences.
pub fn schrodinger_residual<S>(psi: &S, grid: &[f64]) -> Result<ResidualReport>
where
    S: Schrodinger1D + Sync,
{
    if grid.is_empty() {
        return Err(Error::GridTooCoarse("empty grid".into()));
    }
    let k = psi.coupling();
    let e = psi.energy();
    let rows = par::try_map(grid, |&x| -> Result<(f64, f64, f64, f64)> {
        let p = psi.psi(x)?;
        let v = psi.potential(x)?;
        let (d2, h) = second_derivative(|t| psi.psi(t), x)?;
        let r = (d2 + k * (e - v) * p).norm();
        Ok((r, (k * e * p).norm(), (k * (e - v) * p).norm(), h))
    })?;
    let mut scale = rows.iter().fold(0.0f64, |m, r| m.max(r.1));
    if scale == 0.0 {
        scale = rows.iter().fold(0.0f64, |m, r| m.max(r.2));
    }
    let residuals: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let max = residuals.iter().fold(0.0f64, |m, &r| m.max(r));
    let max_rel_residual = if scale > 0.0 { max / scale } else { max };
    Ok(ResidualReport {
        grid: grid.to_vec(),
        residuals,
        max_rel_residual,
        scale,
        steps: rows.iter().map(|r| r.3).collect(),
    })
}

/// Bose invariant I = g − f′/2 − f²/4 of the Heun equation at real z.
pub fn bose_invariant(p: &crate::heun::HeunParams, z: f64) -> C64 {
    let z = C64::new(z, 0.0);
    let d = [z - p.a1, z - p.a2, z - p.a3];
    let e = [p.gamma, p.delta, p.epsilon];
    let f: C64 = (0..3).map(|i| e[i] / d[i]).sum();
    let df: C64 = (0..3).map(|i| -e[i] / (d[i] * d[i])).sum();
    let g = (p.alpha * p.beta * z - p.q) / (d[0] * d[1] * d[2]);
    g - 0.5 * df - 0.25 * f * f
}

/// max over `zs` of |ρ²I + ½{z, x} − k(E − V)|, with {z, x} differentiated
/// numerically from z(x) on the branch containing each point.
pub fn bose_consistency_check(spec: &PotentialSpec, energy: f64, zs: &[f64]) -> Result<f64> {
    spec.validate()?;
    let exps = exponent_set(spec, energy, [Sign::Plus; 3])?;
    let heun = heun_params(spec, energy, &exps)?;
    let k = spec.coupling();
    let rows = par::try_map(zs, |&z| -> Result<f64> {
        let b = spec.interval_of(z).ok_or_else(|| Error::BranchViolation(format!("z = {z} is a singular point")))?;
        let map = CoordinateMap::new(spec, b)?;
        let x = map.x_of_z(z)?;
        let s = schwarzian(|t| map.z_of_x(t), x)?;
        let rho = map.rho(z);
        let lhs = rho * rho * bose_invariant(&heun, z) + 0.5 * s;
        let rhs = k * (energy - potential_value(spec, z)?);
        Ok((lhs - rhs).norm())
    })?;
    Ok(rows.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::{build_wavefunction, Scheme};
    use crate::triad::Triad;

    struct Sine {
        e: f64,
        shift: f64,
    }

    impl Schrodinger1D for Sine {
        fn psi(&self, x: f64) -> Result<C64> {
            Ok(C64::new((2.0 * self.e).sqrt() * x, 0.0).sin())
        }
        fn potential(&self, _: f64) -> Result<f64> {
            Ok(0.0)
        }
        fn energy(&self) -> f64 {
            self.e + self.shift
        }
        fn coupling(&self) -> f64 {
            2.0
        }
    }

    #[test]
    fn free_particle_residual() {
        let grid: Vec<f64> = (0..50).map(|i| -3.0 + 0.12 * i as f64).collect();
        let r = schrodinger_residual(&Sine { e: 1.3, shift: 0.0 }, &grid).unwrap();
        assert!(r.max_rel_residual < 1e-9, "{}", r.max_rel_residual);
        let r = schrodinger_residual(&Sine { e: 1.3, shift: 1.0 }, &grid).unwrap();
        assert!(r.max_rel_residual > 0.1);
    }

    #[test]
    fn zero_potential_in_exponential_coordinates() {
        // triad (1,0,0): z = a1 + e^{x/σ}; V ≡ 0 with E > 0 is a free particle
        let s = PotentialSpec::new(Triad::from_doubled([2, 0, 0]).unwrap(), [0.0, -1.0, -2.0], [0.0; 5], 1.0);
        let w = build_wavefunction(&s, 0.8, [Sign::Plus; 3], Scheme::Frobenius).unwrap();
        let r = schrodinger_residual(&w, &w.default_grid(40).unwrap()).unwrap();
        assert!(r.max_rel_residual < 1e-8, "{}", r.max_rel_residual);
    }

    #[test]
    fn bose_examples() {
        let zs = [0.3, 0.7, 1.4, 2.6];
        let s = PotentialSpec::new(
            Triad::from_doubled([2, 0, 0]).unwrap(),
            [0.0, -1.0, -2.0],
            [0.2, -0.3, 0.5, 0.1, 0.7],
            1.3,
        );
        assert!(bose_consistency_check(&s, 0.4, &zs).unwrap() < 1e-6);
        let s = PotentialSpec::new(Triad::from_doubled([2, 2, 2]).unwrap(), [0.0, 1.0, 2.0], [0.0; 5], 0.7);
        assert!(bose_consistency_check(&s, 0.0, &[0.3, 1.5, 2.5, -0.4]).unwrap() < 1e-6);
    }
}
