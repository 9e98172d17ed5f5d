//! The conditional potential V = V₀ + V₁/z + KV₃²/z² + V₃/z³ with
//! z = √(1 + e^{2(x−x₀)/σ}) and K = 2mσ²/ħ², whose fundamental solutions are
//! ψ = (z+1)^{α₁}(z−1)^{α₂} u(z),
//! u = F(α−1, β; γ−1; t) + (α₂ − α₁ + βz − KV₃)/(2(γ−1)) F(α, β+1; γ; t), t = (z+1)/2.

use super::{heun_params, ExponentSet, Sign, Wavefunction};
use crate::catalog::{CoordinateMap, PotentialSpec};
use crate::special::{gauss_2f1_upper, nonpositive_integer, HypergeometricArgs};
use crate::triad::Triad;
use crate::{Error, Result, C64, SERIES_TOL};
use serde::{Deserialize, Serialize};

/// V₃ of the four plotted curves a, b, c, d.
pub const FIG2_V3: [f64; 4] = [-1.05, -1.0, -0.9, -0.85];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalPotential {
    pub v0: f64,
    pub v1: f64,
    pub v3: f64,
    pub sigma: f64,
    pub x0: f64,
    pub hbar: f64,
    pub mass: f64,
}

impl ConditionalPotential {
    /// ħ = m = 1.
    pub fn new(v0: f64, v1: f64, v3: f64, sigma: f64, x0: f64) -> Self {
        ConditionalPotential { v0, v1, v3, sigma, x0, hbar: 1.0, mass: 1.0 }
    }

    /// Parameters of the plotted family: V₀ = x₀ = 0, V₁ = −1, ħ = m = σ = 1.
    pub fn fig2(v3: f64) -> Self {
        Self::new(0.0, -1.0, v3, 1.0, 0.0)
    }

    /// K = 2mσ²/ħ².
    pub fn k(&self) -> f64 {
        2.0 * self.mass * self.sigma * self.sigma / (self.hbar * self.hbar)
    }

    /// The z⁻² coefficient, fixed at KV₃².
    pub fn v2(&self) -> f64 {
        self.k() * self.v3 * self.v3
    }

    pub fn z_of_x(&self, x: f64) -> f64 {
        (1.0 + (2.0 * (x - self.x0) / self.sigma).exp()).sqrt()
    }

    pub fn potential_z(&self, z: f64) -> f64 {
        self.v0 + self.v1 / z + self.v2() / (z * z) + self.v3 / (z * z * z)
    }

    pub fn potential(&self, x: f64) -> f64 {
        self.potential_z(self.z_of_x(x))
    }

    /// The same potential as a catalog spec: triad (1, 1, −1) at a = (−1, 1, 0), branch z > 1.
    pub fn to_spec(&self) -> PotentialSpec {
        let s2 = self.sigma * self.sigma;
        PotentialSpec {
            triad: Triad::from_doubled([2, 2, -2]).expect("permissible"),
            a: [-1.0, 1.0, 0.0],
            v: [0.0, s2 * self.v3, s2 * self.v2(), s2 * self.v1, s2 * self.v0],
            sigma: self.sigma,
            x0: self.x0,
            hbar: self.hbar,
            mass: self.mass,
            branch: Some(3),
        }
    }

    /// (α₀, α₁, α₂) for signs in that order; `Plus` is the principal square root.
    pub fn exponents(&self, energy: f64, signs: [Sign; 3]) -> [C64; 3] {
        let k = self.k();
        let h = 0.25 * k;
        let e = energy - self.v0;
        let kv = k * self.v3 * self.v3;
        let sq = |x: f64| C64::new(x, 0.0).sqrt();
        [
            signs[0].value() * sq(-k * e),
            signs[1].value() * sq(-h * (e + self.v1 + self.v3 - kv)),
            signs[2].value() * sq(-h * (e - self.v1 - self.v3 - kv)),
        ]
    }
}

/// u and du/dz for the two-₂F₁ combination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct TwoF1 {
    alpha: C64,
    beta: C64,
    gamma: C64,
    a1: C64,
    a2: C64,
    kv3: f64,
    params: ConditionalPotential,
}

impl TwoF1 {
    pub(crate) fn z_of_x(&self, x: f64) -> Result<f64> {
        let z = self.params.z_of_x(x);
        if z > 1.0 && z.is_finite() {
            Ok(z)
        } else {
            Err(Error::OutOfBranch(x))
        }
    }

    pub(crate) fn eval(&self, z: f64) -> Result<(C64, C64)> {
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        let t = C64::new(0.5 * (z + 1.0), 0.0);
        let f = |p: C64, q: C64, r: C64| gauss_2f1_upper(&HypergeometricArgs::new(p, q, r, t), SERIES_TOL);
        let f1 = f(a - 1.0, b, g - 1.0)?;
        let f2 = f(a, b + 1.0, g)?;
        let f3 = f(a + 1.0, b + 2.0, g + 1.0)?;
        let coef = (self.a2 - self.a1 + b * z - self.kv3) / (2.0 * (g - 1.0));
        let u = f1 + coef * f2;
        let du = 0.5 * ((a - 1.0) * b / (g - 1.0) * f2 + coef * a * (b + 1.0) / g * f3) + b / (2.0 * (g - 1.0)) * f2;
        Ok((u, du))
    }
}

/// Fundamental solution for signs of (α₀, α₁, α₂).
pub fn closed_form_solution(params: &ConditionalPotential, energy: f64, signs: [Sign; 3]) -> Result<Wavefunction> {
    let [a0, a1, a2] = params.exponents(energy, signs);
    let alpha = a1 + a2 - a0;
    let beta = a1 + a2 + a0;
    let gamma = 1.0 + 2.0 * a1;
    if (gamma - 1.0).norm() < 1e-13 || nonpositive_integer(gamma - 1.0, 1e-13).is_some() {
        return Err(Error::GammaDegenerate(gamma));
    }
    let spec = params.to_spec();
    spec.validate()?;
    let exps = ExponentSet {
        alpha: [a1, a2, C64::new(0.0, 0.0)],
        signs: [signs[1], signs[2], Sign::Minus],
        degenerate: [a1.norm() < 1e-12, a2.norm() < 1e-12, false],
    };
    let heun = heun_params(&spec, energy, &exps)?;
    let map = CoordinateMap::for_branch(&spec)?;
    let inner = TwoF1 { alpha, beta, gamma, a1, a2, kv3: params.k() * params.v3, params: *params };
    Ok(Wavefunction::from_parts(spec, energy, exps, heun, map, inner))
}

/// One curve of the plotted family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fig2Curve {
    pub label: char,
    pub v3: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

/// The four curves sampled at x = −5 + 0.025k, k = 0..400.
pub fn fig2_curves() -> Vec<Fig2Curve> {
    let x: Vec<f64> = (0..400).map(|k| -5.0 + 0.025 * k as f64).collect();
    FIG2_V3
        .iter()
        .zip(['a', 'b', 'c', 'd'])
        .map(|(&v3, label)| {
            let p = ConditionalPotential::fig2(v3);
            Fig2Curve { label, v3, v: crate::par::map(&x, |&x| p.potential(x)), x: x.clone() }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::potential_value;

    #[test]
    fn spec_reproduces_potential() {
        let p = ConditionalPotential::new(0.3, -0.7, 0.45, 1.3, 0.2);
        let s = p.to_spec();
        for x in [-3.0, -0.5, 0.0, 1.7, 4.0] {
            let z = p.z_of_x(x);
            assert!((potential_value(&s, z).unwrap() - p.potential(x)).abs() < 1e-13);
            let w = closed_form_solution(&p, 0.9, [Sign::Plus; 3]).unwrap();
            assert!((w.z_of_x(x).unwrap() - z).abs() < 1e-15);
            assert!((w.map().z_of_x(x).unwrap() - z).abs() < 1e-12 * z);
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let p = ConditionalPotential::new(0.0, -1.0, -0.9, 1.0, 0.0);
        let w = closed_form_solution(&p, 1.5, [Sign::Plus, Sign::Minus, Sign::Plus]).unwrap();
        for x in [-2.0, 0.3, 2.5] {
            let h = 1e-5;
            let fd = (w.psi(x + h).unwrap() - w.psi(x - h).unwrap()) / (2.0 * h);
            let (_, d) = w.psi_and_derivative(x).unwrap();
            assert!((fd - d).norm() < 1e-7 * d.norm().max(1e-3), "{fd} {d}");
        }
    }

    #[test]
    fn fig2_shape() {
        let c = fig2_curves();
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|c| c.x.len() == 400 && c.v.len() == 400));
        let x = -2.0f64;
        let z = (1.0 + (2.0 * x).exp()).sqrt();
        let v = -1.0 / z + 2.0 * 1.0 / (z * z) - 1.0 / (z * z * z);
        assert!((c[1].v[120] - v).abs() < 1e-14);
    }
}
