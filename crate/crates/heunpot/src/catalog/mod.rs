//! The general Heun potentials V(z) = v(z)/r(z) and their coordinate maps.
//!
//! A potential is fixed by a triad (m₁, m₂, m₃), real singular points a₁, a₂, a₃,
//! numerator coefficients v₀..v₄, a scale σ and an origin x₀:
//!
//! ```text
//! dz/dx = ρ(z) = (z−a₁)^{m₁}(z−a₂)^{m₂}(z−a₃)^{m₃}/σ,
//! r(z) = σ²(z−a₁)^{2−2m₁}(z−a₂)^{2−2m₂}(z−a₃)^{2−2m₃}.
//! ```
//!
//! On the real line a half-integer power is read as |z − aᵢ|^{mᵢ}; an interval
//! between singular points is admissible when the half-integer factors have a
//! positive product of signs there, so that ρ² = Π(z−aᵢ)^{2mᵢ}/σ².

mod maps;
pub mod quadrature;

pub use maps::{x_of_z, z_of_x, CoordinateMap, InverseKind};

use crate::triad::Triad;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

fn one() -> f64 {
    1.0
}

/// A potential from the catalog, as read from and written to JSON spec files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub triad: Triad,
    pub a: [f64; 3],
    pub v: [f64; 5],
    pub sigma: f64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
    /// Index of the real interval (between sorted singular points) on which
    /// z(x) is taken; defaults to the admissible interval next to a₁.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<usize>,
}

/// r(z) and v(z) coefficients, lowest degree first.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalPotential {
    pub r: [f64; 5],
    pub v: [f64; 5],
}

impl RationalPotential {
    pub fn r_at(&self, z: f64) -> f64 {
        horner(&self.r, z)
    }

    pub fn v_at(&self, z: f64) -> f64 {
        horner(&self.v, z)
    }
}

pub(crate) fn horner(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * z + k)
}

impl PotentialSpec {
    /// Spec with x₀ = 0 and ħ = m = 1.
    pub fn new(triad: Triad, a: [f64; 3], v: [f64; 5], sigma: f64) -> Self {
        PotentialSpec { triad, a, v, sigma, x0: 0.0, hbar: 1.0, mass: 1.0, branch: None }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: PotentialSpec = serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let finite =
            self.a.iter().chain(self.v.iter()).all(|x| x.is_finite()) && self.sigma.is_finite() && self.x0.is_finite();
        if !finite {
            return Err(Error::InvalidSpec("non-finite number in spec".into()));
        }
        if self.sigma == 0.0 {
            return Err(Error::InvalidSpec("sigma must be nonzero".into()));
        }
        if !(self.hbar > 0.0) || !(self.mass > 0.0) {
            return Err(Error::InvalidSpec("hbar and mass must be positive".into()));
        }
        let [a1, a2, a3] = self.a;
        if a1 == a2 || a1 == a3 || a2 == a3 {
            return Err(Error::CoincidentSingularities);
        }
        if let Some(b) = self.branch {
            if b > 3 {
                return Err(Error::InvalidSpec(format!("branch {b} out of range 0..=3")));
            }
            if !self.is_admissible(b) {
                return Err(Error::InvalidSpec(format!("branch {b} is not admissible for this triad")));
            }
        }
        Ok(())
    }

    /// 2m/ħ².
    pub fn coupling(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }

    /// Singular points sorted ascending.
    pub fn sorted_points(&self) -> [f64; 3] {
        let mut s = self.a;
        s.sort_by(f64::total_cmp);
        s
    }

    /// Bounds of real interval `k` (0..=3) between sorted singular points.
    pub fn interval(&self, k: usize) -> (f64, f64) {
        let s = self.sorted_points();
        match k {
            0 => (f64::NEG_INFINITY, s[0]),
            1 => (s[0], s[1]),
            2 => (s[1], s[2]),
            _ => (s[2], f64::INFINITY),
        }
    }

    /// Index of the interval containing z, `None` at a singular point.
    pub fn interval_of(&self, z: f64) -> Option<usize> {
        let s = self.sorted_points();
        if s.contains(&z) || !z.is_finite() {
            return None;
        }
        Some(s.iter().filter(|&&p| p < z).count())
    }

    fn sign_product(&self, z: f64) -> f64 {
        (0..3).filter(|&i| self.triad.is_half_integer(i)).map(|i| (z - self.a[i]).signum()).product()
    }

    /// Whether the half-integer factors have positive sign product on interval k.
    pub fn is_admissible(&self, k: usize) -> bool {
        let (lo, hi) = self.interval(k);
        let probe = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (false, true) => hi - 1.0,
            (true, false) => lo + 1.0,
            (false, false) => 0.0,
        };
        self.sign_product(probe) > 0.0
    }

    pub fn admissible_intervals(&self) -> Vec<usize> {
        (0..4).filter(|&k| self.is_admissible(k)).collect()
    }

    /// The interval used for z(x): `branch` if set, else the admissible interval
    /// adjacent to a₁ (right side first), else the first admissible one.
    pub fn default_branch(&self) -> usize {
        if let Some(b) = self.branch {
            return b;
        }
        let s = self.sorted_points();
        let pos = s.iter().position(|&p| p == self.a[0]).expect("a1 is a singular point");
        let right = pos + 1;
        let left = pos;
        for k in [right, left] {
            if self.is_admissible(k) {
                return k;
            }
        }
        self.admissible_intervals()[0]
    }

    /// ρ(z) = z'(x) with half-integer powers taken of |z − aᵢ|.
    pub fn rho(&self, z: f64) -> f64 {
        manning_product(&self.a, &self.triad.doubled(), z) / self.sigma
    }

    /// (ρ, ρ_z, ρ_zz) at z.
    pub fn rho_derivatives(&self, z: f64) -> (f64, f64, f64) {
        let r = self.rho(z);
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        for i in 0..3 {
            let d = z - self.a[i];
            s1 += self.triad.m(i) / d;
            s2 += self.triad.m(i) / (d * d);
        }
        (r, r * s1, r * (s1 * s1 - s2))
    }
}

/// Π f_i(z) for doubled exponents; half-integer powers act on |z − aᵢ|.
pub(crate) fn manning_product(a: &[f64; 3], d: &[i8; 3], z: f64) -> f64 {
    let mut p = 1.0;
    for i in 0..3 {
        let x = z - a[i];
        p *= match d[i] {
            2 => x,
            1 => x.abs().sqrt(),
            0 => 1.0,
            -1 => 1.0 / x.abs().sqrt(),
            _ => 1.0 / x,
        };
    }
    p
}

fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, &x) in p.iter().enumerate() {
        for (j, &y) in q.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Expands r(z) = σ² Π (z − aᵢ)^{2−2mᵢ}.
pub fn build_r_poly(spec: &PotentialSpec) -> Result<RationalPotential> {
    let d = spec.triad.doubled();
    let mut poly = vec![spec.sigma * spec.sigma];
    for i in 0..3 {
        let e = 2 - d[i] as i32;
        if e < 0 {
            return Err(Error::NonIntegerExponent);
        }
        for _ in 0..e {
            poly = poly_mul(&poly, &[-spec.a[i], 1.0]);
        }
    }
    if poly.len() > 5 {
        return Err(Error::NonIntegerExponent);
    }
    let mut r = [0.0; 5];
    r[..poly.len()].copy_from_slice(&poly);
    Ok(RationalPotential { r, v: spec.v })
}

/// r(z) from the product form (exact zeros at the singular points).
pub fn r_value(spec: &PotentialSpec, z: f64) -> f64 {
    let d = spec.triad.doubled();
    let mut p = spec.sigma * spec.sigma;
    for i in 0..3 {
        p *= (z - spec.a[i]).powi(2 - d[i] as i32);
    }
    p
}

/// V(z) = v(z)/r(z).
pub fn potential_value(spec: &PotentialSpec, z: f64) -> Result<f64> {
    let r = r_value(spec, z);
    if r == 0.0 {
        return Err(Error::PoleAtZ(z));
    }
    Ok(horner(&spec.v, z) / r)
}

/// Human-readable description of one catalog class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassInfo {
    pub class: usize,
    pub triad: Triad,
    pub potential: &'static str,
    pub map: &'static str,
    pub explicit_inverse: bool,
}

const POTENTIALS: [&str; 11] = [
    "v(z)/sigma^2",
    "v(z)/(sigma^2 (z-a3))",
    "v(z)/(sigma^2 (z-a3)^2)",
    "v(z)/(sigma^2 (z-a3)^3)",
    "v(z)/(sigma^2 (z-a3)^4)",
    "v(z)/(sigma^2 (z-a2)(z-a3))",
    "v(z)/(sigma^2 (z-a2)(z-a3)^2)",
    "v(z)/(sigma^2 (z-a2)(z-a3)^3)",
    "v(z)/(sigma^2 (z-a2)^2 (z-a3)^2)",
    "v(z)/(sigma^2 (z-a1)(z-a2)(z-a3))",
    "v(z)/(sigma^2 (z-a1)(z-a2)(z-a3)^2)",
];

const MAPS: [&str; 11] = [
    "(x-x0)/sigma = sum_i ln|z-ai| / prod_{j!=i}(ai-aj)",
    "(x-x0)/sigma = partial fractions in y = sqrt|z-a3| (artanh/atan terms)",
    "z = (a1 - a2 E)/(1 - E), E = exp((a1-a2)(x-x0)/sigma)",
    "(x-x0)/sigma = partial fractions in y = sqrt|z-a3| (artanh/atan terms)",
    "(x-x0)/sigma = ((a1-a3) ln|z-a1| + (a3-a2) ln|z-a2|)/(a1-a2)",
    "(x-x0)/sigma = [ln(a1-z) - ln((sqrt(a1-a2)sqrt(z-a2) + sqrt(a1-a3)sqrt(z-a3))^2 - (a2-a3)^2)]/sqrt((a1-a2)(a1-a3))",
    "z = a2 + (a1-a2) tanh^2(sqrt(a1-a2)(x-x0)/(2 sigma))",
    "(x-x0)/sigma = integral of dz/((z-a1)|z-a2|^(1/2)|z-a3|^(-1/2)) (numeric)",
    "z = a1 + exp((x-x0)/sigma)",
    "z = lo + (hi-lo)/sn^2(sqrt(hi-lo)(x0-x)/(2 sigma) | (mid-lo)/(hi-lo))",
    "z = a1 + (exp((x-x0)/(2 sigma)) + (a2-a1) exp(-(x-x0)/(2 sigma)))^2/4",
];

/// The 11 catalog classes with their formulas.
pub fn catalog() -> Vec<ClassInfo> {
    crate::triad::classes()
        .into_iter()
        .enumerate()
        .map(|(i, t)| ClassInfo {
            class: i + 1,
            triad: t,
            potential: POTENTIALS[i],
            map: MAPS[i],
            explicit_inverse: matches!(i + 1, 3 | 7 | 9 | 10 | 11),
        })
        .collect()
}

/// A ready-to-edit spec for each class (a = (0, 1, 2), zero potential, σ = 1).
pub fn template(class: usize) -> PotentialSpec {
    let t = crate::triad::classes()[class - 1];
    PotentialSpec::new(t, [0.0, 1.0, 2.0], [0.0; 5], 1.0)
}
