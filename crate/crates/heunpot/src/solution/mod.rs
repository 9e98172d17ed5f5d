//! From a potential and an energy to Heun parameters and wavefunctions.
//!
//! ψ(z) = Π |z − aᵢ|^{αᵢ} · H(z), where each αᵢ is one of the two roots of
//! αᵢ² + (mᵢ − 1)αᵢ + Cᵢ = 0 and H solves the general Heun equation with
//! γ = 2α₁ + m₁, δ = 2α₂ + m₂, ε = 2α₃ + m₃. The sign of the real factor
//! (z − aᵢ) is taken out of the power, which only changes ψ by a constant.

mod closed_form;
mod reduction;

pub use closed_form::{closed_form_solution, fig2_curves, ConditionalPotential, Fig2Curve, FIG2_V3};
pub use reduction::{cip_reduction_check, cip_restrict, cip_spec, CipReport};

use crate::catalog::{build_r_poly, r_value, CoordinateMap, PotentialSpec};
use crate::heun::{
    frobenius_eval, frobenius_with_derivative, hypergeometric_expansion_with_derivative, to_canonical, Gamma0Choice,
    HeunParams, MuChoice,
};
use crate::{par, Error, Result, C64, SERIES_TOL};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest series cancellation ratio accepted at the far end of a Frobenius grid.
const GRID_CONDITION: f64 = 100.0;

/// Choice of root in the exponent quadratic: `Plus` takes +√ of the discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn all() -> Vec<[Sign; 3]> {
        let s = [Sign::Plus, Sign::Minus];
        let mut out = Vec::with_capacity(8);
        for a in s {
            for b in s {
                for c in s {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Parses a string such as `+-+`.
pub fn parse_signs(s: &str) -> Result<[Sign; 3]> {
    let v: Vec<Sign> = s
        .chars()
        .map(|c| match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            _ => Err(Error::InvalidSpec(format!("bad sign character {c:?} in {s:?}"))),
        })
        .collect::<Result<_>>()?;
    v.try_into().map_err(|_| Error::InvalidSpec(format!("expected three signs, got {s:?}")))
}

pub fn format_signs(s: &[Sign; 3]) -> String {
    s.iter().map(|x| x.to_string()).collect()
}

/// Prefactor exponents α₁, α₂, α₃ for one sign choice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentSet {
    pub alpha: [C64; 3],
    pub signs: [Sign; 3],
    /// The two roots at aᵢ coincide (the second solution is logarithmic).
    pub degenerate: [bool; 3],
}

impl ExponentSet {
    /// |(1 − mᵢ − αᵢ)αᵢ Π(aᵢ − aₙ)² − k(E r(aᵢ) − v(aᵢ))| relative to the larger side.
    pub fn residuals(&self, spec: &PotentialSpec, energy: f64) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            let (num, den) = exponent_parts(spec, energy, i);
            let a = self.alpha[i];
            let lhs = (1.0 - spec.triad.m(i) - a) * a * den;
            out[i] = (lhs - num).norm() / (1.0 + lhs.norm().max(num.abs()));
        }
        out
    }
}

/// k(E r(aᵢ) − v(aᵢ)) and Π_{n≠i}(aᵢ − aₙ)².
fn exponent_parts(spec: &PotentialSpec, energy: f64, i: usize) -> (f64, f64) {
    let ai = spec.a[i];
    let v = crate::catalog::horner(&spec.v, ai);
    let num = spec.coupling() * (energy * r_value(spec, ai) - v);
    let den: f64 = (0..3).filter(|&n| n != i).map(|n| (ai - spec.a[n]).powi(2)).product();
    (num, den)
}

/// Cᵢ in αᵢ² + (mᵢ − 1)αᵢ + Cᵢ = 0.
pub fn exponent_constants(spec: &PotentialSpec, energy: f64) -> [f64; 3] {
    std::array::from_fn(|i| {
        let (num, den) = exponent_parts(spec, energy, i);
        num / den
    })
}

pub fn exponent_set(spec: &PotentialSpec, energy: f64, signs: [Sign; 3]) -> Result<ExponentSet> {
    spec.validate()?;
    let c = exponent_constants(spec, energy);
    let mut alpha = [C64::new(0.0, 0.0); 3];
    let mut degenerate = [false; 3];
    for i in 0..3 {
        let b = 1.0 - spec.triad.m(i);
        let disc = C64::new(b * b - 4.0 * c[i], 0.0);
        degenerate[i] = disc.norm() <= 1e-12 * (b * b + 4.0 * c[i].abs()).max(1.0);
        alpha[i] = (b + signs[i].value() * disc.sqrt()) / 2.0;
    }
    Ok(ExponentSet { alpha, signs, degenerate })
}

/// All eight sign combinations, in the order of [`Sign::all`].
pub fn exponents(spec: &PotentialSpec, energy: f64) -> Result<Vec<ExponentSet>> {
    Sign::all().into_iter().map(|s| exponent_set(spec, energy, s)).collect()
}

/// General-position Heun parameters at (a₁, a₂, a₃) for the given exponents.
///
/// α and β are the roots of X² − (γ + δ + ε − 1)X + αβ with
/// αβ = S² + S(M − 1) + k(E r₄ − v₄), S = Σαᵢ, M = Σmᵢ; α has the smaller real part.
pub fn heun_params(spec: &PotentialSpec, energy: f64, exps: &ExponentSet) -> Result<HeunParams> {
    spec.validate()?;
    let k = spec.coupling();
    let m = spec.triad.exponents();
    let [a1, a2, a3] = spec.a;
    let [x1, x2, x3] = exps.alpha;
    let r = build_r_poly(spec)?.r;
    let v = spec.v;
    let gamma = 2.0 * x1 + m[0];
    let delta = 2.0 * x2 + m[1];
    let epsilon = 2.0 * x3 + m[2];
    let s = x1 + x2 + x3;
    let big_m = m[0] + m[1] + m[2];
    let product = s * s + s * (big_m - 1.0) + k * (energy * r[4] - v[4]);
    let sum = gamma + delta + epsilon - 1.0;
    let root = (sum * sum - 4.0 * product).sqrt();
    let (mut alpha, mut beta) = ((sum - root) / 2.0, (sum + root) / 2.0);
    if alpha.re > beta.re {
        std::mem::swap(&mut alpha, &mut beta);
    }
    let asum = a1 + a2 + a3;
    let pair = |p: C64, q: C64, mp: f64, mq: f64, own: C64, mo: f64| {
        (p + q) * (p + q + mp + mq - 1.0) - own * (own + mo - 1.0)
    };
    let q = a1 * pair(x2, x3, m[1], m[2], x1, m[0])
        + a2 * pair(x1, x3, m[0], m[2], x2, m[1])
        + a3 * pair(x1, x2, m[0], m[1], x3, m[2])
        - k * (energy * (r[3] + asum * r[4]) - (v[3] + asum * v[4]));
    let p = HeunParams {
        a1: C64::new(a1, 0.0),
        a2: C64::new(a2, 0.0),
        a3: C64::new(a3, 0.0),
        q,
        alpha,
        beta,
        gamma,
        delta,
        epsilon,
    };
    p.validate()?;
    Ok(p)
}

/// How H is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Power series at a singular point that ends the branch interval.
    Frobenius,
    /// Terminating expansion in ₂F₁(α, β; γ − n; t) about a₁.
    #[serde(rename = "hypexp")]
    HypergeometricExpansion,
    /// Expansion if it terminates on this spec, Frobenius otherwise.
    Auto,
    /// Two-₂F₁ solution of the conditional potential.
    ClosedForm,
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frobenius" => Ok(Scheme::Frobenius),
            "hypexp" => Ok(Scheme::HypergeometricExpansion),
            "auto" => Ok(Scheme::Auto),
            "closed-form" => Ok(Scheme::ClosedForm),
            _ => Err(Error::InvalidSpec(format!("unknown scheme {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    /// H(t) with t = (z − origin)/scale and `canonical` in (0, 1, a) position.
    Heun {
        canonical: HeunParams,
        origin: f64,
        scale: f64,
    },
    TwoF1(closed_form::TwoF1),
}

/// ψ for one (spec, E, sign choice).
#[derive(Clone, Debug, PartialEq)]
pub struct Wavefunction {
    pub spec: PotentialSpec,
    pub energy: f64,
    pub exps: ExponentSet,
    pub heun: HeunParams,
    pub scheme: Scheme,
    map: CoordinateMap,
    kind: Kind,
}

/// Builds ψ on the spec's branch. `Scheme::ClosedForm` is only produced by
/// [`closed_form_solution`].
pub fn build_wavefunction(spec: &PotentialSpec, energy: f64, signs: [Sign; 3], scheme: Scheme) -> Result<Wavefunction> {
    spec.validate()?;
    let map = CoordinateMap::for_branch(spec)?;
    let exps = exponent_set(spec, energy, signs)?;
    let heun = heun_params(spec, energy, &exps)?;
    let make = |scheme: Scheme| -> Result<Wavefunction> {
        let kind = match scheme {
            Scheme::Frobenius => frobenius_kind(&heun, &map)?,
            Scheme::HypergeometricExpansion => {
                let (canonical, m) = to_canonical(&heun)?;
                Kind::Heun { canonical, origin: m.origin.re, scale: m.scale.re }
            }
            _ => unreachable!(),
        };
        Ok(Wavefunction { spec: spec.clone(), energy, exps, heun, scheme, map: map.clone(), kind })
    };
    match scheme {
        Scheme::Frobenius | Scheme::HypergeometricExpansion => make(scheme),
        Scheme::Auto => {
            let w = make(Scheme::HypergeometricExpansion)?;
            if w.psi_z(map.reference_point()).is_ok() {
                Ok(w)
            } else {
                make(Scheme::Frobenius)
            }
        }
        Scheme::ClosedForm => {
            Err(Error::InvalidSpec("the closed-form scheme is built with closed_form_solution".into()))
        }
    }
}

/// Frobenius about the singular point that bounds the branch (a₁ when it does).
fn frobenius_kind(heun: &HeunParams, map: &CoordinateMap) -> Result<Kind> {
    let (lo, hi) = map.interval();
    let pts = [heun.a1, heun.a2, heun.a3];
    let params = [heun.gamma, heun.delta, heun.epsilon];
    let ends: Vec<usize> = (0..3).filter(|&i| pts[i].re == lo || pts[i].re == hi).collect();
    let j = if ends.contains(&0) { 0 } else { ends[0] };
    let others: Vec<usize> = (0..3).filter(|&i| i != j).collect();
    let (k, l) = (others[0], others[1]);
    let permuted = HeunParams {
        a1: pts[j],
        a2: pts[k],
        a3: pts[l],
        gamma: params[j],
        delta: params[k],
        epsilon: params[l],
        ..*heun
    };
    let (canonical, m) = to_canonical(&permuted)?;
    Ok(Kind::Heun { canonical, origin: m.origin.re, scale: m.scale.re })
}

impl Wavefunction {
    pub(crate) fn from_parts(
        spec: PotentialSpec,
        energy: f64,
        exps: ExponentSet,
        heun: HeunParams,
        map: CoordinateMap,
        two_f1: closed_form::TwoF1,
    ) -> Self {
        Wavefunction { spec, energy, exps, heun, scheme: Scheme::ClosedForm, map, kind: Kind::TwoF1(two_f1) }
    }

    pub fn map(&self) -> &CoordinateMap {
        &self.map
    }

    /// 2m/ħ².
    pub fn coupling(&self) -> f64 {
        self.spec.coupling()
    }

    /// Centre of the series and its radius of convergence in z, for the Frobenius scheme.
    pub fn series_disk(&self) -> Option<(f64, f64)> {
        match (&self.kind, self.scheme) {
            (Kind::Heun { canonical, origin, scale }, Scheme::Frobenius) => {
                Some((*origin, scale.abs() * canonical.a3.norm().min(1.0)))
            }
            _ => None,
        }
    }

    /// Cancellation ratio of the Frobenius sum at z; 1 for other schemes.
    pub fn series_condition(&self, z: f64) -> Result<f64> {
        match (&self.kind, self.scheme) {
            (Kind::Heun { canonical, origin, scale }, Scheme::Frobenius) => {
                let t = C64::new((z - origin) / scale, 0.0);
                Ok(frobenius_eval(canonical, MuChoice::Zero, t, SERIES_TOL)?.1.condition)
            }
            _ => Ok(1.0),
        }
    }

    /// H and dH/dz at z = pivot + u.
    fn inner(&self, pivot: f64, u: f64) -> Result<(C64, C64)> {
        match &self.kind {
            Kind::Heun { canonical, origin, scale } => {
                let t = C64::new((u + (pivot - origin)) / scale, 0.0);
                let (h, dh) = match self.scheme {
                    Scheme::Frobenius => {
                        let (u, du, _) = frobenius_with_derivative(canonical, MuChoice::Zero, t, SERIES_TOL)?;
                        (u, du)
                    }
                    _ => hypergeometric_expansion_with_derivative(canonical, Gamma0Choice::Gamma, t, SERIES_TOL)?,
                };
                Ok((h, dh / *scale))
            }
            Kind::TwoF1(c) => c.eval(pivot + u),
        }
    }

    fn prefactor(&self, pivot: f64, u: f64) -> (C64, C64) {
        let a = [self.heun.a1.re, self.heun.a2.re, self.heun.a3.re];
        let mut log = C64::new(0.0, 0.0);
        let mut dlog = C64::new(0.0, 0.0);
        for i in 0..3 {
            let d = u + (pivot - a[i]);
            log += self.exps.alpha[i] * d.abs().ln();
            dlog += self.exps.alpha[i] / d;
        }
        (log.exp(), dlog)
    }

    /// ψ as a function of z.
    pub fn psi_z(&self, z: f64) -> Result<C64> {
        Ok(self.psi_z_with_derivative(z)?.0)
    }

    /// (ψ, dψ/dz).
    pub fn psi_z_with_derivative(&self, z: f64) -> Result<(C64, C64)> {
        self.psi_offset(0.0, z)
    }

    fn psi_offset(&self, pivot: f64, u: f64) -> Result<(C64, C64)> {
        if !self.map.contains_offset(pivot, u) {
            let z = pivot + u;
            return Err(Error::BranchViolation(format!("z = {z} is outside the branch interval")));
        }
        let (p, dlog) = self.prefactor(pivot, u);
        let (h, dh) = self.inner(pivot, u)?;
        Ok((p * h, p * (dlog * h + dh)))
    }

    /// The pivot and z(x) − pivot. Heun solutions pivot on the series centre
    /// so that small distances to it are not rounded through z.
    fn locate(&self, x: f64) -> Result<(f64, f64)> {
        match &self.kind {
            Kind::TwoF1(c) => Ok((0.0, c.z_of_x(x)?)),
            Kind::Heun { origin, .. } => Ok((*origin, self.map.offset_of_x(x, *origin)?)),
        }
    }

    pub fn z_of_x(&self, x: f64) -> Result<f64> {
        match &self.kind {
            Kind::TwoF1(c) => c.z_of_x(x),
            _ => self.map.z_of_x(x),
        }
    }

    pub fn x_of_z(&self, z: f64) -> Result<f64> {
        self.map.x_of_z(z)
    }

    /// ψ(x).
    pub fn psi(&self, x: f64) -> Result<C64> {
        let (pivot, u) = self.locate(x)?;
        Ok(self.psi_offset(pivot, u)?.0)
    }

    /// (ψ(x), ψ′(x)), with ψ′ = ρ dψ/dz.
    pub fn psi_and_derivative(&self, x: f64) -> Result<(C64, C64)> {
        let (pivot, u) = self.locate(x)?;
        let (p, dp) = self.psi_offset(pivot, u)?;
        Ok((p, dp * self.map.rho_offset(pivot, u)))
    }

    /// V(x) = v(z)/r(z).
    pub fn potential(&self, x: f64) -> Result<f64> {
        crate::catalog::potential_value(&self.spec, self.z_of_x(x)?)
    }

    /// ψ on a grid of x values, in order.
    pub fn evaluate(&self, xs: &[f64]) -> Result<Vec<C64>> {
        par::try_map(xs, |&x| self.psi(x))
    }

    /// `n` x values strictly inside the region where this ψ can be evaluated.
    ///
    /// For Frobenius that is the part of the branch within 3/4 of the series
    /// radius, pulled in further until the series sum at the far end loses at
    /// most about two digits to cancellation; otherwise the branch itself, kept
    /// away from its ends.
    pub fn default_grid(&self, n: usize) -> Result<Vec<f64>> {
        if n < 2 {
            return Err(Error::GridTooCoarse(format!("need at least 2 points, got {n}")));
        }
        if let Kind::TwoF1(_) = self.kind {
            return Ok(uniform(-6.0, 6.0, n));
        }
        let (lo, hi) = self.map.interval();
        let s = self.spec.sorted_points();
        let span = (s[2] - s[0]).max(1.0);
        let (z0, z1) = match self.series_disk() {
            Some((c, r)) => {
                let (dir, far) = if c == lo { (1.0, hi) } else { (-1.0, lo) };
                let mut reach = (0.75 * r).min(0.9 * (far - c).abs());
                while reach > 1e-3 * r && self.series_condition(c + dir * reach).map_or(true, |k| k > GRID_CONDITION) {
                    reach *= 0.9;
                }
                (c + dir * 0.25 * reach, c + dir * reach)
            }
            None => match (lo.is_finite(), hi.is_finite()) {
                (true, true) => (lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo)),
                (false, _) => (hi - 5.0 * span, hi - 0.05 * span),
                (_, false) => (lo + 0.05 * span, lo + 5.0 * span),
            },
        };
        let (xa, xb) = (self.x_of_z(z0)?, self.x_of_z(z1)?);
        Ok(uniform(xa.min(xb), xa.max(xb), n))
    }
}

/// n points strictly inside (a, b).
pub(crate) fn uniform(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * (i as f64 + 1.0) / (n as f64 + 1.0)).collect()
}

/// ψ₁ψ₂′ − ψ₁′ψ₂ at x.
pub fn wronskian(w1: &Wavefunction, w2: &Wavefunction, x: f64) -> Result<C64> {
    let (p1, d1) = w1.psi_and_derivative(x)?;
    let (p2, d2) = w2.psi_and_derivative(x)?;
    Ok(p1 * d2 - d1 * p2)
}
