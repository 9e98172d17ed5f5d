//! Reduction of the Heun equation to the Gauss equation: in canonical position
//! (0, 1, a) this happens when ε = 0 and q = aαβ.

use super::{build_wavefunction, exponent_set, heun_params, Scheme, Sign, Wavefunction};
use crate::catalog::PotentialSpec;
use crate::heun::to_canonical;
use crate::triad::Triad;
use crate::{Error, Result};

/// Residuals below this count as a reduction.
pub const REDUCTION_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct CipReport {
    pub is_reducible: bool,
    /// Every sign choice meeting both conditions.
    pub which_exps: Vec<[Sign; 3]>,
    /// |ε| and |q − aαβ| for `best_signs`.
    pub epsilon_residual: f64,
    pub q_residual: f64,
    pub best_signs: [Sign; 3],
    /// Single-₂F₁ solution for `best_signs` when reducible.
    pub wavefunction: Option<Wavefunction>,
}

/// Checks ε = 0 and q = aαβ over all sign choices.
pub fn cip_reduction_check(spec: &PotentialSpec, energy: f64) -> Result<CipReport> {
    spec.validate()?;
    let mut which = Vec::new();
    let mut best = (f64::INFINITY, f64::INFINITY, [Sign::Plus; 3]);
    for signs in Sign::all() {
        let exps = exponent_set(spec, energy, signs)?;
        let p = heun_params(spec, energy, &exps)?;
        let (c, _) = to_canonical(&p)?;
        let re = c.epsilon.norm();
        let rq = (c.q - c.a3 * c.alpha * c.beta).norm();
        if re < REDUCTION_TOL && rq < REDUCTION_TOL {
            which.push(signs);
        }
        if re.max(rq) < best.0.max(best.1) {
            best = (re, rq, signs);
        }
    }
    let is_reducible = !which.is_empty();
    let wavefunction = if is_reducible {
        build_wavefunction(spec, energy, best.2, Scheme::HypergeometricExpansion).ok()
    } else {
        None
    };
    Ok(CipReport {
        is_reducible,
        which_exps: which,
        epsilon_residual: best.0,
        q_residual: best.1,
        best_signs: best.2,
        wavefunction,
    })
}

/// V₀ and V₁ that make the potential V = (V₀ + V₁z + … + V₄z⁴)/(σ²-free denominator)
/// conditionally integrable, for singular points (0, 1, a).
///
/// Supported triads: (1, 1, −1/2), (1, 1, −1) and (1, 1/2, −1/2).
pub fn cip_restrict(
    triad: Triad,
    a: f64,
    v2: f64,
    v3: f64,
    v4: f64,
    sigma: f64,
    hbar: f64,
    mass: f64,
) -> Result<(f64, f64)> {
    let u = hbar * hbar / (mass * sigma * sigma);
    let tail0 = a * a * (v2 + a * (2.0 * v3 + 3.0 * a * v4));
    let tail1 = a * (2.0 * v2 + a * (3.0 * v3 + 4.0 * a * v4));
    let (w0, w1) = match triad.doubled() {
        [2, 2, -1] => ((a - 1.0) * (7.0 * a - 1.0) * a * a / 32.0, 3.0 * (1.0 - a) * (2.0 * a - 1.0) * a / 16.0),
        [2, 2, -2] => ((a - 1.0) * (5.0 * a - 1.0) * a * a / 8.0, (1.0 - a) * (2.0 * a - 1.0) * a / 2.0),
        [2, 1, -1] => ((a - 1.0) * (9.0 * a - 1.0) * a * a / 32.0, (1.0 - a) * (7.0 * a - 3.0) * a / 16.0),
        d => return Err(Error::UnsupportedTriad(d)),
    };
    Ok((w0 * u + tail0, w1 * u - tail1))
}

/// The restricted potential as a spec at (0, 1, a); v = σ²(V₀, …, V₄).
pub fn cip_spec(
    triad: Triad,
    a: f64,
    v2: f64,
    v3: f64,
    v4: f64,
    sigma: f64,
    hbar: f64,
    mass: f64,
) -> Result<PotentialSpec> {
    let (v0, v1) = cip_restrict(triad, a, v2, v3, v4, sigma, hbar, mass)?;
    let s2 = sigma * sigma;
    let spec = PotentialSpec {
        triad,
        a: [0.0, 1.0, a],
        v: [s2 * v0, s2 * v1, s2 * v2, s2 * v3, s2 * v4],
        sigma,
        x0: 0.0,
        hbar,
        mass,
        branch: None,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: [i8; 3]) -> Triad {
        Triad::from_doubled(d).unwrap()
    }

    #[test]
    fn printed_rows_at_zero_tail() {
        let a = 2.5;
        let (v0, v1) = cip_restrict(t([2, 2, -2]), a, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        assert!((v0 - (a - 1.0) * (5.0 * a - 1.0) * a * a / 8.0).abs() < 1e-14);
        assert!((v1 - (1.0 - a) * (2.0 * a - 1.0) * a / 2.0).abs() < 1e-14);
        let (v0, v1) = cip_restrict(t([2, 1, -1]), a, 0.0, 0.0, 0.0, 2.0, 1.0, 1.0).unwrap();
        assert!((v0 - (a - 1.0) * (9.0 * a - 1.0) * a * a / 128.0).abs() < 1e-14);
        assert!((v1 - (1.0 - a) * (7.0 * a - 3.0) * a / 64.0).abs() < 1e-14);
        assert!(matches!(
            cip_restrict(t([2, 2, 2]), a, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0),
            Err(Error::UnsupportedTriad([2, 2, 2]))
        ));
    }

    #[test]
    fn restricted_specs_reduce() {
        for d in [[2, 2, -1], [2, 2, -2], [2, 1, -1]] {
            let s = cip_spec(t(d), -0.7, 0.3, -0.4, 0.25, 1.2, 1.0, 1.0).unwrap();
            for e in [0.3, 1.7] {
                let r = cip_reduction_check(&s, e).unwrap();
                assert!(r.is_reducible, "{d:?} E={e} eps={} q={}", r.epsilon_residual, r.q_residual);
                let w = r.wavefunction.expect("single 2F1 wavefunction");
                let xs = w.default_grid(5).unwrap();
                w.evaluate(&xs).unwrap();
            }
        }
    }

    #[test]
    fn generic_spec_does_not_reduce() {
        let s = PotentialSpec::new(t([2, 2, -2]), [0.0, 1.0, -0.7], [0.3, 0.1, -0.2, 0.5, 0.9], 1.0);
        assert!(!cip_reduction_check(&s, 0.4).unwrap().is_reducible);
    }
}
