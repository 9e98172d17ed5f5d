use super::{HeunParams, MuChoice, SmallTerms};
use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};

const MAX_TERMS: usize = 10_000;

/// Local power series z^μ Σ cₙ zⁿ about the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesSolution {
    pub mu: C64,
    pub coeffs: Vec<C64>,
    pub n_used: usize,
    pub tail_estimate: f64,
    /// Σ|cₙzⁿ| / |Σcₙzⁿ|; the relative rounding error of the sum is about ε times this.
    pub condition: f64,
}

/// Coefficients of Rₙcₙ + Qₙ₋₁cₙ₋₁ + Pₙ₋₂cₙ₋₂ = 0 for the Frobenius series.
#[derive(Clone, Copy)]
pub(crate) struct FrobeniusRecurrence {
    pub a: C64,
    pub q: C64,
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub delta: C64,
    pub epsilon: C64,
    pub mu: C64,
}

impl FrobeniusRecurrence {
    pub fn new(p: &HeunParams, mu: MuChoice) -> Self {
        let mu = match mu {
            MuChoice::Zero => C64::new(0.0, 0.0),
            MuChoice::OneMinusGamma => 1.0 - p.gamma,
        };
        FrobeniusRecurrence {
            a: p.a3,
            q: p.q,
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
            delta: p.delta,
            epsilon: p.epsilon,
            mu,
        }
    }

    pub fn r(&self, n: usize) -> C64 {
        let k = self.mu + n as f64;
        self.a * k * (k - 1.0 + self.gamma)
    }

    /// Qₙ without the −q term.
    pub fn q_tilde(&self, n: usize) -> C64 {
        let k = self.mu + n as f64;
        -k * ((k - 1.0 + self.gamma + self.delta + self.epsilon) * (1.0 + self.a) - self.a * self.epsilon - self.delta)
    }

    pub fn q(&self, n: usize) -> C64 {
        self.q_tilde(n) - self.q
    }

    pub fn p(&self, n: usize) -> C64 {
        let k = self.mu + n as f64;
        (k + self.alpha) * (k + self.beta)
    }
}

fn check_mu(p: &HeunParams, mu: MuChoice) -> Result<()> {
    let g = match mu {
        MuChoice::Zero => p.gamma,
        MuChoice::OneMinusGamma => 2.0 - p.gamma,
    };
    if let Some(n) = crate::special::nonpositive_integer(g, 1e-13) {
        return Err(Error::IndicialDegenerate(n as usize + 1));
    }
    Ok(())
}

struct Sums {
    sol: SeriesSolution,
    s: [C64; 3],
}

fn sum_series(p: &HeunParams, mu: MuChoice, z: C64, tol: f64, derivatives: bool) -> Result<Sums> {
    p.require_canonical()?;
    check_mu(p, mu)?;
    let radius = p.a3.norm().min(1.0);
    if z.norm() >= radius {
        return Err(Error::OutsideDisk { modulus: z.norm(), radius });
    }
    let rec = FrobeniusRecurrence::new(p, mu);
    let zero = C64::new(0.0, 0.0);
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    let mut s = [C64::new(1.0, 0.0), zero, zero];
    if z == zero && !derivatives {
        return Ok(Sums {
            sol: SeriesSolution { mu: rec.mu, coeffs, n_used: 0, tail_estimate: 0.0, condition: 1.0 },
            s,
        });
    }
    let (mut pw1, mut pw2) = (C64::new(1.0, 0.0), zero); // z^{n-1}, z^{n-2}
    let mut stop = SmallTerms::default();
    let mut last = [0.0f64; 3];
    let mut abs_sum = 1.0;
    for n in 1..MAX_TERMS {
        let rn = rec.r(n);
        if rn == zero {
            return Err(Error::IndicialDegenerate(n));
        }
        let cm1 = coeffs[n - 1];
        let cm2 = if n >= 2 { coeffs[n - 2] } else { zero };
        let pm2 = if n >= 2 { rec.p(n - 2) } else { zero };
        let cn = -(rec.q(n - 1) * cm1 + pm2 * cm2) / rn;
        coeffs.push(cn);
        let nf = n as f64;
        if derivatives {
            s[1] += cn * nf * pw1;
            if n >= 2 {
                s[2] += cn * nf * (nf - 1.0) * pw2;
            }
        }
        pw2 = pw1;
        pw1 *= z;
        let term = cn * pw1;
        s[0] += term;
        abs_sum += term.norm();
        last = [last[1], last[2], term.norm()];
        let done = stop.push(term.norm(), s[0].norm(), tol);
        let dsmall =
            !derivatives || n > 2 && (cn * nf * nf * pw2).norm() <= tol * (s[1].norm() + s[2].norm() + s[0].norm());
        if done && dsmall || cn == zero && cm1 == zero {
            let ratio = if last[1] > 0.0 { last[2] / last[1] } else { 0.0 };
            let tail = if ratio < 1.0 { last[2] * ratio / (1.0 - ratio) } else { last[2] };
            return Ok(Sums {
                sol: SeriesSolution {
                    mu: rec.mu,
                    coeffs,
                    n_used: n,
                    tail_estimate: tail,
                    condition: abs_sum / s[0].norm(),
                },
                s,
            });
        }
    }
    Err(Error::NoConvergence(format!("Frobenius series at z = {z} did not settle within {MAX_TERMS} terms")))
}

/// H(z) = z^μ Σ cₙ zⁿ in canonical position, |z| < min(|a|, 1).
pub fn frobenius_eval(p: &HeunParams, mu: MuChoice, z: C64, tol: f64) -> Result<(C64, SeriesSolution)> {
    let sums = sum_series(p, mu, z, tol, false)?;
    let zmu = if sums.sol.mu == C64::new(0.0, 0.0) { C64::new(1.0, 0.0) } else { z.powc(sums.sol.mu) };
    Ok((zmu * sums.s[0], sums.sol))
}

/// (H, H', H'') at z.
pub fn frobenius_with_derivative(p: &HeunParams, mu: MuChoice, z: C64, tol: f64) -> Result<(C64, C64, C64)> {
    let sums = sum_series(p, mu, z, tol, true)?;
    let [s0, s1, s2] = sums.s;
    let mu = sums.sol.mu;
    if mu == C64::new(0.0, 0.0) {
        return Ok((s0, s1, s2));
    }
    let zmu = z.powc(mu);
    let u = zmu * s0;
    let du = zmu * (mu * s0 / z + s1);
    let d2u = zmu * (mu * (mu - 1.0) * s0 / (z * z) + 2.0 * mu * s1 / z + s2);
    Ok((u, du, d2u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{gauss_2f1, HypergeometricArgs};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn generic() -> HeunParams {
        HeunParams::canonical(c(2.3, 0.4), c(0.7, -0.3), c(0.4, 0.2), c(-1.1, 0.5), c(1.35, 0.1), c(0.6, -0.2))
    }

    #[test]
    fn origin_value_and_first_coefficient() {
        let p = generic();
        let (v, sol) = frobenius_eval(&p, MuChoice::Zero, c(0.0, 0.0), 1e-12).unwrap();
        assert_eq!(v, c(1.0, 0.0));
        assert_eq!(sol.coeffs.len(), 1);
        let (_, sol) = frobenius_eval(&p, MuChoice::Zero, c(0.1, 0.0), 1e-14).unwrap();
        let c1 = p.q / (p.a3 * p.gamma);
        assert!((sol.coeffs[1] - c1).norm() < 1e-15 * c1.norm());
    }

    #[test]
    fn reduces_to_gauss() {
        // (a, q; α, β, γ, δ, ε) = (2, 1.5; 0.5, 1.5, 1, 2, 0)
        let p = HeunParams::canonical(c(2.0, 0.0), c(1.5, 0.0), c(0.5, 0.0), c(1.5, 0.0), c(1.0, 0.0), c(2.0, 0.0));
        assert!(p.epsilon.norm() < 1e-15);
        let (h, _) = frobenius_eval(&p, MuChoice::Zero, c(0.3, 0.0), 1e-15).unwrap();
        let f = gauss_2f1(&HypergeometricArgs::real(0.5, 1.5, 1.0, 0.3), 1e-15).unwrap();
        assert!((h - f).norm() < 1e-13 * f.norm(), "{h} {f}");
    }

    #[test]
    fn second_exponent_leading_behaviour() {
        let p = generic();
        for &r in &[1e-3, 1e-5] {
            let z = c(r, r);
            let (h, _) = frobenius_eval(&p, MuChoice::OneMinusGamma, z, 1e-15).unwrap();
            let lead = h / z.powc(1.0 - p.gamma);
            assert!((lead - 1.0).norm() < 10.0 * r, "{lead}");
        }
    }

    #[test]
    fn recurrence_residual_of_stored_coefficients() {
        let p = generic();
        for mu in [MuChoice::Zero, MuChoice::OneMinusGamma] {
            let (_, sol) = frobenius_eval(&p, mu, c(0.6, 0.3), 1e-16).unwrap();
            let rec = FrobeniusRecurrence::new(&p, mu);
            for n in 2..sol.coeffs.len() {
                let r = rec.r(n) * sol.coeffs[n] + rec.q(n - 1) * sol.coeffs[n - 1] + rec.p(n - 2) * sol.coeffs[n - 2];
                assert!(r.norm() < 1e-12 * sol.coeffs[n].norm().max(1.0), "n={n} {r}");
            }
        }
    }

    #[test]
    fn errors() {
        let p = generic();
        assert!(matches!(frobenius_eval(&p, MuChoice::Zero, c(1.2, 0.0), 1e-12), Err(Error::OutsideDisk { .. })));
        let mut bad = p;
        bad.gamma = c(-1.0, 0.0);
        bad.delta = bad.alpha + bad.beta + 1.0 - bad.gamma - bad.epsilon;
        assert!(matches!(frobenius_eval(&bad, MuChoice::Zero, c(0.2, 0.0), 1e-12), Err(Error::IndicialDegenerate(_))));
        let mut off = p;
        off.a1 = c(0.5, 0.0);
        assert!(frobenius_eval(&off, MuChoice::Zero, c(0.2, 0.0), 1e-12).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = generic();
        let z = c(0.35, -0.2);
        let h = 1e-4;
        let f = |z: C64| frobenius_eval(&p, MuChoice::OneMinusGamma, z, 1e-16).unwrap().0;
        let (u, du, d2u) = frobenius_with_derivative(&p, MuChoice::OneMinusGamma, z, 1e-16).unwrap();
        let fd1 = (f(z + h) - f(z - h)) / (2.0 * h);
        let fd2 = (f(z + h) - 2.0 * u + f(z - h)) / (h * h);
        assert!((fd1 - du).norm() < 1e-7 * du.norm());
        assert!((fd2 - d2u).norm() < 1e-5 * d2u.norm());
        assert!(p.apply(z, u, du, d2u).norm() < 1e-12 * p.apply_scale(z, u, du, d2u));
    }
}
