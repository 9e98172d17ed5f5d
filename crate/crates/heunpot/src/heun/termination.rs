//! Polynomial conditions on the accessory parameter q that truncate a series.
//!
//! Both recurrences have the shape Rₙcₙ + (Q̃ₙ₋₁ − q)cₙ₋₁ + Pₙ₋₂cₙ₋₂ = 0. If
//! P_N = 0, requiring c_{N+1} = 0 makes (c₀..c_N) an eigenvector of the
//! tridiagonal matrix T with diagonal Q̃ₖ, superdiagonal Rₖ₊₁ and subdiagonal
//! Pₖ₋₁, and q an eigenvalue. The characteristic polynomial is built by the
//! continuant recursion, its roots come from the companion matrix and are then
//! polished by Newton's method on the same recursion.

use super::expansion::ExpansionRecurrence;
use super::frobenius::FrobeniusRecurrence;
use super::{Gamma0Choice, HeunParams, MuChoice};
use crate::{Error, Result, C64};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// One admissible q with the terminating coefficients c₀..c_N.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TerminationRoot {
    pub q: C64,
    pub coeffs: Vec<C64>,
    /// c_{N+1}, c_{N+2} from extending the recurrence at this q.
    pub extension: [C64; 2],
}

impl TerminationRoot {
    /// max |c_{N+1}|, |c_{N+2}| relative to max |cₙ|.
    pub fn extension_ratio(&self) -> f64 {
        let m = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        self.extension[0].norm().max(self.extension[1].norm()) / m
    }
}

trait Recurrence {
    fn r(&self, n: usize) -> C64;
    fn q_tilde(&self, n: usize) -> C64;
    fn p(&self, n: usize) -> C64;
}

impl Recurrence for FrobeniusRecurrence {
    fn r(&self, n: usize) -> C64 {
        FrobeniusRecurrence::r(self, n)
    }
    fn q_tilde(&self, n: usize) -> C64 {
        FrobeniusRecurrence::q_tilde(self, n)
    }
    fn p(&self, n: usize) -> C64 {
        FrobeniusRecurrence::p(self, n)
    }
}

impl Recurrence for ExpansionRecurrence {
    fn r(&self, n: usize) -> C64 {
        ExpansionRecurrence::r(self, n)
    }
    fn q_tilde(&self, n: usize) -> C64 {
        ExpansionRecurrence::q_tilde(self, n)
    }
    fn p(&self, n: usize) -> C64 {
        ExpansionRecurrence::p(self, n)
    }
}

/// Continuant D_N(q) and its q-derivative.
fn continuant(diag: &[C64], off: &[C64], q: C64) -> (C64, C64) {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let (mut d2, mut d1) = (one, diag[0] - q);
    let (mut e2, mut e1) = (zero, -one);
    for k in 1..diag.len() {
        let d = (diag[k] - q) * d1 - off[k] * d2;
        let e = -d1 + (diag[k] - q) * e1 - off[k] * e2;
        d2 = d1;
        d1 = d;
        e2 = e1;
        e1 = e;
    }
    (d1, e1)
}

/// Coefficients (ascending powers of q) of the continuant polynomial.
fn char_poly(diag: &[C64], off: &[C64]) -> Vec<C64> {
    let one = C64::new(1.0, 0.0);
    let mut d2 = vec![one];
    let mut d1 = vec![diag[0], -one];
    for k in 1..diag.len() {
        let mut d = vec![C64::new(0.0, 0.0); k + 2];
        for (i, &c) in d1.iter().enumerate() {
            d[i] += diag[k] * c;
            d[i + 1] -= c;
        }
        for (i, &c) in d2.iter().enumerate() {
            d[i] -= off[k] * c;
        }
        d2 = d1;
        d1 = d;
    }
    d1
}

/// Roots of a polynomial (ascending coefficients) as companion-matrix eigenvalues.
pub(crate) fn poly_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    if n == 0 || lead == C64::new(0.0, 0.0) {
        return Err(Error::NoConvergence("degenerate termination polynomial".into()));
    }
    let m = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -coeffs[i] / lead
        } else if i == j + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    m.schur()
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .ok_or_else(|| Error::NoConvergence("companion-matrix eigenvalues did not converge".into()))
}

fn roots<R: Recurrence>(rec: &R, n: usize, tol: f64) -> Result<Vec<TerminationRoot>> {
    let diag: Vec<C64> = (0..=n).map(|k| rec.q_tilde(k)).collect();
    let mut off = vec![C64::new(0.0, 0.0)];
    for k in 1..=n {
        off.push(rec.p(k - 1) * rec.r(k));
    }
    let poly = char_poly(&diag, &off);
    let mut qs = poly_roots(&poly)?;
    for q in qs.iter_mut() {
        for _ in 0..50 {
            let (d, e) = continuant(&diag, &off, *q);
            if e == C64::new(0.0, 0.0) {
                break;
            }
            let step = d / e;
            *q -= step;
            if step.norm() <= tol.min(1e-12) * (1.0 + q.norm()) * 1e-3 {
                break;
            }
        }
    }
    qs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    qs.into_iter().map(|q| coefficients(rec, n, q)).collect()
}

fn coefficients<R: Recurrence>(rec: &R, n: usize, q: C64) -> Result<TerminationRoot> {
    let zero = C64::new(0.0, 0.0);
    let qk = |k: usize| rec.q_tilde(k) - q;
    let step = |c: &[C64], k: usize| -> (C64, C64) {
        // numerator and Rₖ for cₖ
        let prev2 = if k >= 2 { rec.p(k - 2) * c[k - 2] } else { zero };
        (qk(k - 1) * c[k - 1] + prev2, rec.r(k))
    };
    let mut c = vec![C64::new(1.0, 0.0)];
    for k in 1..=n {
        let (num, r) = step(&c, k);
        if r == zero {
            return Err(Error::RecurrenceBreakdown(k));
        }
        c.push(-num / r);
    }
    let mut ext = c.clone();
    let mut extension = [zero; 2];
    for (i, k) in (n + 1..=n + 2).enumerate() {
        let (num, r) = step(&ext, k);
        let v = if r == zero { num } else { -num / r };
        ext.push(v);
        extension[i] = v;
    }
    Ok(TerminationRoot { q, coeffs: c, extension })
}

fn scale(xs: &[C64]) -> f64 {
    1.0 + xs.iter().map(|x| x.norm()).sum::<f64>()
}

/// All q for which the Frobenius series terminates after N + 1 terms.
///
/// Requires P_N = 0, i.e. μ + α = −N or μ + β = −N.
pub fn frobenius_termination(p: &HeunParams, mu: MuChoice, n: usize, tol: f64) -> Result<Vec<TerminationRoot>> {
    p.require_canonical()?;
    let rec = FrobeniusRecurrence::new(p, mu);
    let pn = rec.p(n);
    let s = scale(&[rec.mu, p.alpha, p.beta]) * (1.0 + n as f64);
    if (rec.mu + n as f64 + p.alpha).norm() > 1e-10 * s && (rec.mu + n as f64 + p.beta).norm() > 1e-10 * s {
        return Err(Error::TerminationPrecondition(format!(
            "P_{n} = {pn} does not vanish: neither mu + alpha nor mu + beta equals -{n}"
        )));
    }
    roots(&rec, n, tol)
}

/// All q for which the ₂F₁ expansion with the chosen γ₀ has exactly N + 1 terms.
///
/// Requires ε + γ − γ₀ = −N and a ≠ 1.
pub fn hypergeom_termination(p: &HeunParams, choice: Gamma0Choice, n: usize, tol: f64) -> Result<Vec<TerminationRoot>> {
    p.require_canonical()?;
    if (p.a3 - 1.0).norm() < 1e-14 {
        return Err(Error::TerminationPrecondition(
            "a = 1 makes every P_n vanish; the termination condition degenerates".into(),
        ));
    }
    let rec = ExpansionRecurrence::new(p, choice);
    let lhs = p.epsilon + p.gamma - rec.g0 + n as f64;
    if lhs.norm() > 1e-10 * scale(&[p.epsilon, p.gamma, rec.g0]) * (1.0 + n as f64) {
        return Err(Error::TerminationPrecondition(format!(
            "epsilon + gamma - gamma0 = {} is not -{n}",
            lhs - n as f64
        )));
    }
    roots(&rec, n, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn polynomial_roots() {
        // (q−1)(q+2)(q−3i)
        let r = [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 3.0)];
        let coeffs = [-r[0] * r[1] * r[2], r[0] * r[1] + r[0] * r[2] + r[1] * r[2], -(r[0] + r[1] + r[2]), c(1.0, 0.0)];
        let mut got = poly_roots(&coeffs).unwrap();
        got.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((got[0] - r[1]).norm() < 1e-12);
        assert!((got[1] - r[2]).norm() < 1e-12);
        assert!((got[2] - r[0]).norm() < 1e-12);
    }

    #[test]
    fn continuant_matches_expanded_polynomial() {
        let diag = [c(0.3, 0.1), c(-1.2, 0.5), c(2.0, -0.4)];
        let off = [c(0.0, 0.0), c(0.7, 0.2), c(-0.3, 1.1)];
        let poly = char_poly(&diag, &off);
        let q = c(0.4, -0.9);
        let horner = poly.iter().rev().fold(c(0.0, 0.0), |acc, &k| acc * q + k);
        assert!((continuant(&diag, &off, q).0 - horner).norm() < 1e-13);
    }

    #[test]
    fn n_zero_gives_q_zero() {
        let p = HeunParams::canonical(c(2.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.8, 0.3), c(1.4, 0.0), c(0.9, 0.0));
        let r = frobenius_termination(&p, MuChoice::Zero, 0, 1e-12).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].q.norm() < 1e-15);
        assert_eq!(r[0].coeffs, vec![c(1.0, 0.0)]);
    }

    #[test]
    fn n_one_matches_two_by_two_determinant() {
        let p = HeunParams::canonical(c(2.5, 0.2), c(0.0, 0.0), c(-1.0, 0.0), c(0.8, 0.3), c(1.4, -0.1), c(0.9, 0.2));
        let r = frobenius_termination(&p, MuChoice::Zero, 1, 1e-12).unwrap();
        assert_eq!(r.len(), 2);
        // det [[Q0~ - q, R1], [P0, Q1~ - q]] = 0 with Q0~ = 0
        let rec = FrobeniusRecurrence::new(&p, MuChoice::Zero);
        let (q1, pr) = (rec.q_tilde(1), rec.p(0) * rec.r(1));
        let disc = (q1 * q1 + 4.0 * pr).sqrt();
        let mut expect = [(q1 + disc) / 2.0, (q1 - disc) / 2.0];
        expect.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (root, e) in r.iter().zip(expect) {
            assert!((root.q - e).norm() < 1e-12, "{} {}", root.q, e);
            assert!(root.extension_ratio() < 1e-12);
        }
    }

    #[test]
    fn preconditions() {
        let p = HeunParams::canonical(c(2.5, 0.0), c(0.0, 0.0), c(0.3, 0.0), c(0.8, 0.3), c(1.4, 0.0), c(0.9, 0.0));
        assert!(matches!(frobenius_termination(&p, MuChoice::Zero, 1, 1e-12), Err(Error::TerminationPrecondition(_))));
        let mut p = HeunParams::canonical_with_epsilon(
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.3, 0.0),
            c(0.8, 0.3),
            c(1.4, 0.0),
            c(-1.0, 0.0),
        );
        assert!(hypergeom_termination(&p, Gamma0Choice::Gamma, 1, 1e-12).is_err());
        p = HeunParams::canonical_with_epsilon(
            c(0.5, 0.0),
            c(0.0, 0.0),
            c(0.3, 0.0),
            c(0.8, 0.3),
            c(1.4, 0.0),
            c(-0.5, 0.0),
        );
        assert!(matches!(
            hypergeom_termination(&p, Gamma0Choice::Gamma, 1, 1e-12),
            Err(Error::TerminationPrecondition(_))
        ));
    }

    #[test]
    fn expansion_termination_gives_two_terms() {
        let p = HeunParams::canonical_with_epsilon(
            c(0.5, 0.0),
            c(0.0, 0.0),
            c(0.3, 0.2),
            c(0.8, -0.3),
            c(1.4, 0.1),
            c(-1.0, 0.0),
        );
        let r = hypergeom_termination(&p, Gamma0Choice::Gamma, 1, 1e-12).unwrap();
        assert_eq!(r.len(), 2);
        for root in &r {
            assert_eq!(root.coeffs.len(), 2);
            assert!(root.coeffs[1].norm() > 1e-6);
            assert!(root.extension_ratio() < 1e-9);
        }
    }
}
