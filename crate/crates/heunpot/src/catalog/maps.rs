//! Forward maps x(z) = x₀ + σF(z) with F' = 1/Π fᵢ(z), and their inverses.
//!
//! Each map lives on one admissible real interval. Triads are first permuted
//! into their class representative. F is a closed form where one exists on
//! the interval (logarithms, a √|z − a| substitution, artanh/elliptic forms),
//! otherwise a graded Gauss–Kronrod quadrature from an interior reference
//! point. z(x) is explicit for classes 3, 7, 9, 10 and 11 on their branches
//! and a bracketed, safeguarded Newton iteration otherwise.

use super::quadrature::integrate;
use super::PotentialSpec;
use crate::special::{complete_k, elliptic_f, jacobi_elliptic};
use crate::triad::{canonical_permutation, Triad};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Forward {
    /// Σ A ln|z − p|
    Logs(Vec<(f64, f64)>),
    /// Partial fractions in Y = |z − center| with y = √Y: Σ 2sA G(y; Yⱼ).
    Sqrt {
        center: f64,
        s: f64,
        terms: Vec<(f64, f64)>,
    },
    /// Class 6 closed form on (max(a₂, a₃), a₁).
    Row6 {
        a1: f64,
        a2: f64,
        a3: f64,
    },
    TanhSquared {
        a2: f64,
        d: f64,
    },
    ExpSquared {
        a1: f64,
        a2: f64,
    },
    Sn {
        lo: f64,
        width: f64,
        m: f64,
    },
    Quadrature,
}

/// z = pivot + u, with differences z − p formed as u + (pivot − p) so that
/// they keep full relative precision when p is the pivot.
#[derive(Clone, Copy)]
struct Point {
    pivot: f64,
    u: f64,
}

impl Point {
    fn at(z: f64) -> Self {
        Point { pivot: 0.0, u: z }
    }

    fn minus(self, p: f64) -> f64 {
        self.u + (self.pivot - p)
    }
}

/// How z(x) is obtained on this branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InverseKind {
    Numeric,
    Exp { a1: f64, s: f64 },
    ExpRatio { a1: f64, a2: f64, s: f64 },
    TanhSquared { a2: f64, d: f64 },
    ExpSquared { a1: f64, a2: f64 },
    Sn { lo: f64, width: f64, m: f64 },
}

/// x(z) and z(x) on one real interval of one potential.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateMap {
    a: [f64; 3],
    d: [i8; 3],
    singular: [f64; 3],
    sigma: f64,
    x0: f64,
    lo: f64,
    hi: f64,
    zref: f64,
    span: f64,
    gsign: f64,
    forward: Forward,
    inverse: InverseKind,
}

impl CoordinateMap {
    /// Map on interval `k` (0..=3) of the sorted singular points.
    pub fn new(spec: &PotentialSpec, k: usize) -> Result<Self> {
        spec.validate_basic()?;
        if k > 3 {
            return Err(Error::InvalidSpec(format!("interval {k} out of range")));
        }
        if !spec.is_admissible(k) {
            return Err(Error::BranchViolation(format!(
                "interval {k} is not admissible: half-integer factors change sign"
            )));
        }
        let p = canonical_permutation(spec.triad);
        let a = [spec.a[p[0]], spec.a[p[1]], spec.a[p[2]]];
        let dd = spec.triad.doubled();
        let d = [dd[p[0]], dd[p[1]], dd[p[2]]];
        let (lo, hi) = spec.interval(k);
        let s = spec.sorted_points();
        let span = (s[2] - s[0]).max(1.0);
        let zref = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (false, _) => hi - span,
            (_, false) => lo + span,
        };
        let class = Triad::from_doubled(d)?.class_index();
        let mut map = CoordinateMap {
            a,
            d,
            singular: s,
            sigma: spec.sigma,
            x0: spec.x0,
            lo,
            hi,
            zref,
            span,
            gsign: 0.0,
            forward: Forward::Quadrature,
            inverse: InverseKind::Numeric,
        };
        map.gsign = map.g(zref).signum();
        let [a1, a2, a3] = a;
        let inside = |l: f64, h: f64| lo >= l && hi <= h;
        map.forward = match class {
            1 | 3 | 5 | 9 => Forward::Logs(map.log_terms()),
            2 | 4 => map.sqrt_terms(2),
            7 if a1 > a2 && inside(a2, a1) => Forward::TanhSquared { a2, d: a1 - a2 },
            7 => map.sqrt_terms(1),
            6 if a1 > a2.max(a3) && inside(a2.max(a3), a1) => Forward::Row6 { a1, a2, a3 },
            10 if lo >= s[2] => Forward::Sn { lo: s[0], width: s[2] - s[0], m: (s[1] - s[0]) / (s[2] - s[0]) },
            11 if lo >= a1.max(a2) => Forward::ExpSquared { a1, a2 },
            _ => Forward::Quadrature,
        };
        map.inverse = match (&map.forward, class) {
            (_, 9) => InverseKind::Exp { a1, s: (zref - a1).signum() },
            (_, 3) => InverseKind::ExpRatio { a1, a2, s: ((zref - a1) / (zref - a2)).signum() },
            (Forward::TanhSquared { a2, d }, _) => InverseKind::TanhSquared { a2: *a2, d: *d },
            (Forward::ExpSquared { a1, a2 }, _) => InverseKind::ExpSquared { a1: *a1, a2: *a2 },
            (Forward::Sn { lo, width, m }, _) => InverseKind::Sn { lo: *lo, width: *width, m: *m },
            _ => InverseKind::Numeric,
        };
        Ok(map)
    }

    /// Map on the spec's branch (see [`PotentialSpec::default_branch`]).
    pub fn for_branch(spec: &PotentialSpec) -> Result<Self> {
        spec.validate()?;
        Self::new(spec, spec.default_branch())
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn inverse_kind(&self) -> InverseKind {
        self.inverse
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// An interior point of the interval.
    pub fn reference_point(&self) -> f64 {
        self.zref
    }

    pub fn contains(&self, z: f64) -> bool {
        self.contains_at(Point::at(z))
    }

    /// Whether pivot + u lies inside the interval.
    pub fn contains_offset(&self, pivot: f64, u: f64) -> bool {
        self.contains_at(Point { pivot, u })
    }

    fn contains_at(&self, p: Point) -> bool {
        p.minus(self.lo) > 0.0 && p.minus(self.hi) < 0.0
    }

    /// dF/dz = 1/Π fᵢ(z) = 1/(σρ).
    pub fn g(&self, z: f64) -> f64 {
        1.0 / self.product(Point::at(z))
    }

    /// ρ(z) = dz/dx.
    pub fn rho(&self, z: f64) -> f64 {
        self.product(Point::at(z)) / self.sigma
    }

    /// ρ at z = pivot + u.
    pub fn rho_offset(&self, pivot: f64, u: f64) -> f64 {
        self.product(Point { pivot, u }) / self.sigma
    }

    fn product(&self, p: Point) -> f64 {
        let mut out = 1.0;
        for i in 0..3 {
            let x = p.minus(self.a[i]);
            out *= match self.d[i] {
                2 => x,
                1 => x.abs().sqrt(),
                0 => 1.0,
                -1 => 1.0 / x.abs().sqrt(),
                _ => 1.0 / x,
            };
        }
        out
    }

    fn log_terms(&self) -> Vec<(f64, f64)> {
        let poles: Vec<f64> = (0..3).filter(|&i| self.d[i] == 2).map(|i| self.a[i]).collect();
        let zeros: Vec<f64> = (0..3).filter(|&i| self.d[i] == -2).map(|i| self.a[i]).collect();
        poles
            .iter()
            .map(|&p| {
                let num: f64 = zeros.iter().map(|&z| p - z).product();
                let den: f64 = poles.iter().filter(|&&q| q != p).map(|&q| p - q).product();
                (p, num / den)
            })
            .collect()
    }

    /// Substitution y = √|z − a_h| for the single half-integer exponent, which sits at `h`.
    fn sqrt_terms(&self, h: usize) -> Forward {
        let center = self.a[h];
        let s = (self.zref - center).signum();
        let mut roots = Vec::new();
        let mut zeros = Vec::new();
        for i in 0..3 {
            if i == h {
                continue;
            }
            let c = center - self.a[i];
            match self.d[i] {
                2 => roots.push(-s * c),
                -2 => zeros.push(c),
                _ => {}
            }
        }
        let deg = roots.len() as i32;
        let numerator = |y2: f64| -> f64 {
            let mut n: f64 = zeros.iter().map(|&c| c + s * y2).product();
            if self.d[h] == -1 {
                n *= y2;
            }
            n
        };
        let terms = roots
            .iter()
            .map(|&yj| {
                let dprime: f64 =
                    s.powi(deg) * roots.iter().filter(|&&yk| yk != yj).map(|&yk| yj - yk).product::<f64>();
                (yj, numerator(yj) / dprime)
            })
            .collect();
        Forward::Sqrt { center, s, terms }
    }

    /// F(z) with x(z) = x₀ + σF(z).
    pub fn antiderivative(&self, z: f64) -> Result<f64> {
        self.forward_at(Point::at(z))
    }

    fn forward_at(&self, pt: Point) -> Result<f64> {
        if !self.contains_at(pt) {
            let z = pt.pivot + pt.u;
            return Err(Error::BranchViolation(format!("z = {z} is outside the interval ({}, {})", self.lo, self.hi)));
        }
        let v = match &self.forward {
            Forward::Logs(terms) => terms.iter().map(|&(p, a)| a * pt.minus(p).abs().ln()).sum(),
            Forward::Sqrt { center, s, terms } => {
                let y = pt.minus(*center).abs().sqrt();
                terms
                    .iter()
                    .map(|&(yj, aj)| {
                        let g = if yj > 0.0 {
                            let r = yj.sqrt();
                            ((y - r) / (y + r)).abs().ln() / (2.0 * r)
                        } else {
                            let r = (-yj).sqrt();
                            (y / r).atan() / r
                        };
                        2.0 * s * aj * g
                    })
                    .sum()
            }
            Forward::Row6 { a1, a2, a3 } => {
                let (p, q) = ((a1 - a2).sqrt(), (a1 - a3).sqrt());
                let w = p * pt.minus(*a2).sqrt() + q * pt.minus(*a3).sqrt();
                ((-pt.minus(*a1)).ln() - (w * w - (a2 - a3) * (a2 - a3)).ln()) / (p * q)
            }
            Forward::TanhSquared { a2, d } => -2.0 / d.sqrt() * (pt.minus(*a2) / d).sqrt().atanh(),
            Forward::ExpSquared { a1, a2 } => 2.0 * (pt.minus(*a1).sqrt() + pt.minus(*a2).sqrt()).ln(),
            Forward::Sn { lo, width, m } => {
                let phi = (width / pt.minus(*lo)).sqrt().min(1.0).asin();
                -2.0 / width.sqrt() * elliptic_f(phi, *m)
            }
            Forward::Quadrature => {
                let pivot = pt.pivot;
                let singular = self.singular.map(|a| a - pivot);
                integrate(|u| 1.0 / self.product(Point { pivot, u }), self.zref - pivot, pt.u, &singular)?
            }
        };
        if !v.is_finite() {
            let z = pt.pivot + pt.u;
            return Err(Error::BranchViolation(format!("x(z) is not finite at z = {z}")));
        }
        Ok(v)
    }

    pub fn x_of_z(&self, z: f64) -> Result<f64> {
        Ok(self.x0 + self.sigma * self.antiderivative(z)?)
    }

    pub fn z_of_x(&self, x: f64) -> Result<f64> {
        self.offset_of_x(x, 0.0)
    }

    /// u = z(x) − pivot, computed without forming z when the pivot is an
    /// end of the interval, so small offsets keep their relative precision.
    pub fn offset_of_x(&self, x: f64, pivot: f64) -> Result<f64> {
        let w = (x - self.x0) / self.sigma;
        let u = match self.inverse {
            InverseKind::Numeric => return self.solve(w, x, pivot),
            InverseKind::Exp { a1, s } => (a1 - pivot) + s * w.exp(),
            InverseKind::ExpRatio { a1, a2, s } => {
                let e = s * ((a1 - a2) * w).exp();
                ((a1 - pivot) - e * (a2 - pivot)) / (1.0 - e)
            }
            InverseKind::TanhSquared { a2, d } => {
                if w > 0.0 {
                    return Err(Error::OutOfBranch(x));
                }
                (a2 - pivot) + d * (0.5 * d.sqrt() * w).tanh().powi(2)
            }
            InverseKind::ExpSquared { a1, a2 } => {
                let p = (0.5 * w).exp();
                if p * p < (a2 - a1).abs() {
                    return Err(Error::OutOfBranch(x));
                }
                let r = 0.5 * (p + (a2 - a1) / p);
                (a1 - pivot) + r * r
            }
            InverseKind::Sn { lo, width, m } => {
                let u = -0.5 * width.sqrt() * w;
                if u <= 0.0 || u > complete_k(m)? {
                    return Err(Error::OutOfBranch(x));
                }
                let sn = jacobi_elliptic(u, m)?.0;
                (lo - pivot) + width / (sn * sn)
            }
        };
        if self.contains_at(Point { pivot, u }) {
            Ok(u)
        } else {
            Err(Error::OutOfBranch(x))
        }
    }

    /// Solves F(pivot + u) = w for u by bracketing and safeguarded Newton steps.
    fn solve(&self, w: f64, x: f64, pivot: f64) -> Result<f64> {
        let f = |u: f64| -> Result<f64> { Ok(self.forward_at(Point { pivot, u })? - w) };
        let z0 = self.zref - pivot;
        let f0 = f(z0)?;
        if f0 == 0.0 {
            return Ok(z0);
        }
        let right = (f0 < 0.0) == (self.gsign > 0.0);
        let end = if right { self.hi } else { self.lo } - pivot;
        let dir = if right { 1.0 } else { -1.0 };
        let (mut a, mut fa) = (z0, f0);
        let mut bracket = None;
        let mut last_step = f64::INFINITY;
        for k in 1..=400 {
            let zk = if end.is_finite() {
                end - (end - z0) * 0.5f64.powi(k)
            } else {
                z0 + dir * self.span * (2f64.powi(k.min(1000)) - 1.0)
            };
            if !self.contains_at(Point { pivot, u: zk }) || zk == a {
                break;
            }
            let fk = f(zk)?;
            if fk == 0.0 {
                return Ok(zk);
            }
            if fk.signum() != f0.signum() {
                bracket = Some((zk, fk));
                break;
            }
            // x(z) may stay finite toward the end; stop once the
            // geometrically shrinking increments cannot close the gap
            let step = (fk - fa).abs();
            if k >= 3 && step < 0.9 * last_step && fk.abs() > 2.0 * step / (1.0 - step / last_step) {
                break;
            }
            last_step = step;
            a = zk;
            fa = fk;
        }
        let (mut b, mut fb) = bracket.ok_or(Error::OutOfBranch(x))?;
        let (mut z, mut fz) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
        for _ in 0..300 {
            let mut zn = z - fz * self.product(Point { pivot, u: z });
            let (l, h) = if a < b { (a, b) } else { (b, a) };
            if !(zn > l && zn < h) {
                zn = 0.5 * (a + b);
            }
            let fnew = f(zn)?;
            if fnew == 0.0 {
                return Ok(zn);
            }
            if fnew.signum() == fa.signum() {
                a = zn;
                fa = fnew;
            } else {
                b = zn;
                fb = fnew;
            }
            let tol = 2.0 * f64::EPSILON * zn.abs().max(f64::MIN_POSITIVE);
            if (zn - z).abs() <= tol || (b - a).abs() <= tol {
                return Ok(zn);
            }
            z = zn;
            fz = fnew;
        }
        let _ = fb;
        Err(Error::InversionFailure(format!("Newton iteration for x = {x} did not converge")))
    }
}

impl PotentialSpec {
    pub(crate) fn validate_basic(&self) -> Result<()> {
        let mut s = self.clone();
        s.branch = None;
        s.validate()
    }
}

/// x(z) on whichever admissible interval contains z.
pub fn x_of_z(spec: &PotentialSpec, z: f64) -> Result<f64> {
    let k = spec.interval_of(z).ok_or_else(|| Error::BranchViolation(format!("z = {z} is a singular point")))?;
    CoordinateMap::new(spec, k)?.x_of_z(z)
}

/// z(x) on the spec's branch.
pub fn z_of_x(spec: &PotentialSpec, x: f64) -> Result<f64> {
    CoordinateMap::for_branch(spec)?.z_of_x(x)
}
