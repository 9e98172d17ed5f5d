//! Jacobi elliptic functions (parameter convention, 0 ≤ m ≤ 1) and elliptic integrals.

use crate::{Error, Result};
use std::f64::consts::FRAC_PI_2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticArgs {
    pub u: f64,
    /// Parameter m in sn(u | m); sn(u | 0) = sin u.
    pub m: f64,
}

fn check_m(m: f64) -> Result<()> {
    if (0.0..=1.0).contains(&m) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name: "m", value: m })
    }
}

/// sn(u | m) by the descending Landen (AGM) scheme.
pub fn jacobi_sn(args: &EllipticArgs, tol: f64) -> Result<f64> {
    Ok(jacobi_elliptic_tol(args.u, args.m, tol)?.0)
}

/// (sn, cn, dn) at (u | m).
pub fn jacobi_elliptic(u: f64, m: f64) -> Result<(f64, f64, f64)> {
    jacobi_elliptic_tol(u, m, f64::EPSILON)
}

fn jacobi_elliptic_tol(u: f64, m: f64, tol: f64) -> Result<(f64, f64, f64)> {
    check_m(m)?;
    let sign = if u < 0.0 { -1.0 } else { 1.0 };
    let v = u.abs();
    if m == 1.0 {
        let s = v.tanh();
        let c = 1.0 / v.cosh();
        return Ok((sign * s, c, c));
    }
    if m == 0.0 {
        return Ok((sign * v.sin(), v.cos(), 1.0));
    }
    let tol = tol.max(f64::EPSILON);
    let mut a = vec![1.0];
    let mut c = vec![m.sqrt()];
    let mut b = (1.0 - m).sqrt();
    while c.last().unwrap().abs() > tol * a.last().unwrap() && a.len() < 40 {
        let an = *a.last().unwrap();
        c.push(0.5 * (an - b));
        a.push(0.5 * (an + b));
        b = (an * b).sqrt();
    }
    let n = a.len() - 1;
    let mut phi = 2f64.powi(n as i32) * a[n] * v;
    let mut prev = phi;
    for k in (1..=n).rev() {
        prev = phi;
        phi = 0.5 * (phi + (c[k] * phi.sin() / a[k]).asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = if n == 0 { 1.0 } else { cn / (prev - phi).cos() };
    Ok((sign * sn, cn, dn))
}

/// Arithmetic–geometric mean of two non-negative numbers.
fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..60 {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    a
}

/// Complete elliptic integral of the first kind K(m); infinite at m = 1.
pub fn complete_k(m: f64) -> Result<f64> {
    check_m(m)?;
    if m == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(FRAC_PI_2 / agm(1.0, (1.0 - m).sqrt()))
}

/// Carlson's symmetric integral R_F(x, y, z) for non-negative arguments, at most one zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..100 {
        let a = (x + y + z) / 3.0;
        let dx = 1.0 - x / a;
        let dy = 1.0 - y / a;
        let dz = 1.0 - z / a;
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-3 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let l = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + l);
        y = 0.25 * (y + l);
        z = 0.25 * (z + l);
    }
    let a = (x + y + z) / 3.0;
    1.0 / a.sqrt()
}

/// Incomplete elliptic integral of the first kind F(φ | m) for |φ| ≤ π/2.
pub fn elliptic_f(phi: f64, m: f64) -> f64 {
    let s = phi.sin();
    let c = phi.cos();
    s * carlson_rf(c * c, 1.0 - m * s * s, 1.0)
}
