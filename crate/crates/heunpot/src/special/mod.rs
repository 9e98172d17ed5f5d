//! Gauss hypergeometric function, gamma function and Jacobi elliptic functions.

mod elliptic;
mod gamma;
mod hyp2f1;

pub use elliptic::{carlson_rf, complete_k, elliptic_f, jacobi_elliptic, jacobi_sn, EllipticArgs};
pub use gamma::{gamma, ln_gamma, rgamma};
pub use hyp2f1::{gauss_2f1, gauss_2f1_upper, HypergeometricArgs};

use crate::C64;

/// Returns `Some(n)` when `x` is within `tol` of the non-positive integer `-n`.
pub(crate) fn nonpositive_integer(x: C64, tol: f64) -> Option<u64> {
    let r = x.re.round();
    if r <= 0.0 && (x.re - r).abs() <= tol && x.im.abs() <= tol {
        Some((-r) as u64)
    } else {
        None
    }
}

/// Distance of `x` from the nearest integer (complex distance).
pub(crate) fn integer_distance(x: C64) -> f64 {
    C64::new(x.re - x.re.round(), x.im).norm()
}
