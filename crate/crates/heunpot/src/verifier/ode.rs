//! Dormand–Prince 5(4) with dense output for ψ″ = −k(E − V(x))ψ.

use crate::catalog::{potential_value, CoordinateMap, PotentialSpec};
use crate::{Error, Result, C64};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [&[f64]; 7] = [
    &[],
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

type State = [f64; 4];

/// ψ and ψ′ at the requested sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeSolution {
    pub x: Vec<f64>,
    pub psi: Vec<C64>,
    pub dpsi: Vec<C64>,
    pub accepted: usize,
    pub rejected: usize,
}

fn axpy(y: &State, h: f64, ks: &[State], coeffs: &[f64]) -> State {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(coeffs) {
        if c != 0.0 {
            for i in 0..4 {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

/// Integrates ψ″ + k(E − V(x))ψ = 0 from `x_start` to `x_end` (either direction)
/// and samples ψ, ψ′ at `samples`, which must lie in the closed interval.
///
/// Error control is relative to the size of the state: each step keeps the
/// local error below `tol · max(‖y‖∞, tiny)`.
pub fn integrate_schrodinger<V>(
    potential: V,
    coupling: f64,
    energy: f64,
    x_start: f64,
    x_end: f64,
    psi0: C64,
    dpsi0: C64,
    samples: &[f64],
    tol: f64,
) -> Result<OdeSolution>
where
    V: Fn(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::ParameterOutOfRange { name: "tol", value: tol });
    }
    let dir = if x_end >= x_start { 1.0 } else { -1.0 };
    let (lo, hi) = (x_start.min(x_end), x_start.max(x_end));
    if let Some(&bad) = samples.iter().find(|&&s| s < lo || s > hi || !s.is_finite()) {
        return Err(Error::ParameterOutOfRange { name: "sample", value: bad });
    }
    let rhs = |x: f64, y: &State| -> Result<State> {
        let w = coupling * (energy - potential(x)?);
        Ok([y[2], y[3], -w * y[0], -w * y[1]])
    };
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&a, &b| (dir * samples[a]).total_cmp(&(dir * samples[b])));
    let mut psi = vec![C64::new(0.0, 0.0); samples.len()];
    let mut dpsi = psi.clone();
    let mut next = 0;

    let mut x = x_start;
    let mut y: State = [psi0.re, psi0.im, dpsi0.re, dpsi0.im];
    let emit = |idx: usize, y: &State, psi: &mut Vec<C64>, dpsi: &mut Vec<C64>| {
        psi[idx] = C64::new(y[0], y[1]);
        dpsi[idx] = C64::new(y[2], y[3]);
    };
    while next < order.len() && samples[order[next]] == x_start {
        emit(order[next], &y, &mut psi, &mut dpsi);
        next += 1;
    }
    let span = hi - lo;
    let mut h = dir * (span / 100.0).clamp(f64::MIN_POSITIVE, 0.05);
    let mut k1 = rhs(x, &y)?;
    let (mut accepted, mut rejected) = (0, 0);
    while dir * (x_end - x) > 0.0 {
        if dir * (x + h - x_end) > 0.0 {
            h = x_end - x;
        }
        if h.abs() <= 1e-14 * x.abs().max(1.0) {
            return Err(Error::StepUnderflow { x });
        }
        let mut k: [State; 7] = [k1, [0.0; 4], [0.0; 4], [0.0; 4], [0.0; 4], [0.0; 4], [0.0; 4]];
        let mut failed = false;
        for s in 1..7 {
            let ys = axpy(&y, h, &k[..s], A[s]);
            match rhs(x + C[s] * h, &ys) {
                Ok(v) if v.iter().all(|t| t.is_finite()) => k[s] = v,
                Ok(_) => {
                    failed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if failed {
            rejected += 1;
            h *= 0.2;
            continue;
        }
        let y1 = axpy(&y, h, &k[..6], A[6]);
        let size = y.iter().chain(y1.iter()).fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let mut err = 0.0f64;
        for i in 0..4 {
            let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum::<f64>() * h;
            err = err.max(e.abs() / (tol * size));
        }
        if !err.is_finite() {
            rejected += 1;
            h *= 0.2;
            continue;
        }
        if err <= 1.0 {
            let x1 = x + h;
            // dense output on [x, x1]
            while next < order.len() && dir * (samples[order[next]] - x1) <= 0.0 {
                let s = samples[order[next]];
                let th = (s - x) / h;
                let mut yt = [0.0; 4];
                for i in 0..4 {
                    let rc1 = y[i];
                    let rc2 = y1[i] - y[i];
                    let rc3 = h * k[0][i] - rc2;
                    let rc4 = rc2 - h * k[6][i] - rc3;
                    let rc5: f64 = h * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>();
                    yt[i] = rc1 + th * (rc2 + (1.0 - th) * (rc3 + th * (rc4 + (1.0 - th) * rc5)));
                }
                emit(order[next], &yt, &mut psi, &mut dpsi);
                next += 1;
            }
            x = x1;
            y = y1;
            k1 = k[6];
            accepted += 1;
        } else {
            rejected += 1;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
    }
    while next < order.len() {
        emit(order[next], &y, &mut psi, &mut dpsi);
        next += 1;
    }
    Ok(OdeSolution { x: samples.to_vec(), psi, dpsi, accepted, rejected })
}

/// ODE oracle for a catalog potential on the spec's branch.
pub fn ode_integrate(
    spec: &PotentialSpec,
    energy: f64,
    x_start: f64,
    x_end: f64,
    psi0: C64,
    dpsi0: C64,
    samples: &[f64],
    tol: f64,
) -> Result<OdeSolution> {
    let map = CoordinateMap::for_branch(spec)?;
    let v = |x: f64| -> Result<f64> {
        let z = map.z_of_x(x).map_err(|_| Error::StepUnderflow { x })?;
        potential_value(spec, z)
    };
    integrate_schrodinger(v, spec.coupling(), energy, x_start, x_end, psi0, dpsi0, samples, tol)
}
