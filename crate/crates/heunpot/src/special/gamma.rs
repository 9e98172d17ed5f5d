use crate::C64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// log Γ(z) for complex z (Lanczos, g = 7, with reflection for Re z < ½).
///
/// The imaginary part is only meaningful modulo 2π.
pub fn ln_gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        C64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(C64::new(1.0, 0.0) - z)
    } else {
        let z = z - 1.0;
        let mut x = C64::new(LANCZOS[0], 0.0);
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            x += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        C64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln()
    }
}

pub fn gamma(z: C64) -> C64 {
    ln_gamma(z).exp()
}

/// 1/Γ(z), exactly zero at the poles of Γ.
pub fn rgamma(z: C64) -> C64 {
    if super::nonpositive_integer(z, 0.0).is_some() {
        C64::new(0.0, 0.0)
    } else {
        (-ln_gamma(z)).exp()
    }
}
