//! Gamma function by the Lanczos approximation (g = 7, nine terms).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const G: f64 = 7.0;
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos(z: Complex64) -> Complex64 {
    // valid for Re z >= 1/2
    let z = z - 1.0;
    let mut x = Complex64::new(COEFFS[0], 0.0);
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * x
}

/// Complex gamma for `Re z > 0`.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(Error::Domain(format!("gamma requires Re z > 0, got {z}")));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(PI / (s * lanczos(1.0 - z)))
    } else {
        Ok(lanczos(z))
    }
}

/// Real gamma for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma requires x > 0, got {x}")));
    }
    Ok(gamma_pos(x))
}

/// Real gamma without the domain check; `x` must be positive.
pub(crate) fn gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * lanczos_real(1.0 - x))
    } else {
        lanczos_real(x)
    }
}

fn lanczos_real(x: f64) -> f64 {
    let z = x - 1.0;
    let mut s = COEFFS[0];
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    if x > 140.0 {
        // split the power to stay in range
        let h = t.powf(0.5 * (z + 0.5));
        return (2.0 * PI).sqrt() * h * (h * (-t).exp()) * s;
    }
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * s
}

/// `Γ(a) / Γ(b)` for positive arguments.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    gamma_pos(a) / gamma_pos(b)
}
