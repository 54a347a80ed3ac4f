//! Complex-plane geometry: admissible classes, ray angles, sector
//! decomposition of the upper half plane and the spectral coefficients.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const ANGLE_TOL: f64 = 1e-12;
const UNIT_TOL: f64 = 1e-14;

/// `q_t + a(−i∂_x)^n q = 0` with `N` boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquationClass {
    pub n: usize,
    #[serde(serialize_with = "ser_complex")]
    pub a: Complex64,
    #[serde(rename = "N")]
    pub big_n: usize,
}

fn ser_complex<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

/// Check `(n, a, N)` against the admissibility rules.
pub fn validate_class(n: usize, a: Complex64, big_n: usize) -> Result<EquationClass> {
    if n < 2 {
        return Err(Error::InvalidClass(format!("order n = {n} must be at least 2")));
    }
    if (a.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidClass(format!("|a| = {} is not 1", a.norm())));
    }
    if n % 2 == 0 {
        if a.re < -UNIT_TOL {
            return Err(Error::InvalidClass(format!("n even requires Re a >= 0, got {}", a.re)));
        }
        if big_n != n / 2 {
            return Err(Error::InvalidClass(format!("n even requires N = n/2 = {}", n / 2)));
        }
    } else {
        if a.re.abs() > UNIT_TOL {
            return Err(Error::InvalidClass(format!("n odd requires Re a = 0, got {}", a.re)));
        }
        let want = if a.im > 0.0 { (n + 1) / 2 } else { (n - 1) / 2 };
        if big_n != want {
            return Err(Error::InvalidClass(format!(
                "n odd with a = {}i requires N = {want}",
                if a.im > 0.0 { "" } else { "-" }
            )));
        }
    }
    Ok(EquationClass { n, a, big_n })
}

impl EquationClass {
    pub fn heat() -> Self {
        Self { n: 2, a: Complex64::new(1.0, 0.0), big_n: 1 }
    }
    pub fn schrodinger() -> Self {
        Self { n: 2, a: Complex64::new(0.0, 1.0), big_n: 1 }
    }
    /// Third order, `a = −i`, one boundary condition.
    pub fn lkdv1() -> Self {
        Self { n: 3, a: Complex64::new(0.0, -1.0), big_n: 1 }
    }
    /// Third order, `a = i`, two boundary conditions.
    pub fn lkdv2() -> Self {
        Self { n: 3, a: Complex64::new(0.0, 1.0), big_n: 2 }
    }

    pub fn arg_a(&self) -> f64 {
        self.a.arg()
    }

    /// `aλ^n`.
    pub fn symbol(&self, lambda: Complex64) -> Complex64 {
        self.a * lambda.powi(self.n as i32)
    }
}

/// The `n − N` ray angles, sorted descending.
pub fn enumerate_theta(class: &EquationClass) -> Vec<f64> {
    let n = class.n as f64;
    let count = class.n - class.big_n;
    let mut out: Vec<f64> = if class.n % 2 == 1 {
        if class.a.im < 0.0 {
            (0..count).map(|r| -PI * (4 * r + 1) as f64 / (2.0 * n)).collect()
        } else {
            (1..=count).map(|r| -PI * (4 * r - 1) as f64 / (2.0 * n)).collect()
        }
    } else {
        let phi = class.arg_a();
        let shifted = 2.0 * (PI + phi) / PI;
        (0..count).map(|r| -PI * (4.0 * r as f64 + shifted) / (2.0 * n)).collect()
    };
    out.sort_by(|x, y| y.partial_cmp(x).unwrap());
    out
}

/// Whether `θ` satisfies `e^{inθ} = −1/a` and lies in `[−(2n−1)π/2n, −π/2n]`.
pub fn theta_admissible(class: &EquationClass, theta: f64) -> bool {
    let n = class.n as f64;
    let lhs = Complex64::new(0.0, n * theta).exp();
    let ok_root = (lhs + 1.0 / class.a).norm() <= ANGLE_TOL;
    ok_root && in_theta_band(class.n, theta)
}

pub fn in_theta_band(n: usize, theta: f64) -> bool {
    let n = n as f64;
    theta >= -(2.0 * n - 1.0) * PI / (2.0 * n) - ANGLE_TOL && theta <= -PI / (2.0 * n) + ANGLE_TOL
}

/// All solutions of `e^{inθ} = −1/a` in the band, found by scanning the 2n
/// candidates `(arg(−1/a) + 2πk)/n`.
pub fn brute_force_theta(class: &EquationClass) -> Vec<f64> {
    let n = class.n as f64;
    let base = (-1.0 / class.a).arg();
    let mut out: Vec<f64> = (-(2 * class.n as i64)..=0)
        .map(|k| (base + 2.0 * PI * k as f64) / n)
        .filter(|&t| in_theta_band(class.n, t))
        .collect();
    out.sort_by(|x, y| y.partial_cmp(x).unwrap());
    out.dedup_by(|x, y| (*x - *y).abs() < ANGLE_TOL);
    out
}

/// Argument bounds of the `N` connected components of `{Re(aλ^n) < 0} ∩ C⁺`.
pub fn sectors(class: &EquationClass) -> Vec<(f64, f64)> {
    let n = class.n as f64;
    let phi = class.arg_a();
    (1..=class.big_n)
        .map(|k| {
            let k = k as f64;
            ((PI * (4.0 * k - 3.0) / 2.0 - phi) / n, (PI * (4.0 * k - 1.0) / 2.0 - phi) / n)
        })
        .collect()
}

/// `c_j(λ) = −aλ^n / (iλ)^{j+1}`.
pub fn c_coeff(lambda: Complex64, j: usize, class: &EquationClass) -> Result<Complex64> {
    if lambda.norm() == 0.0 {
        if j + 1 >= class.n {
            return Err(Error::Domain(format!("c_{j} has a pole at the origin")));
        }
        return Ok(Complex64::new(0.0, 0.0));
    }
    let il = Complex64::i() * lambda;
    Ok(-class.a * lambda.powi(class.n as i32) / il.powi(j as i32 + 1))
}

/// Principal `(−iρ)^{1/n}`, with the cut along `ρ ∈ −i[0, ∞)`.
pub fn principal_root(rho: Complex64, n: usize) -> Result<Complex64> {
    if rho.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if rho.re == 0.0 && rho.im < 0.0 {
        return Err(Error::BranchCut(format!("rho = {rho}")));
    }
    let w = -Complex64::i() * rho;
    Ok(Complex64::from_polar(w.norm().powf(1.0 / n as f64), w.arg() / n as f64))
}

/// `λ = e^{iθ}(−iρ)^{1/n}`; with admissible `θ`, `aλ^n = iρ`.
pub fn nth_root_map(rho: Complex64, theta: f64, n: usize) -> Result<Complex64> {
    Ok(Complex64::from_polar(1.0, theta) * principal_root(rho, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn validation_examples() {
        assert!(validate_class(2, Complex64::new(1.0, 0.0), 1).is_ok());
        assert!(validate_class(3, Complex64::new(0.0, 1.0), 2).is_ok());
        let err = validate_class(3, Complex64::new(1.0, 0.0), 1).unwrap_err();
        assert!(err.to_string().contains("Re a = 0"));
        assert!(validate_class(2, Complex64::new(-1.0, 0.0), 1).is_err());
        assert!(validate_class(2, Complex64::new(2.0, 0.0), 1).is_err());
        assert!(validate_class(3, Complex64::new(0.0, -1.0), 2).is_err());
    }

    #[test]
    fn theta_examples() {
        assert!(close(&enumerate_theta(&EquationClass::heat()), &[-PI / 2.0]));
        assert!(close(&enumerate_theta(&EquationClass::lkdv1()), &[-PI / 6.0, -5.0 * PI / 6.0]));
        assert!(close(&enumerate_theta(&EquationClass::lkdv2()), &[-PI / 2.0]));
        assert!(close(&enumerate_theta(&EquationClass::schrodinger()), &[-3.0 * PI / 4.0]));
        let six = validate_class(6, Complex64::from_polar(1.0, -PI / 6.0), 3).unwrap();
        let want = [-5.0 * PI / 36.0, -17.0 * PI / 36.0, -29.0 * PI / 36.0];
        assert!(close(&enumerate_theta(&six), &want));
        let six_plus = validate_class(6, Complex64::from_polar(1.0, PI / 6.0), 3).unwrap();
        let want = [-7.0 * PI / 36.0, -19.0 * PI / 36.0, -31.0 * PI / 36.0];
        assert!(close(&enumerate_theta(&six_plus), &want));
    }

    #[test]
    fn sector_examples() {
        let s = sectors(&EquationClass::heat());
        assert!(close(&[s[0].0, s[0].1], &[PI / 4.0, 3.0 * PI / 4.0]));
        let s = sectors(&EquationClass::schrodinger());
        assert!(close(&[s[0].0, s[0].1], &[0.0, PI / 2.0]));
        let s = sectors(&EquationClass::lkdv2());
        assert!(close(&[s[0].0, s[0].1, s[1].0, s[1].1], &[0.0, PI / 3.0, 2.0 * PI / 3.0, PI]));
    }

    #[test]
    fn c_coeff_examples() {
        let l = Complex64::new(0.7, -0.3);
        let heat = EquationClass::heat();
        assert!((c_coeff(l, 0, &heat).unwrap() - Complex64::i() * l).norm() < 1e-15);
        assert!((c_coeff(l, 1, &heat).unwrap() - 1.0).norm() < 1e-15);
        assert!((c_coeff(l, 0, &EquationClass::lkdv1()).unwrap() - l * l).norm() < 1e-15);
        assert!(c_coeff(Complex64::new(0.0, 0.0), 1, &heat).is_err());
    }

    #[test]
    fn root_map_examples() {
        let l = nth_root_map(Complex64::new(0.0, 1.0), -PI / 2.0, 2).unwrap();
        assert!((l - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(nth_root_map(Complex64::new(0.0, 0.0), 0.3, 3).unwrap(), Complex64::new(0.0, 0.0));
        let l = nth_root_map(Complex64::new(1.0, 0.0), -PI / 6.0, 3).unwrap();
        assert!((l - Complex64::from_polar(1.0, -PI / 3.0)).norm() < 1e-15);
        let c = EquationClass::lkdv1();
        assert!((c.symbol(l) - Complex64::i()).norm() < 1e-12);
        assert!(nth_root_map(Complex64::new(0.0, -2.0), -PI / 2.0, 2).is_err());
    }
}
