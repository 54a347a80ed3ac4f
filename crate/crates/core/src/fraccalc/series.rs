//! Fractional power series `Σ Y_u t^{u·α}` and their exact algebra.

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::gamma::gamma_ratio;
use crate::error::{Error, Result};

pub type Alpha = Ratio<i64>;

/// The exponent `u·α` of a single monomial, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FracMonomialExponent {
    pub u: usize,
    pub alpha: Alpha,
}

impl FracMonomialExponent {
    pub fn value(&self) -> Alpha {
        self.alpha * Ratio::from_integer(self.u as i64)
    }

    pub fn to_f64(&self) -> f64 {
        let v = self.value();
        *v.numer() as f64 / *v.denom() as f64
    }
}

pub fn alpha_f64(a: Alpha) -> f64 {
    *a.numer() as f64 / *a.denom() as f64
}

pub fn parse_alpha(s: &str) -> Result<Alpha> {
    let s = s.trim();
    let r = if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| Error::Config(format!("bad alpha {s}")))?;
        let q: i64 = q.trim().parse().map_err(|_| Error::Config(format!("bad alpha {s}")))?;
        if q == 0 {
            return Err(Error::Config(format!("bad alpha {s}")));
        }
        Ratio::new(p, q)
    } else {
        let p: i64 = s.parse().map_err(|_| Error::Config(format!("bad alpha {s}")))?;
        Ratio::from_integer(p)
    };
    Ok(r)
}

/// Finite fractional power series with exponent step `alpha ∈ (0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FracPowerSeries {
    alpha: Alpha,
    coeffs: Vec<Complex64>,
    radius: Option<f64>,
}

fn check_alpha(alpha: Alpha) -> Result<()> {
    if *alpha.numer() <= 0 || alpha > Ratio::from_integer(1) {
        return Err(Error::Domain(format!("alpha must lie in (0,1], got {alpha}")));
    }
    Ok(())
}

impl FracPowerSeries {
    pub fn new(alpha: Alpha, coeffs: Vec<Complex64>) -> Result<Self> {
        check_alpha(alpha)?;
        if coeffs.is_empty() {
            return Err(Error::Domain("series needs at least one coefficient".into()));
        }
        Ok(Self { alpha, coeffs, radius: None })
    }

    pub fn from_real(alpha: Alpha, coeffs: &[f64]) -> Result<Self> {
        Self::new(alpha, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Zero series with `len` coefficients (at least one).
    pub fn zero(alpha: Alpha, len: usize) -> Self {
        check_alpha(alpha).expect("alpha in (0,1]");
        Self { alpha, coeffs: vec![Complex64::new(0.0, 0.0); len.max(1)], radius: None }
    }

    pub fn constant(alpha: Alpha, c: Complex64) -> Self {
        let mut s = Self::zero(alpha, 1);
        s.coeffs[0] = c;
        s
    }

    pub fn with_radius(mut self, radius: Option<f64>) -> Self {
        self.radius = radius;
        self
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn alpha_f64(&self) -> f64 {
        alpha_f64(self.alpha)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, u: usize) -> Complex64 {
        self.coeffs.get(u).copied().unwrap_or_default()
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    /// Highest index `U` (the series holds `U + 1` coefficients).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn exponent(&self, u: usize) -> FracMonomialExponent {
        FracMonomialExponent { u, alpha: self.alpha }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    /// Truncate or zero-pad to `order + 1` coefficients.
    pub fn resized(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, Complex64::new(0.0, 0.0));
        Self { alpha: self.alpha, coeffs: c, radius: self.radius }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            return self.coeffs[0];
        }
        // Horner in s = t^α
        let s = t.powf(self.alpha_f64());
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    fn same_alpha(&self, other: &Self) -> Result<()> {
        if self.alpha != other.alpha {
            return Err(Error::AlphaMismatch {
                left: self.alpha.to_string(),
                right: other.alpha.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_alpha(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|u| self.coeff(u) + other.coeff(u)).collect();
        Ok(Self { alpha: self.alpha, coeffs, radius: min_radius(self.radius, other.radius) })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            alpha: self.alpha,
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
            radius: self.radius,
        }
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_alpha(other)?;
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n)
            .map(|u| (0..=u).map(|v| self.coeffs[v] * other.coeffs[u - v]).sum())
            .collect();
        Ok(Self { alpha: self.alpha, coeffs, radius: min_radius(self.radius, other.radius) })
    }

    /// Full Cauchy product up to `order`, padding missing coefficients with zero.
    pub fn mul_to(&self, other: &Self, order: usize) -> Result<Self> {
        self.same_alpha(other)?;
        let coeffs = (0..=order)
            .map(|u| (0..=u).map(|v| self.coeff(v) * other.coeff(u - v)).sum())
            .collect();
        Ok(Self { alpha: self.alpha, coeffs, radius: min_radius(self.radius, other.radius) })
    }

    /// Coefficient-ratio radius estimate; diagnostic only.
    pub fn radius_estimate(&self) -> Option<f64> {
        let a = self.alpha_f64();
        let mut est = Vec::new();
        for u in (1..self.coeffs.len()).rev().take(4) {
            let (hi, lo) = (self.coeffs[u].norm(), self.coeffs[u - 1].norm());
            if hi > 0.0 && lo > 0.0 {
                // |Y_{u-1}/Y_u| ≈ R^α
                est.push((lo / hi).powf(1.0 / a));
            }
        }
        if est.is_empty() {
            None
        } else {
            Some(est.iter().sum::<f64>() / est.len() as f64)
        }
    }
}

fn min_radius(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

/// Caputo derivative of order `alpha` applied termwise:
/// `t^{uα} ↦ Γ(uα+1)/Γ((u−1)α+1) t^{(u−1)α}`, the constant term is annihilated.
pub fn caputo_series(y: &FracPowerSeries, order: Alpha) -> Result<FracPowerSeries> {
    if order != y.alpha {
        return Err(Error::AlphaMismatch { left: order.to_string(), right: y.alpha.to_string() });
    }
    let a = y.alpha_f64();
    if y.coeffs.len() == 1 {
        return Ok(FracPowerSeries::zero(y.alpha, 1).with_radius(y.radius));
    }
    let coeffs = (1..y.coeffs.len())
        .map(|u| y.coeffs[u] * gamma_ratio(u as f64 * a + 1.0, (u - 1) as f64 * a + 1.0))
        .collect();
    Ok(FracPowerSeries { alpha: y.alpha, coeffs, radius: y.radius })
}

/// Riemann-Liouville integral of order `m·α`:
/// `t^{uα} ↦ Γ(uα+1)/Γ(uα+mα+1) t^{(u+m)α}`.
pub fn rl_integral_series(y: &FracPowerSeries, order: Alpha) -> Result<FracPowerSeries> {
    let m = order / y.alpha;
    if !m.is_integer() || *m.numer() <= 0 {
        return Err(Error::Domain(format!(
            "integral order {order} is not a positive multiple of {}",
            y.alpha
        )));
    }
    let m = *m.numer() as usize;
    let a = y.alpha_f64();
    let ord = alpha_f64(order);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); y.coeffs.len() + m];
    for (u, c) in y.coeffs.iter().enumerate() {
        let e = u as f64 * a;
        coeffs[u + m] = c * gamma_ratio(e + 1.0, e + ord + 1.0);
    }
    Ok(FracPowerSeries { alpha: y.alpha, coeffs, radius: y.radius })
}

/// JSON record `{alpha: "p/q", coeffs: [[re, im], …], radius: number | null}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SeriesRecord {
    pub alpha: String,
    pub coeffs: Vec<[f64; 2]>,
    pub radius: Option<f64>,
}

impl From<&FracPowerSeries> for SeriesRecord {
    fn from(s: &FracPowerSeries) -> Self {
        SeriesRecord {
            alpha: format!("{}/{}", s.alpha.numer(), s.alpha.denom()),
            coeffs: s.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            radius: s.radius,
        }
    }
}

impl TryFrom<&SeriesRecord> for FracPowerSeries {
    type Error = Error;
    fn try_from(r: &SeriesRecord) -> Result<Self> {
        let alpha = parse_alpha(&r.alpha)?;
        let coeffs = r.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect();
        Ok(FracPowerSeries::new(alpha, coeffs)?.with_radius(r.radius))
    }
}

impl Serialize for FracPowerSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FracPowerSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SeriesRecord::deserialize(d)?;
        FracPowerSeries::try_from(&r).map_err(serde::de::Error::custom)
    }
}

/// CSV rows `u, exponent, re, im` with the exponent written as `p/q`.
pub fn series_to_csv<W: std::io::Write>(s: &FracPowerSeries, w: W) -> std::io::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["u", "exponent", "re", "im"])?;
    for (u, c) in s.coeffs.iter().enumerate() {
        let e = s.exponent(u).value();
        wr.write_record([
            u.to_string(),
            format!("{}/{}", e.numer(), e.denom()),
            format!("{:.17e}", c.re),
            format!("{:.17e}", c.im),
        ])?;
    }
    wr.flush()
}
