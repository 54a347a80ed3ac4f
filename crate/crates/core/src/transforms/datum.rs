//! Initial data on the half line and their Fourier transforms
//! `q̂0(λ) = ∫_0^∞ e^{−iλx} q0(x) dx`.

use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::{adaptive_edges, uniform_edges, Estimate};

/// Tolerances and truncation parameters shared by all quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Fixed truncation radius for spectral integrals; chosen adaptively when `None`.
    pub rho_max: Option<f64>,
    /// Radius of the detour around the branch point at `ρ = 0`.
    pub r_arc: f64,
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-8, rel_tol: 1e-6, rho_max: None, r_arc: 1e-3, max_panels: 4000 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol >= 0.0 && self.r_arc > 0.0) {
            return Err(Error::Config(format!("invalid quadrature tolerances {self:?}")));
        }
        if let Some(r) = self.rho_max {
            if !(r > 1.0) {
                return Err(Error::Config(format!("rho_max = {r} must exceed 1")));
            }
        }
        Ok(())
    }

    /// Both tolerances scaled by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self { abs_tol: self.abs_tol * factor, rel_tol: self.rel_tol * factor, ..*self }
    }
}

type DatumFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Zero,
    /// `Σ p_k x^k e^{−κx}`.
    ExpPoly { poly: Vec<Complex64>, kappa: f64 },
    /// `A e^{−((x−c)/w)²}`.
    Gaussian { amp: Complex64, center: f64, width: f64 },
    Custom { f: DatumFn, derivs: Vec<Complex64>, decay: f64 },
}

/// Initial datum `q0` with its derivatives at the origin.
#[derive(Clone)]
pub struct InitialDatum {
    kind: Kind,
}

impl fmt::Debug for InitialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Zero => write!(f, "InitialDatum::Zero"),
            Kind::ExpPoly { poly, kappa } => write!(f, "InitialDatum::ExpPoly({poly:?}, {kappa})"),
            Kind::Gaussian { amp, center, width } => {
                write!(f, "InitialDatum::Gaussian({amp}, {center}, {width})")
            }
            Kind::Custom { derivs, decay, .. } => {
                write!(f, "InitialDatum::Custom(derivs = {derivs:?}, decay = {decay})")
            }
        }
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl InitialDatum {
    pub fn zero() -> Self {
        Self { kind: Kind::Zero }
    }

    /// `P(x) e^{−κx}` with `P(x) = Σ poly[k] x^k`.
    pub fn exp_poly(poly: Vec<Complex64>, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::Domain(format!("decay rate must be positive, got {kappa}")));
        }
        if poly.is_empty() {
            return Err(Error::Domain("empty polynomial".into()));
        }
        Ok(Self { kind: Kind::ExpPoly { poly, kappa } })
    }

    pub fn exp_poly_real(poly: &[f64], kappa: f64) -> Result<Self> {
        Self::exp_poly(poly.iter().map(|&p| Complex64::new(p, 0.0)).collect(), kappa)
    }

    pub fn gaussian(amp: Complex64, center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::Domain(format!("width must be positive, got {width}")));
        }
        Ok(Self { kind: Kind::Gaussian { amp, center, width } })
    }

    /// Arbitrary datum with `|q0(x)| ≲ e^{−decay·x}` and the supplied derivatives at 0.
    pub fn custom(
        f: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        derivs: Vec<Complex64>,
        decay: f64,
    ) -> Result<Self> {
        if !(decay > 0.0) {
            return Err(Error::Domain(format!("decay rate must be positive, got {decay}")));
        }
        if derivs.is_empty() {
            return Err(Error::Domain("custom datum needs at least q0(0)".into()));
        }
        Ok(Self { kind: Kind::Custom { f: Arc::new(f), derivs, decay } })
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            Kind::Zero => true,
            Kind::ExpPoly { poly, .. } => poly.iter().all(|p| p.norm() == 0.0),
            Kind::Gaussian { amp, .. } => amp.norm() == 0.0,
            Kind::Custom { .. } => false,
        }
    }

    /// Whether `q̂0` is available in closed form at every non-pole `λ`.
    pub fn has_closed_form_hat(&self) -> bool {
        matches!(self.kind, Kind::Zero | Kind::ExpPoly { .. })
    }

    /// Length scale of decay.
    pub fn decay_scale(&self) -> f64 {
        match &self.kind {
            Kind::Zero => 1.0,
            Kind::ExpPoly { kappa, .. } => 1.0 / kappa,
            Kind::Gaussian { width, .. } => *width,
            Kind::Custom { decay, .. } => 1.0 / decay,
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.deriv(x, 0).unwrap_or_default()
    }

    /// `q0^{(j)}(x)`; `None` when a custom datum lacks derivative information.
    pub fn deriv(&self, x: f64, j: usize) -> Option<Complex64> {
        match &self.kind {
            Kind::Zero => Some(Complex64::new(0.0, 0.0)),
            Kind::ExpPoly { poly, kappa } => {
                // Leibniz: Σ_i C(j,i) P^{(i)}(x) (−κ)^{j−i}
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..=j {
                    // P^{(i)}(x) by Horner over k ≥ i
                    let mut pi = Complex64::new(0.0, 0.0);
                    for k in (i..poly.len()).rev() {
                        let fall = (k - i + 1..=k).fold(1.0, |a, m| a * m as f64);
                        pi = pi * x + poly[k] * fall;
                    }
                    acc += pi * binom(j, i) * (-kappa).powi((j - i) as i32);
                }
                Some(acc * (-kappa * x).exp())
            }
            Kind::Gaussian { amp, center, width } => {
                // d^j/dx^j e^{−u²} = (−1)^j H_j(u) e^{−u²} / w^j
                let u = (x - center) / width;
                let (mut h0, mut h1) = (1.0, 2.0 * u);
                let hj = match j {
                    0 => h0,
                    _ => {
                        for m in 1..j {
                            let h2 = 2.0 * u * h1 - 2.0 * m as f64 * h0;
                            h0 = h1;
                            h1 = h2;
                        }
                        h1
                    }
                };
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                Some(amp * sign * hj * (-u * u).exp() / width.powi(j as i32))
            }
            Kind::Custom { f, derivs, .. } => {
                if j == 0 {
                    Some(f(x))
                } else if x == 0.0 {
                    derivs.get(j).copied()
                } else {
                    None
                }
            }
        }
    }

    /// `q0^{(j)}(0)` for `j < count`, as far as available.
    pub fn derivs_at_zero(&self, count: usize) -> Vec<Complex64> {
        (0..count).map_while(|j| self.deriv(0.0, j)).collect()
    }

    /// Beyond `X_max`, `|q0|` and `|q0'|` stay below `abs_tol·1e-2`, with
    /// the decay weighted by `e^{growth·x}`.
    pub fn x_max(&self, abs_tol: f64, growth: f64) -> f64 {
        let thr = abs_tol * 1e-2;
        let s = self.decay_scale();
        let h = 0.25 * s;
        let size = |x: f64| {
            let d1 = self.deriv(x, 1).map(|v| v.norm()).unwrap_or(0.0);
            (self.eval(x).norm() + d1) * (growth * x).exp()
        };
        let start = match &self.kind {
            Kind::Gaussian { center, .. } => center.max(0.0),
            _ => 0.0,
        };
        let mut x = start;
        let mut run = 0.0;
        while run < 20.0 * s {
            if size(x) < thr {
                run += h;
            } else {
                run = 0.0;
            }
            x += h;
            if x > 1e4 * s {
                break;
            }
        }
        (x - run).max(h)
    }

    /// `q̂0(λ)` with an error estimate.
    ///
    /// Closed-form data accept any `λ` away from the pole at `iκ`. Quadrature
    /// data require the integrand `e^{−iλx}q0(x)` to decay, which holds for
    /// `Im λ < decay rate / 2` (any `Im λ` for Gaussians up to a growth guard).
    pub fn hat(&self, lambda: Complex64, cfg: &QuadratureConfig) -> Result<Estimate> {
        match &self.kind {
            Kind::Zero => Ok(Estimate::zero()),
            Kind::ExpPoly { poly, kappa } => {
                let z = Complex64::new(*kappa, 0.0) + Complex64::i() * lambda;
                if z.norm() < 1e-300 {
                    return Err(Error::Domain(format!("q0_hat pole at λ = {lambda}")));
                }
                let mut acc = Complex64::new(0.0, 0.0);
                let mut fact = 1.0;
                let mut zp = z;
                for (k, p) in poly.iter().enumerate() {
                    if k > 0 {
                        fact *= k as f64;
                        zp *= z;
                    }
                    acc += p * fact / zp;
                }
                Ok(Estimate { value: acc, error: 4.0 * f64::EPSILON * acc.norm() })
            }
            _ => self.hat_quadrature(lambda, cfg),
        }
    }

    /// `q̂0(λ)` by direct quadrature, for any datum kind.
    pub fn hat_quadrature(&self, lambda: Complex64, cfg: &QuadratureConfig) -> Result<Estimate> {
        let growth = lambda.im;
        let limit = match &self.kind {
            Kind::Gaussian { width, .. } => 8.0 / width,
            Kind::Custom { decay, .. } => 0.5 * decay,
            Kind::ExpPoly { kappa, .. } => 0.5 * kappa,
            Kind::Zero => f64::INFINITY,
        };
        if growth > limit {
            return Err(Error::Unstable(format!(
                "q0_hat integrand grows along x for Im λ = {growth:.3e} > {limit:.3e}"
            )));
        }
        let x_max = self.x_max(cfg.abs_tol, growth.max(0.0));
        let width = self.decay_scale().min(std::f64::consts::PI / lambda.re.abs().max(1e-300));
        let edges = uniform_edges(0.0, x_max, width);
        let f = |x: f64| (-Complex64::i() * lambda * x).exp() * self.eval(x);
        let (est, ok) = adaptive_edges(
            &f,
            &edges,
            0.1 * cfg.abs_tol,
            0.1 * cfg.rel_tol,
            cfg.max_panels.max(4 * edges.len()),
        );
        if !ok {
            return Err(Error::Tolerance(format!("q0_hat at λ = {lambda}: error {:.3e}", est.error)));
        }
        // tail beyond X_max is below abs_tol·1e-2 in magnitude per unit scale
        let tail = cfg.abs_tol * 1e-2 * 2.0 * self.decay_scale();
        Ok(Estimate { value: est.value, error: est.error + tail })
    }

    /// Cross-check of supplied derivatives against centred differences of `q0`.
    pub fn check_derivs(&self, tol: f64) -> Result<()> {
        if let Kind::Custom { f, derivs, .. } = &self.kind {
            if (derivs[0] - f(0.0)).norm() > tol {
                return Err(Error::Domain(format!(
                    "q0(0) = {} disagrees with supplied {}",
                    f(0.0),
                    derivs[0]
                )));
            }
            if derivs.len() > 1 {
                // one-sided second-order difference at the boundary
                let h = 1e-4 * self.decay_scale();
                let fd = (-3.0 * f(0.0) + 4.0 * f(h) - f(2.0 * h)) / (2.0 * h);
                let scale = 1.0 + derivs[1].norm();
                if (fd - derivs[1]).norm() > tol * scale.max(1.0) * 1e2 {
                    return Err(Error::Domain(format!(
                        "q0'(0) = {} disagrees with finite difference {fd}",
                        derivs[1]
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn exponential_hat_closed_form() {
        let d = InitialDatum::exp_poly_real(&[1.0], 1.0).unwrap();
        let cfg = QuadratureConfig::default();
        assert!((d.hat(c(0.0), &cfg).unwrap().value - 1.0).norm() < 1e-15);
        for l in [Complex64::new(2.0, -1.0), Complex64::new(-0.5, 0.0), Complex64::new(0.0, -3.0)] {
            let want = 1.0 / (1.0 + Complex64::i() * l);
            assert!((d.hat(l, &cfg).unwrap().value - want).norm() < 1e-15);
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let d = InitialDatum::exp_poly_real(&[1.0, 2.0, -0.5], 0.5).unwrap();
        let cfg = QuadratureConfig::default();
        for l in [Complex64::new(1.5, -0.7), Complex64::new(-3.0, -0.1), c(0.0), Complex64::new(0.3, 0.2)] {
            let a = d.hat(l, &cfg).unwrap().value;
            let b = d.hat_quadrature(l, &cfg).unwrap().value;
            assert!((a - b).norm() < 1e-9, "λ = {l}: {a} vs {b}");
        }
    }

    #[test]
    fn gaussian_hat_refinement() {
        // q0 = e^{−x²/2}: compare default and tightened quadrature at λ = −i
        let d = InitialDatum::gaussian(c(1.0), 0.0, std::f64::consts::SQRT_2).unwrap();
        let cfg = QuadratureConfig::default();
        let a = d.hat(Complex64::new(0.0, -1.0), &cfg).unwrap();
        let b = d.hat(Complex64::new(0.0, -1.0), &cfg.tightened(1e-4)).unwrap();
        assert!((a.value - b.value).norm() <= a.error.max(1e-8));
        // ∫ e^{−x − x²/2} = √(π/2)·e^{1/2}·erfc(1/√2)
        let want = (std::f64::consts::PI / 2.0).sqrt() * 0.5f64.exp() * 0.317_310_507_862_914_1;
        assert!((b.value.re - want).abs() < 1e-11);
    }

    #[test]
    fn derivatives_match_differences() {
        let data = [
            InitialDatum::exp_poly_real(&[1.0, 1.5, 0.3], 1.0).unwrap(),
            InitialDatum::gaussian(c(0.7), 1.2, 0.8).unwrap(),
        ];
        for d in &data {
            for j in 0..5 {
                let x = 0.6;
                let h = 1e-4;
                let fd = (d.deriv(x + h, j).unwrap() - d.deriv(x - h, j).unwrap()) / (2.0 * h);
                let an = d.deriv(x, j + 1).unwrap();
                assert!((fd - an).norm() < 1e-6 * (1.0 + an.norm()), "{d:?} j={j}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn growth_direction_rejected() {
        let d = InitialDatum::custom(|x| c((-x).exp()), vec![c(1.0), c(-1.0)], 1.0).unwrap();
        let cfg = QuadratureConfig::default();
        assert!(matches!(d.hat(Complex64::new(0.0, 2.0), &cfg), Err(Error::Unstable(_))));
        assert!(d.check_derivs(1e-8).is_ok());
        let bad = InitialDatum::custom(|x| c((-x).exp()), vec![c(1.0), c(1.0)], 1.0).unwrap();
        assert!(bad.check_derivs(1e-8).is_err());
    }

    #[test]
    fn x_max_bounds_datum() {
        let d = InitialDatum::exp_poly_real(&[1.0, 2.0], 1.0).unwrap();
        let x = d.x_max(1e-8, 0.0);
        assert!(d.eval(x).norm() < 1e-10 && x < 40.0);
    }
}
