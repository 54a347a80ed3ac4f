//! The solution field from the Ehrenpreis form
//!
//! `2π q(x,t) = ∫_ℝ e^{iλx−aλⁿt} q̂0(λ) dλ − ∫_{∂D_R} e^{iλx−aλⁿt} B(λ;τ) dλ`,
//! `B = Σ_j c_j(λ) F[y_j](λ;τ)`, with `D_R = {Re(aλⁿ) < 0, Im λ > 0, |λ| > R}`
//! on the left of its boundary.
//!
//! Beyond `ρ0 = max(R, 1)` every moment is split as `p1 + e^{μτ}q`. The `p1`
//! part carries `e^{−μt}` and is integrated on rays turned into `E`; the `q`
//! part carries `e^{μ(τ−t)}` and goes on rays turned into `D`. On the real
//! line the closed-form model `M(λ) = Σ e_k (1+iλ)^{−k−1}` is subtracted from
//! `q̂0`; the remainder stays on `ℝ`, the model moves onto rays where
//! `e^{−aλⁿt}` decays and inverts exactly at `t = 0`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dtn::{data_error_bound, DtnSolution, ProblemKind, ProblemSpec};
use crate::error::{Error, Result};
use crate::fraccalc::gamma::gamma_pos;
use crate::fraccalc::FracPowerSeries;
use crate::quad::{adaptive_edges, Estimate, PanelRule};
use crate::spectral::{c_coeff, sectors, EquationClass};
use crate::transforms::ftrans::{f_transform_series_split, moment};
use crate::transforms::{f_transform_series, Direction, InitialDatum, QuadratureConfig};

type C = Complex64;

/// Terms kept in the real-line model.
pub const MODEL_ORDER: usize = 12;
/// Largest phase change of the integrand across one 15-point panel.
const PANEL_PHASE: f64 = 1.5;
const MAX_RAY_PANELS: usize = 40_000;
/// Panel width may grow to this fraction of the radius on algebraically decaying rays.
const RAY_GROWTH: f64 = 0.25;
/// Largest `ln` of the growth tolerated on a rotated ray.
const GROWTH_BUDGET: f64 = 2.0;

fn c(x: f64) -> C {
    C::new(x, 0.0)
}

fn horner(poly: &[C], z: C) -> C {
    poly.iter().rev().fold(c(0.0), |acc, p| acc * z + p)
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn cube_root_of_unity() -> C {
    C::from_polar(1.0, 2.0 * PI / 3.0)
}

/// Assembly of the boundary integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Route {
    /// Closed combination per class, from the boundary series alone.
    #[default]
    Printed,
    /// `Σ_j c_j F[y_j]`; for LKdV1, `f_1` is eliminated through the global
    /// relation at `αλ`, `α = e^{2πi/3}`.
    Generic,
}

/// `B(λ) = Σ_k P_k(λ) F[φ_k](λ;τ) + w·q̂0(αλ)` with polynomial weights `P_k`.
#[derive(Debug, Clone)]
struct Combination {
    terms: Vec<(Vec<C>, FracPowerSeries)>,
    q0_weight: C,
}

fn combination(problem: &ProblemSpec, dtn: &DtnSolution, route: Route) -> Result<Combination> {
    let kind = problem.supported_kind()?;
    if kind != dtn.kind {
        return Err(Error::Domain(format!("boundary series of {:?} used with a {kind:?} problem", dtn.kind)));
    }
    let i = C::i();
    let one = c(1.0);
    let zero = c(0.0);
    let al = cube_root_of_unity();
    let y0 = dtn.y0().clone();
    let order = dtn.order;
    let series = |j: usize| {
        dtn.y.get(&j).cloned().ok_or_else(|| Error::Domain(format!("boundary series y_{j} missing")))
    };
    let mut q0_weight = zero;
    let terms = match route {
        Route::Printed => {
            let by = problem.b().mul_to(&y0, order)?;
            match kind {
                ProblemKind::Heat | ProblemKind::Ls => {
                    let pre = if kind == ProblemKind::Ls { i } else { one };
                    let rest = problem.h[0].resized(order).add(&by.scale(-one))?;
                    vec![(vec![zero, pre * i], y0), (vec![pre], rest)]
                }
                ProblemKind::Lkdv1 => {
                    q0_weight = al * al;
                    vec![(vec![zero, zero, one - al], y0), (vec![-(one - al) * al * al], by)]
                }
                ProblemKind::Lkdv2 => {
                    let betay = problem.beta().mul_to(&y0, order)?;
                    vec![(vec![zero, zero, -one], y0), (vec![zero, -i], by), (vec![-one], betay)]
                }
            }
        }
        Route::Generic => {
            let class = &problem.class;
            let mut terms = Vec::new();
            for (&j, yj) in &dtn.y {
                // c_j(λ) = −a i^{−(j+1)} λ^{n−j−1}
                let mut poly = vec![zero; class.n - j];
                poly[class.n - j - 1] = -class.a / i.powi(j as i32 + 1);
                terms.push((poly, yj.clone()));
            }
            if kind == ProblemKind::Lkdv1 {
                // −iλ f_1 = α^{−1}(q̂0(αλ) − α²λ² f_0 + f_2)
                q0_weight = al * al;
                terms.push((vec![zero, zero, -al], y0));
                terms.push((vec![al * al], series(2)?));
            }
            terms
        }
    };
    Ok(Combination { terms, q0_weight })
}

fn p1_series(phi: &FracPowerSeries, mu: C) -> C {
    let a = phi.alpha_f64();
    phi.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(u, v)| {
            let b = u as f64 * a + 1.0;
            v * gamma_pos(b) / (-mu).powf(b)
        })
        .sum()
}

impl Combination {
    /// Smallest `ρ ≥ 1` at which every `|Φ_u| Γ(uα+1) / ρ^{n(uα+1)}` is at most
    /// the size `max_u |Φ_u| T^{uα+1}` of the transform itself.
    fn split_radius(&self, n: usize, horizon: f64) -> f64 {
        let mut rho: f64 = 1.0;
        for (_, phi) in &self.terms {
            let a = phi.alpha_f64();
            let size = |u: usize| phi.coeff(u).norm();
            let scale = (0..phi.coeffs().len())
                .map(|u| size(u) * horizon.powf(u as f64 * a + 1.0))
                .fold(0.0, f64::max);
            if scale == 0.0 {
                continue;
            }
            let too_big = |r: f64| {
                (0..phi.coeffs().len()).any(|u| {
                    let b = u as f64 * a + 1.0;
                    size(u) * gamma_pos(b) / r.powf(n as f64 * b) > scale
                })
            };
            while too_big(rho) && rho < 8.0 {
                rho *= 1.125;
            }
        }
        rho
    }

    fn is_zero(&self) -> bool {
        self.q0_weight.norm() == 0.0 && self.terms.iter().all(|(_, s)| s.is_zero())
    }

    fn q0_part(&self, q0: &InitialDatum, lambda: C, cfg: &QuadratureConfig) -> Result<Estimate> {
        if self.q0_weight.norm() == 0.0 {
            return Ok(Estimate::zero());
        }
        let h = q0.hat(cube_root_of_unity() * lambda, cfg)?;
        Ok(Estimate { value: self.q0_weight * h.value, error: self.q0_weight.norm() * h.error })
    }

    fn full(
        &self,
        class: &EquationClass,
        q0: &InitialDatum,
        lambda: C,
        tau: f64,
        dir: Direction,
        cfg: &QuadratureConfig,
    ) -> Result<Estimate> {
        let mut out = self.q0_part(q0, lambda, cfg)?;
        for (poly, phi) in &self.terms {
            if phi.is_zero() {
                continue;
            }
            let w = horner(poly, lambda);
            let f = f_transform_series(phi, lambda, tau, class, dir)?;
            out += Estimate { value: w * f.value, error: w.norm() * f.error };
        }
        Ok(out)
    }

    /// The `τ`-free part, analytic off the positive `μ` axis.
    fn stable(&self, class: &EquationClass, q0: &InitialDatum, lambda: C, cfg: &QuadratureConfig) -> Result<Estimate> {
        let mu = class.symbol(lambda);
        let mut out = self.q0_part(q0, lambda, cfg)?;
        for (poly, phi) in &self.terms {
            out.value += horner(poly, lambda) * p1_series(phi, mu);
        }
        Ok(out)
    }

    /// The factor `q` of `e^{μτ}q`; requires `Re μ ≤ 0`.
    fn oscillatory(&self, class: &EquationClass, lambda: C, tau: f64) -> Result<Estimate> {
        let mu = class.symbol(lambda);
        let mut out = Estimate::zero();
        for (poly, phi) in &self.terms {
            if phi.is_zero() {
                continue;
            }
            let w = horner(poly, lambda);
            let s = f_transform_series_split(phi, mu, tau)?;
            out += Estimate { value: w * s.q, error: w.norm() * s.error };
        }
        Ok(out)
    }
}

/// `B(λ;τ)` at one point of `∂D_R` (or anywhere `Re(aλⁿ) ≤ 0`).
pub fn assemble_boundary_integrand(
    problem: &ProblemSpec,
    dtn: &DtnSolution,
    lambda: C,
    tau: f64,
    route: Route,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    combination(problem, dtn, route)?.full(&problem.class, &problem.q0, lambda, tau, Direction::StableOnly, cfg)
}

/// One evaluated point of the field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldValue {
    pub x: f64,
    pub t: f64,
    #[serde(serialize_with = "ser_complex")]
    pub value: C,
    pub error: f64,
    pub converged: bool,
}

fn ser_complex<S: serde::Serializer>(v: &C, s: S) -> std::result::Result<S::Ok, S::Error> {
    [v.re, v.im].serialize(s)
}

/// Bounding box of the points evaluated against one contour.
#[derive(Debug, Clone, Copy)]
struct Window {
    x_lo: f64,
    x_hi: f64,
    t_lo: f64,
    t_hi: f64,
    deriv: usize,
}

impl Window {
    fn of(points: &[(f64, f64)], deriv: usize) -> Self {
        let fold = |f: fn(&(f64, f64)) -> f64, init: f64, g: fn(f64, f64) -> f64| points.iter().map(f).fold(init, g);
        Self {
            x_lo: fold(|p| p.0, f64::INFINITY, f64::min),
            x_hi: fold(|p| p.0, 0.0, f64::max),
            t_lo: fold(|p| p.1, f64::INFINITY, f64::min),
            t_hi: fold(|p| p.1, 0.0, f64::max),
            deriv,
        }
    }
}

/// Smallest `r ≥ r0` past the peak of `g(r) = −A r − B rⁿ` with `g(r) ≤ −L`.
fn decay_radius(a: f64, b: f64, n: usize, r0: f64, l: f64) -> Option<f64> {
    let nf = n as f64;
    if b < 0.0 || (b == 0.0 && a <= 0.0) {
        return None;
    }
    let g = |r: f64| -a * r - b * r.powi(n as i32);
    let peak = if a < 0.0 { (-a / (nf * b)).powf(1.0 / (nf - 1.0)) } else { 0.0 };
    let mut lo = r0.max(peak);
    if g(lo) <= -l {
        return Some(lo);
    }
    let mut hi = 2.0 * lo.max(1.0);
    while g(hi) > -l {
        hi *= 2.0;
        if hi > 1e9 {
            return None;
        }
    }
    for _ in 0..100 {
        let m = 0.5 * (lo + hi);
        if g(m) > -l {
            lo = m;
        } else {
            hi = m;
        }
    }
    Some(hi)
}

/// Largest of `−A r − B rⁿ` over `r ≥ 0` for `A < 0 < B`.
fn peak_growth(a: f64, b: f64, n: usize) -> f64 {
    if a >= 0.0 {
        return 0.0;
    }
    if b <= 0.0 {
        return f64::INFINITY;
    }
    let nf = n as f64;
    let r = (-a / (nf * b)).powf(1.0 / (nf - 1.0));
    -a * r * (1.0 - 1.0 / nf)
}

/// Panel edges on `[r0, r1]` with the local phase rate `omega` bounded per panel.
fn oscillation_edges<W: Fn(f64) -> f64>(r0: f64, r1: f64, omega: W, growth: f64, max_panels: usize) -> (Vec<f64>, bool) {
    let mut edges = vec![r0];
    let mut r = r0;
    while r < r1 {
        let cap = |r: f64| 0.5f64.max(growth * r);
        let h0 = (PANEL_PHASE / omega(r)).min(cap(r));
        let h = (PANEL_PHASE / omega(r + h0)).min(cap(r));
        r = (r + h).min(r1);
        edges.push(r);
        if edges.len() > max_panels {
            return (edges, false);
        }
    }
    (edges, true)
}

/// Exponential factor carried by a contour piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Group {
    /// Full `B(λ;τ)`, factor `e^{iλx−μt}`.
    Inner,
    /// `τ`-free part, factor `e^{iλx−μt}`.
    Stable,
    /// Oscillatory part, factor `e^{iλx+μ(τ−t)}`.
    Oscillatory,
}

#[derive(Debug, Clone)]
struct Piece {
    rule: PanelRule,
    lambda: Vec<C>,
    /// Integrand without the exponential, times `dλ/ds`.
    weight: Vec<C>,
    group: Group,
    /// Angle of an outer ray, for the truncation tail.
    ray: Option<f64>,
}

#[derive(Debug, Clone)]
struct Contour {
    pieces: Vec<Piece>,
    tau: f64,
    converged: bool,
}

#[derive(Debug, Clone)]
struct RealLine {
    model: Vec<C>,
    rule: PanelRule,
    lambda: Vec<C>,
    remainder: Vec<C>,
    error: f64,
    converged: bool,
}

/// `e_k = Σ_{m≤k} C(k,m) q0^{(m)}(0)`, so that `q̂0 − Σ e_k(1+iλ)^{−k−1} = O(λ^{−K−1})`.
fn model_coefficients(d: &[C]) -> Vec<C> {
    (0..d.len()).map(|k| (0..=k).map(|m| d[m] * binom(k, m)).sum()).collect()
}

fn model_eval(e: &[C], lambda: C) -> C {
    let z = c(1.0) + C::i() * lambda;
    let w = z.inv();
    let mut p = w;
    let mut acc = c(0.0);
    for ek in e {
        acc += ek * p;
        p *= w;
    }
    acc
}

/// `∂_x^k Σ_m e_m x^m e^{−x}/m!`, the exact inverse of the model for `x ≥ 0`.
fn model_inverse(e: &[C], x: f64, k: usize) -> C {
    let mut acc = c(0.0);
    for (m, em) in e.iter().enumerate() {
        for i in 0..=k.min(m) {
            let fact: f64 = (1..=m - i).map(|v| v as f64).product();
            let sign = if (k - i) % 2 == 0 { 1.0 } else { -1.0 };
            acc += em * binom(k, i) * sign * x.powi((m - i) as i32) / fact;
        }
    }
    acc * (-x).exp()
}

/// Evaluator of `q_U(x,t)` and its `x`-derivatives.
#[derive(Debug, Clone)]
pub struct SolutionField {
    pub problem: ProblemSpec,
    pub dtn: DtnSolution,
    pub quad: QuadratureConfig,
    /// Inner radius `R` of `D_R`.
    pub r: f64,
    /// Time parameter of the boundary transforms; `None` selects the horizon.
    pub tau: Option<f64>,
    pub route: Route,
}

impl SolutionField {
    pub fn new(problem: ProblemSpec, dtn: DtnSolution) -> Result<Self> {
        problem.supported_kind()?;
        if problem.kind() != Some(dtn.kind) {
            return Err(Error::Domain("boundary series belong to another class".into()));
        }
        Ok(Self { problem, dtn, quad: QuadratureConfig::default(), r: 1.0, tau: None, route: Route::Printed })
    }

    pub fn with_quad(mut self, quad: QuadratureConfig) -> Self {
        self.quad = quad;
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.r = r;
        self
    }

    pub fn with_tau(mut self, tau: Option<f64>) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_route(mut self, route: Route) -> Self {
        self.route = route;
        self
    }

    fn class(&self) -> &EquationClass {
        &self.problem.class
    }

    fn tau_value(&self) -> f64 {
        self.tau.unwrap_or(self.problem.horizon)
    }

    /// `ln` of the relative size at which integrands are truncated.
    fn cutoff(&self, deriv: usize) -> f64 {
        (1.0 / self.quad.abs_tol).ln() + 6.0 + 3.0 * deriv as f64
    }

    pub fn evaluate(&self, x: f64, t: f64) -> Result<FieldValue> {
        Ok(self.evaluate_points(&[(x, t)], 0)?[0])
    }

    /// `q` on the tensor grid, `x` varying fastest.
    pub fn evaluate_grid(&self, xs: &[f64], ts: &[f64]) -> Result<Vec<FieldValue>> {
        let pts: Vec<(f64, f64)> = ts.iter().flat_map(|&t| xs.iter().map(move |&x| (x, t))).collect();
        self.evaluate_points(&pts, 0)
    }

    /// `∂_x^k q` at each point, by differentiating under the integral.
    pub fn evaluate_points(&self, points: &[(f64, f64)], deriv: usize) -> Result<Vec<FieldValue>> {
        self.quad.validate()?;
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return Err(Error::Config(format!("contour radius R = {} must be nonnegative", self.r)));
        }
        let horizon = self.problem.horizon;
        let tau = self.tau_value();
        for &(x, t) in points {
            if !(x >= 0.0 && x.is_finite()) || !(0.0..=horizon).contains(&t) {
                return Err(Error::Domain(format!("(x, t) = ({x}, {t}) outside [0, ∞)×[0, {horizon}]")));
            }
            if t > 0.0 && !(tau >= t && tau <= horizon) {
                return Err(Error::Domain(format!("τ = {tau} must lie in [t, T] = [{t}, {horizon}]")));
            }
        }
        if points.is_empty() {
            return Ok(Vec::new());
        }
        if deriv + 2 > MODEL_ORDER {
            return Err(Error::Domain(format!("derivative order {deriv} too high")));
        }
        let real = self.real_line(Window::of(points, deriv))?;
        let comb = combination(&self.problem, &self.dtn, self.route)?;
        // points sharing a contour: octaves in x and in t
        let octave = |v: f64| if v > 0.0 { v.log2().floor() as i32 } else { i32::MIN };
        let mut groups: BTreeMap<(i32, i32), Vec<usize>> = BTreeMap::new();
        for (k, &(x, t)) in points.iter().enumerate() {
            groups.entry((octave(x), octave(t))).or_default().push(k);
        }
        let mut out = vec![None; points.len()];
        for idx in groups.values() {
            let pts: Vec<(f64, f64)> = idx.iter().map(|&k| points[k]).collect();
            // at t = 0 the τ = 0 representative has no boundary leg
            let contour = if pts[0].1 == 0.0 || comb.is_zero() {
                None
            } else {
                Some(self.contour(&comb, Window::of(&pts, deriv), tau)?)
            };
            let vals: Vec<FieldValue> = pts
                .par_iter()
                .map(|&(x, t)| {
                    let (mut total, mut converged) = self.real_leg(&real, x, t, deriv);
                    if let Some(ct) = &contour {
                        let (b, ok) = self.boundary_leg(ct, x, t, deriv);
                        total.value -= b.value;
                        total.error += b.error;
                        converged &= ok;
                    }
                    let s = 0.5 / PI;
                    FieldValue { x, t, value: total.value * s, error: total.error * s, converged }
                })
                .collect();
            for (&k, v) in idx.iter().zip(vals) {
                out[k] = Some(v);
            }
        }
        Ok(out.into_iter().map(|v| v.expect("every point belongs to a group")).collect())
    }

    fn real_line(&self, win: Window) -> Result<RealLine> {
        let q0 = &self.problem.q0;
        let class = self.class();
        let n = class.n;
        let e = model_coefficients(&q0.derivs_at_zero(MODEL_ORDER));
        let kk = e.len().max(1) as f64;
        let rem = |l: f64| -> Result<(C, f64)> {
            let h = q0.hat(c(l), &self.quad)?;
            Ok((h.value - model_eval(&e, c(l)), h.error))
        };
        let target = 0.01 * self.quad.abs_tol;
        let mut lam = 8.0;
        let mut converged = true;
        let tail = loop {
            let (rp, _) = rem(lam)?;
            let (rm, _) = rem(-lam)?;
            let tail = (rp.norm() + rm.norm()) * lam.powi(win.deriv as i32) * lam / (kk - win.deriv as f64).max(0.5);
            if tail <= target {
                break tail;
            }
            if lam > 4096.0 {
                converged = false;
                break tail;
            }
            lam *= 2.0;
        };
        let t_hi = win.t_hi;
        let omega = |r: f64| win.x_hi + n as f64 * r.powi(n as i32 - 1) * t_hi + 1.0;
        let (right, ok) = oscillation_edges(0.0, lam, omega, 0.0, MAX_RAY_PANELS);
        converged &= ok;
        let mut edges: Vec<f64> = right.iter().rev().map(|r| -r).collect();
        edges.extend_from_slice(&right[1..]);
        let rule = PanelRule::new(&edges);
        let lambda: Vec<C> = rule.nodes.iter().map(|&l| c(l)).collect();
        let vals: Vec<Result<(C, f64)>> = rule.nodes.par_iter().map(|&l| rem(l)).collect();
        let mut remainder = Vec::with_capacity(vals.len());
        let mut errs = Vec::with_capacity(vals.len());
        for v in vals {
            let (r, err) = v?;
            remainder.push(r);
            errs.push(c(err));
        }
        let hat_error = rule.apply(&errs).value.re.abs();
        Ok(RealLine { model: e, rule, lambda, remainder, error: tail + hat_error, converged })
    }

    /// `∫_ℝ e^{iλx−aλⁿt}(iλ)^k q̂0 dλ`.
    fn real_leg(&self, rl: &RealLine, x: f64, t: f64, k: usize) -> (Estimate, bool) {
        let class = self.class();
        let i = C::i();
        let vals: Vec<C> = rl
            .lambda
            .iter()
            .zip(&rl.remainder)
            .map(|(&l, &r)| r * (i * l).powi(k as i32) * (i * l * x - class.symbol(l) * t).exp())
            .collect();
        let mut est = rl.rule.apply(&vals);
        est.error += rl.error;
        let mut ok = rl.converged;
        if t == 0.0 {
            est.value += 2.0 * PI * model_inverse(&rl.model, x, k);
        } else {
            for left in [false, true] {
                let (m, good) = self.model_ray(&rl.model, x, t, k, left);
                est += m;
                ok &= good;
            }
        }
        (est, ok)
    }

    /// Model part of the real leg on one half line, moved onto a ray where
    /// `e^{−aλⁿt}` decays; the pole at `λ = i` is never crossed.
    fn model_ray(&self, e: &[C], x: f64, t: f64, k: usize, left: bool) -> (Estimate, bool) {
        let class = self.class();
        let n = class.n;
        let base = if left { PI } else { 0.0 };
        let re_sym = |psi: f64| (class.a * C::from_polar(1.0, n as f64 * psi)).re;
        let mut psi = base;
        if re_sym(base) <= 1e-12 {
            let d = PI / (2.0 * n as f64);
            psi = if re_sym(base + d) > re_sym(base - d) { base + d } else { base - d };
            let mut off = psi - base;
            while psi.sin() < 0.0 && peak_growth(x * psi.sin(), t * re_sym(psi), n) > GROWTH_BUDGET && off.abs() > 1e-6 {
                off *= 0.5;
                psi = base + off;
            }
        }
        let dir = C::from_polar(1.0, psi);
        let l = self.cutoff(k);
        let Some(r_end) = decay_radius(x * psi.sin(), t * re_sym(psi), n, 1.0, l) else {
            return (Estimate { value: c(0.0), error: f64::INFINITY }, false);
        };
        let i = C::i();
        let f = |r: f64| {
            let lam = dir * r;
            (i * lam).powi(k as i32) * (i * lam * x - class.symbol(lam) * t).exp() * model_eval(e, lam) * dir
        };
        let omega = |r: f64| x + n as f64 * r.powi(n as i32 - 1) * t;
        let (edges, ok) = oscillation_edges(0.0, r_end, omega, RAY_GROWTH, MAX_RAY_PANELS);
        let tol = 0.01 * self.quad.abs_tol;
        let (mut est, good) = adaptive_edges(&f, &edges, tol, 0.0, self.quad.max_panels.max(2 * edges.len()));
        if left {
            est.value = -est.value;
        }
        (est, ok && good)
    }

    fn contour(&self, comb: &Combination, win: Window, tau: f64) -> Result<Contour> {
        let class = self.class();
        let n = class.n;
        let nf = n as f64;
        let q0 = &self.problem.q0;
        let r_in = self.r;
        let rho0 = r_in.max(comb.split_radius(n, self.problem.horizon));
        let l = self.cutoff(win.deriv);
        let rate = move |t_osc: f64| move |r: f64| win.x_hi + nf * r.powi(n as i32 - 1) * t_osc;
        let omega = rate(win.t_hi.max(tau - win.t_lo));
        let omega_stable = rate(win.t_hi);
        let omega_osc = rate(tau - win.t_lo);
        let re_sym = |psi: f64| (class.a * C::from_polar(1.0, nf * psi)).re;
        let mut specs: Vec<(Vec<f64>, Box<dyn Fn(f64) -> (C, C) + Send + Sync>, Group, Option<f64>)> = Vec::new();
        let mut converged = true;

        let arc = |rho: f64, from: f64, to: f64| -> (Vec<f64>, Box<dyn Fn(f64) -> (C, C) + Send + Sync>) {
            let m = ((to - from).abs() * rho * (omega(rho) + 1.0) / PANEL_PHASE).ceil().max(4.0) as usize;
            let edges = (0..=m).map(|j| j as f64 / m as f64).collect();
            let f = move |s: f64| {
                let lam = C::from_polar(rho, from + (to - from) * s);
                (lam, C::i() * lam * (to - from))
            };
            (edges, Box::new(f))
        };
        let ray = |psi: f64, outward: bool, edges: Vec<f64>| -> (Vec<f64>, Box<dyn Fn(f64) -> (C, C) + Send + Sync>) {
            let d = C::from_polar(1.0, psi);
            let sign = if outward { 1.0 } else { -1.0 };
            (edges, Box::new(move |r: f64| (d * r, d * sign)))
        };

        for (lo, hi) in sectors(class) {
            if r_in > 0.0 {
                let (e, f) = arc(r_in, hi, lo);
                specs.push((e, f, Group::Inner, None));
            }
            if rho0 > r_in {
                for (theta, outward) in [(lo, true), (hi, false)] {
                    let h = (PANEL_PHASE / (omega(rho0) + 1.0)).min(0.25);
                    let m = ((rho0 - r_in) / h).ceil().max(2.0) as usize;
                    let edges = (0..=m).map(|j| r_in + (rho0 - r_in) * j as f64 / m as f64).collect();
                    let (e, f) = ray(theta, outward, edges);
                    specs.push((e, f, Group::Inner, None));
                }
            }
            for (theta, outward, into_e) in [(lo, true, -1.0), (hi, false, 1.0)] {
                // stable part: turned towards E, less far when that enters the lower half plane
                let mut d1 = PI / (4.0 * nf);
                let mut psi1 = theta + into_e * d1;
                while psi1.sin() < 0.0
                    && peak_growth(win.x_hi * psi1.sin(), win.t_lo * re_sym(psi1), n) > GROWTH_BUDGET
                    && d1 > 1e-6
                {
                    d1 *= 0.5;
                    psi1 = theta + into_e * d1;
                }
                let psi2 = theta - into_e * PI / (4.0 * nf);
                for (psi, group) in [(psi1, Group::Stable), (psi2, Group::Oscillatory)] {
                    let (a, b) = match group {
                        Group::Stable => {
                            let xw = if psi.sin() >= 0.0 { win.x_lo } else { win.x_hi };
                            (xw * psi.sin(), win.t_lo * re_sym(psi))
                        }
                        _ => (win.x_lo * psi.sin(), -(tau - win.t_hi) * re_sym(psi)),
                    };
                    let r_end = match decay_radius(a, b, n, rho0, l) {
                        Some(r) => r,
                        None => {
                            converged = false;
                            rho0 + 100.0
                        }
                    };
                    let (edges, ok) = match group {
                        Group::Stable => oscillation_edges(rho0, r_end, omega_stable, RAY_GROWTH, MAX_RAY_PANELS),
                        _ => oscillation_edges(rho0, r_end, omega_osc, RAY_GROWTH, MAX_RAY_PANELS),
                    };
                    converged &= ok;
                    let (ae, af) = if outward { arc(rho0, theta, psi) } else { arc(rho0, psi, theta) };
                    specs.push((ae, af, group, None));
                    let (re, rf) = ray(psi, outward, edges);
                    specs.push((re, rf, group, Some(psi)));
                }
            }
        }

        let pieces = specs
            .into_iter()
            .map(|(edges, map, group, ray)| {
                let rule = PanelRule::new(&edges);
                let pts: Vec<(C, C)> = rule.nodes.iter().map(|&s| map(s)).collect();
                let weight: Result<Vec<C>> = pts
                    .par_iter()
                    .map(|&(lam, dl)| {
                        let v = match group {
                            Group::Inner => comb.full(class, q0, lam, tau, Direction::StableOnly, &self.quad)?,
                            Group::Stable => comb.stable(class, q0, lam, &self.quad)?,
                            Group::Oscillatory => comb.oscillatory(class, lam, tau)?,
                        };
                        Ok(v.value * dl)
                    })
                    .collect();
                Ok(Piece { rule, lambda: pts.into_iter().map(|p| p.0).collect(), weight: weight?, group, ray })
            })
            .collect::<Result<Vec<Piece>>>()?;
        Ok(Contour { pieces, tau, converged })
    }

    /// `∫_{∂D_R} e^{iλx−aλⁿt}(iλ)^k B(λ;τ) dλ`.
    fn boundary_leg(&self, ct: &Contour, x: f64, t: f64, k: usize) -> (Estimate, bool) {
        let class = self.class();
        let n = class.n as f64;
        let i = C::i();
        let mut total = Estimate::zero();
        let mut ok = ct.converged;
        for p in &ct.pieces {
            let shift = match p.group {
                Group::Oscillatory => ct.tau - t,
                _ => -t,
            };
            let vals: Vec<C> = p
                .lambda
                .iter()
                .zip(&p.weight)
                .map(|(&l, &w)| w * (i * l).powi(k as i32) * (i * l * x + class.symbol(l) * shift).exp())
                .collect();
            let est = p.rule.apply(&vals);
            total += est;
            if let (Some(psi), Some(last)) = (p.ray, vals.last()) {
                let r = p.lambda.last().map(|l| l.norm()).unwrap_or(1.0);
                let sym = (class.a * C::from_polar(1.0, n * psi)).re;
                let rate = x * psi.sin() - shift * sym * n * r.powf(n - 1.0);
                if rate > 0.0 {
                    total.error += last.norm() / rate;
                } else {
                    total.error += last.norm() * r;
                    ok &= last.norm() == 0.0;
                }
            }
        }
        (total, ok)
    }
}

impl SolutionField {
    /// Literal joint principal value: both legs truncated at a common radius
    /// `M`, doubled until consecutive values agree to tolerance.
    pub fn evaluate_matched(&self, x: f64, t: f64) -> Result<FieldValue> {
        let class = self.class();
        let n = class.n;
        let q0 = &self.problem.q0;
        let tau = self.tau_value();
        let comb = combination(&self.problem, &self.dtn, self.route)?;
        let i = C::i();
        let tol = self.quad.abs_tol;
        let omega = |r: f64| x + n as f64 * r.powi(n as i32 - 1) * tau.max(t) + 1.0;
        let kernel = |lam: C| (i * lam * x - class.symbol(lam) * t).exp();
        let boundary = |lam: C| comb.full(class, q0, lam, tau, Direction::StableOnly, &self.quad).map(|v| v.value);
        let integrate = |f: &dyn Fn(f64) -> Result<C>, edges: &[f64]| -> Result<Estimate> {
            let err = std::sync::Mutex::new(None);
            let g = |s: f64| match f(s) {
                Ok(v) => v,
                Err(e) => {
                    *err.lock().expect("lock") = Some(e);
                    c(0.0)
                }
            };
            let (est, _) = adaptive_edges(&g, edges, 0.1 * tol, 0.0, self.quad.max_panels);
            match err.into_inner().expect("lock") {
                Some(e) => Err(e),
                None => Ok(est),
            }
        };
        let leg = |m: f64| -> Result<Estimate> {
            let (edges, _) = oscillation_edges(0.0, m, omega, 0.0, MAX_RAY_PANELS);
            let sym: Vec<f64> = edges.iter().rev().map(|r| -r).chain(edges[1..].iter().copied()).collect();
            let mut total = integrate(&|l: f64| Ok(kernel(c(l)) * q0.hat(c(l), &self.quad)?.value), &sym)?;
            for (lo, hi) in sectors(class) {
                if self.r > 0.0 {
                    let (a, b) = (hi, lo);
                    let rho = self.r;
                    let f = |s: f64| {
                        let lam = C::from_polar(rho, a + (b - a) * s);
                        Ok(kernel(lam) * boundary(lam)? * i * lam * (b - a))
                    };
                    let est = integrate(&f, &[0.0, 0.25, 0.5, 0.75, 1.0])?;
                    total.value -= est.value;
                    total.error += est.error;
                }
                let (edges, _) = oscillation_edges(self.r, m, omega, 0.0, MAX_RAY_PANELS);
                for (theta, sign) in [(lo, 1.0), (hi, -1.0)] {
                    let d = C::from_polar(1.0, theta);
                    let f = |r: f64| Ok(kernel(d * r) * boundary(d * r)? * d * sign);
                    let est = integrate(&f, &edges)?;
                    total.value -= est.value;
                    total.error += est.error;
                }
            }
            Ok(total)
        };
        let mut m = 8.0;
        let mut prev = leg(m)?;
        loop {
            m *= 2.0;
            let next = leg(m)?;
            let step = (next.value - prev.value).norm();
            let done = step <= tol.max(self.quad.rel_tol * next.value.norm());
            if done || m >= 512.0 {
                let s = 0.5 / PI;
                return Ok(FieldValue {
                    x,
                    t,
                    value: next.value * s,
                    error: (next.error + step) * s,
                    converged: done,
                });
            }
            prev = next;
        }
    }
}

/// Global-relation residual with its composed error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrResidual {
    #[serde(serialize_with = "ser_complex")]
    pub lambda: C,
    pub t: f64,
    #[serde(serialize_with = "ser_complex")]
    pub residual: C,
    /// Quadrature errors of `q̂0`, of the `x` transform and of the `F[y_j]`.
    pub quadrature_bound: f64,
    /// `Σ_j |c_j| ∫_0^t |e^{μs}| D_j(s) ds` with `D_j` from [`data_error_bound`].
    pub data_bound: f64,
    pub bound: f64,
}

/// `q̂0(λ) − e^{aλⁿt} q̂(λ;t) − Σ_j c_j F[y_j](λ;t)`, with `q̂(λ;t)` the
/// half-line transform of the evaluated field.
pub fn gr_residual(field: &SolutionField, lambda: C, t: f64) -> Result<GrResidual> {
    if lambda.im > 0.0 {
        return Err(Error::Domain(format!("λ = {lambda} must lie in the closed lower half plane")));
    }
    let problem = &field.problem;
    let class = &problem.class;
    if problem.kind() == Some(ProblemKind::Lkdv1) {
        return Err(Error::Unsupported("LKdV1 has no boundary series for ∂_x q(0,·)".into()));
    }
    let cfg = &field.quad;
    let q0 = &problem.q0;
    let n = class.n as f64;
    let decay = -lambda.im;
    let x_data = q0.x_max(cfg.abs_tol, 0.0) + 10.0 * (1.0 + t).powf(1.0 / n);
    let x_end = if decay > 0.0 { x_data.min(((1e2 / cfg.abs_tol).ln() / decay).max(4.0)) } else { x_data };
    let h = (PANEL_PHASE / (lambda.re.abs() + 1.0)).min(0.5);
    let m = (x_end / h).ceil() as usize;
    let edges: Vec<f64> = (0..=m).map(|j| x_end * j as f64 / m as f64).collect();
    let rule = PanelRule::new(&edges);
    let pts: Vec<(f64, f64)> = rule.nodes.iter().map(|&x| (x, t)).collect();
    let vals = field.evaluate_points(&pts, 0)?;
    let kern: Vec<C> = rule.nodes.iter().map(|&x| (-C::i() * lambda * x).exp()).collect();
    let integrand: Vec<C> = vals.iter().zip(&kern).map(|(v, k)| v.value * k).collect();
    let weighted_err: Vec<C> = vals.iter().zip(&kern).map(|(v, k)| c(v.error * k.norm())).collect();
    let mut qhat = rule.apply(&integrand);
    qhat.error += rule.apply(&weighted_err).value.re.abs();
    let end = field.evaluate(x_end, t)?;
    qhat.error += end.value.norm() * (-decay * x_end).exp() / decay.max(0.1);

    let comb = combination(problem, &field.dtn, Route::Generic)?;
    let sum = comb.full(class, q0, lambda, t, Direction::AllowGrowth, cfg)?;
    let q0hat = q0.hat(lambda, cfg)?;
    let grow = (class.symbol(lambda) * t).exp();
    let residual = q0hat.value - grow * qhat.value - sum.value;
    let quadrature_bound = q0hat.error + grow.norm() * qhat.error + sum.error;
    let rate = c(class.symbol(lambda).re);
    let mut data_bound = 0.0;
    for (j, d) in data_error_bound(problem, &field.dtn)? {
        let w = c_coeff(lambda, j, class)?.norm();
        for (u, v) in d.coeffs().iter().enumerate() {
            if v.re > 0.0 {
                let m = moment(rate, u as f64 * d.alpha_f64(), t, Direction::AllowGrowth)?;
                data_bound += w * v.re * m.value.norm();
            }
        }
    }
    Ok(GrResidual { lambda, t, residual, quadrature_bound, data_bound, bound: quadrature_bound + data_bound })
}

/// One member of the `(R, τ)` family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeformationSample {
    pub r: f64,
    pub tau: f64,
    #[serde(serialize_with = "ser_complex")]
    pub value: C,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformationReport {
    pub x: f64,
    pub t: f64,
    /// Largest pairwise difference.
    pub deviation: f64,
    pub samples: Vec<DeformationSample>,
}

/// Default radii for [`deformation_check`].
pub const DEFORMATION_RADII: [f64; 3] = [0.0, 0.5, 1.0];

/// `τ ∈ {t, (t+T)/2, T}`.
pub fn deformation_taus(t: f64, horizon: f64) -> [f64; 3] {
    [t, 0.5 * (t + horizon), horizon]
}

/// Evaluates `q(x,t)` for every `(R, τ)` and reports the spread.
pub fn deformation_check(field: &SolutionField, x: f64, t: f64, radii: &[f64], taus: &[f64]) -> Result<DeformationReport> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("deformation freedom needs x > 0, got {x}")));
    }
    let mut samples = Vec::new();
    for &r in radii {
        for &tau in taus {
            let f = field.clone().with_radius(r).with_tau(Some(tau));
            let v = f.evaluate(x, t)?;
            samples.push(DeformationSample { r, tau, value: v.value, error: v.error });
        }
    }
    let mut deviation: f64 = 0.0;
    for (k, a) in samples.iter().enumerate() {
        for b in &samples[k + 1..] {
            deviation = deviation.max((a.value - b.value).norm());
        }
    }
    Ok(DeformationReport { x, t, deviation, samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSample {
    pub t: f64,
    #[serde(serialize_with = "ser_complex")]
    pub field: C,
    #[serde(serialize_with = "ser_complex")]
    pub series: C,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceReport {
    /// `sup |q_U(0,t) − y_0(t)|` over the grid.
    pub gap: f64,
    /// Largest quadrature error estimate of the field values.
    pub error_estimate: f64,
    pub samples: Vec<TraceSample>,
}

/// Compares the reconstructed field at `x = 0` with the boundary series.
pub fn boundary_trace_check(field: &SolutionField, t_grid: &[f64]) -> Result<TraceReport> {
    let pts: Vec<(f64, f64)> = t_grid.iter().map(|&t| (0.0, t)).collect();
    let vals = field.evaluate_points(&pts, 0)?;
    let y0 = field.dtn.y0();
    let samples: Vec<TraceSample> = vals
        .iter()
        .map(|v| TraceSample { t: v.t, field: v.value, series: y0.eval(v.t), error: v.error })
        .collect();
    let gap = samples.iter().map(|s| (s.field - s.series).norm()).fold(0.0, f64::max);
    let error_estimate = samples.iter().map(|s| s.error).fold(0.0, f64::max);
    Ok(TraceReport { gap, error_estimate, samples })
}

/// Grid CSV: `x,t,re_q,im_q,err_estimate`.
pub fn write_grid_csv<W: std::io::Write>(values: &[FieldValue], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Config(format!("csv output: {e}"));
    wr.write_record(["x", "t", "re_q", "im_q", "err_estimate"]).map_err(io)?;
    for v in values {
        wr.write_record(&[
            format!("{:.17e}", v.x),
            format!("{:.17e}", v.t),
            format!("{:.17e}", v.value.re),
            format!("{:.17e}", v.value.im),
            format!("{:.6e}", v.error),
        ])
        .map_err(io)?;
    }
    wr.flush().map_err(|e| Error::Config(format!("csv output: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtn::{solve_dtn, DtnConfig};
    use crate::fraccalc::Alpha;

    /// `q = e^{−x+ct}` solves each class with constant coefficients.
    fn exact(kind: ProblemKind, horizon: f64) -> (SolutionField, C) {
        exact_with_order(kind, horizon, 16)
    }

    fn exact_with_order(kind: ProblemKind, horizon: f64, order: usize) -> (SolutionField, C) {
        let q0 = InitialDatum::exp_poly_real(&[1.0], 1.0).unwrap();
        let a = kind.alpha();
        let k = |v: f64| FracPowerSeries::constant(a, c(v));
        let (p, rate) = match kind {
            ProblemKind::Heat => (ProblemSpec::heat(q0, k(1.0), k(0.0), horizon), c(1.0)),
            ProblemKind::Ls => (ProblemSpec::schrodinger(q0, k(1.0), k(0.0), horizon), C::i()),
            ProblemKind::Lkdv1 => (ProblemSpec::lkdv1(q0, k(-1.0), horizon), c(1.0)),
            ProblemKind::Lkdv2 => (ProblemSpec::lkdv2(q0, k(1.0), k(-1.0), horizon), c(-1.0)),
        };
        let p = p.unwrap();
        let dtn = solve_dtn(&p, order, &DtnConfig::default()).unwrap();
        (SolutionField::new(p, dtn).unwrap(), rate)
    }

    fn max_error(f: &SolutionField, rate: C, xs: &[f64], ts: &[f64]) -> f64 {
        f.evaluate_grid(xs, ts)
            .unwrap()
            .iter()
            .map(|v| (v.value - (-v.x + rate * v.t).exp()).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn exact_solutions_all_classes() {
        for kind in [ProblemKind::Heat, ProblemKind::Ls, ProblemKind::Lkdv1, ProblemKind::Lkdv2] {
            // e^{−t} in powers of t^{1/3} needs more terms
            let order = if kind == ProblemKind::Lkdv2 { 27 } else { 16 };
            let (f, rate) = exact_with_order(kind, 0.5, order);
            let err = max_error(&f, rate, &[0.0, 0.5, 1.0, 2.0, 4.0], &[0.1, 0.25, 0.45]);
            // e^t has no expansion in t^{2/3}; the fitted series only approximates it
            let tol = if kind == ProblemKind::Lkdv1 { 1e-3 } else { 1e-6 };
            assert!(err < tol, "{kind:?}: {err:.2e}");
        }
    }

    #[test]
    fn initial_datum_recovered() {
        for kind in [ProblemKind::Heat, ProblemKind::Lkdv1] {
            let (f, _) = exact(kind, 0.5);
            let xs: Vec<f64> = (0..=12).map(|j| 0.5 * j as f64).collect();
            let err = max_error(&f, c(0.0), &xs, &[0.0]);
            assert!(err < 1e-6, "{kind:?}: {err:.2e}");
        }
    }

    #[test]
    fn zero_problem_gives_zero() {
        let a = Alpha::new(1, 2);
        let p = ProblemSpec::heat(
            InitialDatum::zero(),
            FracPowerSeries::constant(a, c(-1.0)),
            FracPowerSeries::zero(a, 1),
            1.0,
        )
        .unwrap();
        let dtn = solve_dtn(&p, 8, &DtnConfig::default()).unwrap();
        let f = SolutionField::new(p, dtn).unwrap();
        for v in f.evaluate_grid(&[0.0, 1.0], &[0.0, 0.5]).unwrap() {
            assert_eq!(v.value, c(0.0));
        }
    }

    #[test]
    fn routes_agree() {
        for kind in [ProblemKind::Heat, ProblemKind::Lkdv1, ProblemKind::Lkdv2] {
            let (f, _) = exact(kind, 0.5);
            let a = f.evaluate(1.0, 0.25).unwrap();
            let b = f.clone().with_route(Route::Generic).evaluate(1.0, 0.25).unwrap();
            assert!((a.value - b.value).norm() < 1e-8, "{kind:?}: {} vs {}", a.value, b.value);
        }
    }

    #[test]
    fn deformation_leaves_value_unchanged() {
        let (f, _) = exact(ProblemKind::Heat, 1.0);
        let d = deformation_check(&f, 1.0, 0.5, &DEFORMATION_RADII, &deformation_taus(0.5, 1.0)).unwrap();
        assert_eq!(d.samples.len(), 9);
        assert!(d.deviation < 1e-8, "{:.2e}", d.deviation);
        assert!(deformation_check(&f, 0.0, 0.5, &[1.0], &[1.0]).is_err());
    }

    #[test]
    fn matched_route_agrees_for_heat() {
        let (f, _) = exact(ProblemKind::Heat, 1.0);
        let a = f.evaluate(1.0, 0.5).unwrap();
        let b = f.evaluate_matched(1.0, 0.5).unwrap();
        assert!((a.value - b.value).norm() < 1e-6, "{} vs {}", a.value, b.value);
    }

    #[test]
    fn robin_condition_holds_at_boundary() {
        let (f, _) = exact(ProblemKind::Heat, 0.5);
        let pts = [(0.0, 0.1), (0.0, 0.3)];
        let q = f.evaluate_points(&pts, 0).unwrap();
        let qx = f.evaluate_points(&pts, 1).unwrap();
        for (v, d) in q.iter().zip(&qx) {
            assert!((v.value + d.value).norm() < 1e-6, "t = {}: {}", v.t, v.value + d.value);
        }
    }

    #[test]
    fn trace_matches_boundary_series() {
        let (f, _) = exact(ProblemKind::Heat, 0.5);
        let r = boundary_trace_check(&f, &[0.1, 0.2, 0.4]).unwrap();
        assert!(r.gap < 1e-6, "{:.2e}", r.gap);
    }

    #[test]
    fn global_relation_within_bound_and_detects_perturbation() {
        let (f, _) = exact(ProblemKind::Heat, 0.5);
        let lambda = C::new(0.5, -1.5);
        let r = gr_residual(&f, lambda, 0.25).unwrap();
        assert!(r.residual.norm() <= 5.0 * r.bound, "{r:?}");
        let mut bad = f.clone();
        let y1 = bad.dtn.y.get_mut(&1).unwrap();
        let mut coeffs = y1.coeffs().to_vec();
        coeffs[1] += 1e-2;
        *y1 = FracPowerSeries::new(y1.alpha(), coeffs).unwrap();
        let r = gr_residual(&bad, lambda, 0.25).unwrap();
        assert!(r.residual.norm() > 5.0 * r.bound, "{r:?}");
    }

    #[test]
    fn grid_csv_layout() {
        let v = FieldValue { x: 1.0, t: 0.5, value: C::new(0.25, -1.0), error: 1e-9, converged: true };
        let mut buf = Vec::new();
        write_grid_csv(&[v], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,t,re_q,im_q,err_estimate"));
        let row: Vec<f64> = lines.next().unwrap().split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(row, vec![1.0, 0.5, 0.25, -1.0, 1e-9]);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(4))]
        #[test]
        fn linear_in_datum(re in -2.0..2.0f64, im in -2.0..2.0f64) {
            let s = C::new(re, im);
            let (f, rate) = exact(ProblemKind::Heat, 0.5);
            let q0 = InitialDatum::exp_poly(vec![s], 1.0).unwrap();
            let p = ProblemSpec::heat(q0, f.problem.b(), f.problem.h[0].clone(), 0.5).unwrap();
            let dtn = solve_dtn(&p, 16, &DtnConfig::default()).unwrap();
            let g = SolutionField::new(p, dtn).unwrap();
            let v = g.evaluate(1.0, 0.25).unwrap().value;
            let want = s * (-1.0 + rate * 0.25).exp();
            proptest::prop_assert!((v - want).norm() < 1e-6 * (1.0 + s.norm()), "{v} vs {want}");
        }
    }
}
