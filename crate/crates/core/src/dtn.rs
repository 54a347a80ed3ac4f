//! Boundary values from the fractional ODEs each supported problem reduces to.
//!
//! | problem | equation for `y = q(0,·)`                          | `α`  |
//! |---------|----------------------------------------------------|------|
//! | heat    | `D^{1/2}y − b y = g − h`                           | 1/2  |
//! | LS      | `D^{1/2}y − √i b y = √i (g − h)`                   | 1/2  |
//! | LKdV1   | `D^{2/3}y + b y = g`                               | 2/3  |
//! | LKdV2   | `D^{1/3}(D^{1/3}y − b y) − β y = g`                | 1/3  |
//!
//! `D^α` is the Caputo derivative. The datum `g` is sampled by
//! [`g_datum`](crate::transforms::g_datum), fitted to a fractional power
//! series and fed to a Frobenius recurrence.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraccalc::{
    caputo_l1_numeric, caputo_series, chebyshev_nodes, extract_coefficients, gamma_ratio, Alpha,
    FracPowerSeries,
};
use crate::spectral::{enumerate_theta, EquationClass};
use crate::transforms::{g_datum, Bracket, GSample, InitialDatum, QuadratureConfig};

/// Tolerance on `Σ_j b_kj(0) q0^{(j)}(0) = h_k(0)`.
pub const COMPAT_TOL: f64 = 1e-8;
/// Default truncation order.
pub const DEFAULT_ORDER: usize = 16;

/// The four problems with a Frobenius engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Heat,
    Ls,
    Lkdv1,
    Lkdv2,
}

impl ProblemKind {
    pub fn class(self) -> EquationClass {
        match self {
            Self::Heat => EquationClass::heat(),
            Self::Ls => EquationClass::schrodinger(),
            Self::Lkdv1 => EquationClass::lkdv1(),
            Self::Lkdv2 => EquationClass::lkdv2(),
        }
    }

    pub fn of_class(class: &EquationClass) -> Option<Self> {
        [Self::Heat, Self::Ls, Self::Lkdv1, Self::Lkdv2].into_iter().find(|k| {
            let c = k.class();
            c.n == class.n && c.big_n == class.big_n && (c.a - class.a).norm() < 1e-12
        })
    }

    /// Series step of the boundary values.
    pub fn alpha(self) -> Alpha {
        match self {
            Self::Heat | Self::Ls => Alpha::new(1, 2),
            Self::Lkdv1 => Alpha::new(2, 3),
            Self::Lkdv2 => Alpha::new(1, 3),
        }
    }

    /// Highest derivative in the `k`-th boundary condition (1-based `k`).
    fn leading_derivative(self, k: usize) -> usize {
        match (self, k) {
            (Self::Heat | Self::Ls, _) => 1,
            (Self::Lkdv1, _) => 2,
            (Self::Lkdv2, k) => k,
        }
    }

    fn default_fit_order(self) -> usize {
        match self {
            Self::Lkdv2 => 10,
            _ => 12,
        }
    }
}

/// `Σ_j b_kj(t) ∂_x^j q(0,t) = h_k(t)` for `k = 1..=N`, plus the datum and horizon.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub class: EquationClass,
    /// `(k, j) ↦ b_kj` with 1-based `k`.
    pub b_coeffs: BTreeMap<(usize, usize), FracPowerSeries>,
    /// `h_k`, index `k − 1`.
    pub h: Vec<FracPowerSeries>,
    pub q0: InitialDatum,
    pub horizon: f64,
}

impl ProblemSpec {
    /// Validates series steps, horizon and compatibility.
    pub fn new(
        class: EquationClass,
        b_coeffs: BTreeMap<(usize, usize), FracPowerSeries>,
        h: Vec<FracPowerSeries>,
        q0: InitialDatum,
        horizon: f64,
    ) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
        }
        if h.len() != class.big_n {
            return Err(Error::Domain(format!("{} boundary data for N = {}", h.len(), class.big_n)));
        }
        let spec = Self { class, b_coeffs, h, q0, horizon };
        if let Some(kind) = ProblemKind::of_class(&spec.class) {
            let alpha = kind.alpha();
            for s in spec.b_coeffs.values().chain(&spec.h) {
                if s.alpha() != alpha {
                    return Err(Error::AlphaMismatch { left: s.alpha().to_string(), right: alpha.to_string() });
                }
            }
        }
        for &(k, j) in spec.b_coeffs.keys() {
            if k == 0 || k > spec.class.big_n || j >= spec.class.n {
                return Err(Error::Domain(format!("coefficient b_{k}{j} out of range")));
            }
        }
        spec.check_compatibility()?;
        Ok(spec)
    }

    fn coefficient_map(entries: &[((usize, usize), FracPowerSeries)]) -> BTreeMap<(usize, usize), FracPowerSeries> {
        entries.iter().cloned().collect()
    }

    fn one(alpha: Alpha) -> FracPowerSeries {
        FracPowerSeries::constant(alpha, Complex64::new(1.0, 0.0))
    }

    /// `b q(0,t) + q_x(0,t) = h`.
    pub fn heat(q0: InitialDatum, b: FracPowerSeries, h: FracPowerSeries, horizon: f64) -> Result<Self> {
        let a = ProblemKind::Heat.alpha();
        let map = Self::coefficient_map(&[((1, 0), b), ((1, 1), Self::one(a))]);
        Self::new(EquationClass::heat(), map, vec![h], q0, horizon)
    }

    /// `b q(0,t) + q_x(0,t) = h` for `q_t − i q_xx = 0`.
    pub fn schrodinger(q0: InitialDatum, b: FracPowerSeries, h: FracPowerSeries, horizon: f64) -> Result<Self> {
        let a = ProblemKind::Ls.alpha();
        let map = Self::coefficient_map(&[((1, 0), b), ((1, 1), Self::one(a))]);
        Self::new(EquationClass::schrodinger(), map, vec![h], q0, horizon)
    }

    /// `b q(0,t) + q_xx(0,t) = 0` for `q_t + q_xxx = 0`.
    pub fn lkdv1(q0: InitialDatum, b: FracPowerSeries, horizon: f64) -> Result<Self> {
        let a = ProblemKind::Lkdv1.alpha();
        let map = Self::coefficient_map(&[((1, 0), b), ((1, 2), Self::one(a))]);
        Self::new(EquationClass::lkdv1(), map, vec![FracPowerSeries::zero(a, 1)], q0, horizon)
    }

    /// `b q + q_x = 0` and `β q + q_xx = 0` at `x = 0` for `q_t − q_xxx = 0`.
    pub fn lkdv2(q0: InitialDatum, b: FracPowerSeries, beta: FracPowerSeries, horizon: f64) -> Result<Self> {
        let a = ProblemKind::Lkdv2.alpha();
        let map = Self::coefficient_map(&[
            ((1, 0), b),
            ((1, 1), Self::one(a)),
            ((2, 0), beta),
            ((2, 2), Self::one(a)),
        ]);
        let zero = FracPowerSeries::zero(a, 1);
        Self::new(EquationClass::lkdv2(), map, vec![zero.clone(), zero], q0, horizon)
    }

    /// Fit sampled boundary data to a series in the problem's step.
    pub fn h_from_samples(ts: &[f64], values: &[Complex64], alpha: Alpha, order: usize) -> Result<FracPowerSeries> {
        Ok(extract_coefficients(ts, values, alpha, order, crate::fraccalc::DEFAULT_COND_BOUND)?.series)
    }

    pub fn kind(&self) -> Option<ProblemKind> {
        ProblemKind::of_class(&self.class)
    }

    /// `Σ_j b_kj(0) q0^{(j)}(0) − h_k(0)` must vanish for every `k`.
    pub fn check_compatibility(&self) -> Result<()> {
        let derivs = self.q0.derivs_at_zero(self.class.n);
        for k in 1..=self.class.big_n {
            let mut sum = -self.h[k - 1].coeff(0);
            for ((_, j), b) in self.b_coeffs.range((k, 0)..=(k, usize::MAX)) {
                let d = derivs
                    .get(*j)
                    .ok_or_else(|| Error::Domain(format!("datum lacks q0^({j})(0) for the compatibility check")))?;
                sum += b.coeff(0) * d;
            }
            if sum.norm() > COMPAT_TOL {
                return Err(Error::Compatibility { k, mismatch: sum.norm() });
            }
        }
        Ok(())
    }

    fn coeff(&self, k: usize, j: usize) -> FracPowerSeries {
        let alpha = self.kind().map(ProblemKind::alpha).unwrap_or(Alpha::new(1, self.class.n as i64));
        self.b_coeffs.get(&(k, j)).cloned().unwrap_or_else(|| FracPowerSeries::zero(alpha, 1))
    }

    /// `b`, the zeroth-order coefficient of the first condition.
    pub fn b(&self) -> FracPowerSeries {
        self.coeff(1, 0)
    }

    /// `β`, the zeroth-order coefficient of the second condition.
    pub fn beta(&self) -> FracPowerSeries {
        self.coeff(2, 0)
    }

    /// The supported kind, after checking every condition has the form
    /// `b_k0 y + ∂_x^{j_k} q(0,·) = h_k` with unit leading coefficient.
    pub fn supported_kind(&self) -> Result<ProblemKind> {
        let kind = self.kind().ok_or_else(|| {
            Error::Unsupported(format!(
                "general-n system out of scope (n = {}, a = {}, N = {})",
                self.class.n, self.class.a, self.class.big_n
            ))
        })?;
        for (&(k, j), s) in &self.b_coeffs {
            let lead = kind.leading_derivative(k);
            let ok = j == 0
                || (j == lead && s.coeffs().iter().enumerate().all(|(u, c)| {
                    let want = if u == 0 { 1.0 } else { 0.0 };
                    (c - want).norm() < 1e-14
                }));
            if !ok {
                return Err(Error::Unsupported(format!(
                    "boundary coefficient b_{k}{j} outside the supported form"
                )));
            }
        }
        for k in 1..=self.class.big_n {
            if !self.b_coeffs.contains_key(&(k, kind.leading_derivative(k))) {
                return Err(Error::Unsupported(format!("condition {k} lacks its leading derivative")));
            }
        }
        if matches!(kind, ProblemKind::Lkdv1 | ProblemKind::Lkdv2) && self.h.iter().any(|h| !h.is_zero()) {
            return Err(Error::Unsupported("inhomogeneous data only for second-order problems".into()));
        }
        Ok(kind)
    }

    /// The bracket whose inverse transform is `g`.
    pub fn bracket(&self) -> Result<Bracket> {
        Ok(match self.supported_kind()? {
            ProblemKind::Heat => Bracket::heat(&self.q0),
            ProblemKind::Ls => Bracket::schrodinger(&self.q0),
            ProblemKind::Lkdv1 => Bracket::lkdv1(&self.q0),
            ProblemKind::Lkdv2 => Bracket::lkdv2(&self.q0, self.b().coeff(0)),
        })
    }
}

fn check_alpha(s: &FracPowerSeries, alpha: Alpha) -> Result<()> {
    if s.alpha() != alpha {
        return Err(Error::AlphaMismatch { left: s.alpha().to_string(), right: alpha.to_string() });
    }
    Ok(())
}

/// `D^α y = c (σ b y + G)`, `y(0) = y0`, one step at a time.
fn first_order(
    b: &FracPowerSeries,
    g: &FracPowerSeries,
    y0: Complex64,
    order: usize,
    alpha: Alpha,
    c: Complex64,
    sigma: f64,
) -> Result<FracPowerSeries> {
    check_alpha(b, alpha)?;
    check_alpha(g, alpha)?;
    let a = crate::fraccalc::alpha_f64(alpha);
    let mut y = vec![Complex64::new(0.0, 0.0); order + 1];
    y[0] = y0;
    for u in 0..order {
        let conv: Complex64 = (0..=u).map(|v| y[v] * b.coeff(u - v)).sum();
        let ratio = gamma_ratio(u as f64 * a + 1.0, (u + 1) as f64 * a + 1.0);
        y[u + 1] = c * ratio * (g.coeff(u) + sigma * conv);
    }
    FracPowerSeries::new(alpha, y)
}

/// `Y_{u+1} = Γ((u+2)/2)/Γ((u+3)/2)·(G_u + Σ_{v≤u} Y_v B_{u−v})`.
pub fn heat_recurrence(b: &FracPowerSeries, g: &FracPowerSeries, y0: Complex64, order: usize) -> Result<FracPowerSeries> {
    first_order(b, g, y0, order, Alpha::new(1, 2), Complex64::new(1.0, 0.0), 1.0)
}

/// The heat recurrence scaled by the principal `√i`.
pub fn ls_recurrence(b: &FracPowerSeries, g: &FracPowerSeries, y0: Complex64, order: usize) -> Result<FracPowerSeries> {
    let sqrt_i = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    first_order(b, g, y0, order, Alpha::new(1, 2), sqrt_i, 1.0)
}

/// `Y_{u+1} = Γ((2u+3)/3)/Γ((2u+5)/3)·(G_u − Σ_{v≤u} Y_v B_{u−v})` in powers `t^{2u/3}`.
pub fn lkdv1_recurrence(b: &FracPowerSeries, g: &FracPowerSeries, y0: Complex64, order: usize) -> Result<FracPowerSeries> {
    first_order(b, g, y0, order, Alpha::new(2, 3), Complex64::new(1.0, 0.0), -1.0)
}

/// Sequential third-order recurrence with `Y_1 = 0`:
///
/// `Y_{u+2} = Γ((u+4)/3)/Γ((u+5)/3)·Σ_{v≤u+1} Y_v B_{u+1−v}
///          + Γ((u+3)/3)/Γ((u+5)/3)·(G_u + Σ_{v≤u} Y_v 𝓑_{u−v})`.
pub fn lkdv2_recurrence(
    b: &FracPowerSeries,
    beta: &FracPowerSeries,
    g: &FracPowerSeries,
    y0: Complex64,
    order: usize,
) -> Result<FracPowerSeries> {
    let alpha = Alpha::new(1, 3);
    for s in [b, beta, g] {
        check_alpha(s, alpha)?;
    }
    let mut y = vec![Complex64::new(0.0, 0.0); order + 1];
    y[0] = y0;
    for u in 0..order.saturating_sub(1) {
        let uf = u as f64;
        let first: Complex64 = (0..=u + 1).map(|v| y[v] * b.coeff(u + 1 - v)).sum();
        let second: Complex64 = (0..=u).map(|v| y[v] * beta.coeff(u - v)).sum();
        y[u + 2] = gamma_ratio((uf + 4.0) / 3.0, (uf + 5.0) / 3.0) * first
            + gamma_ratio((uf + 3.0) / 3.0, (uf + 5.0) / 3.0) * (g.coeff(u) + second);
    }
    FracPowerSeries::new(alpha, y)
}

/// Samples of the `k`-th right-hand side of the general system, built on
/// ray `θ_{k−N}` (`k ∈ N+1..=n`).
pub fn general_flode_rhs(
    class: &EquationClass,
    q0: &InitialDatum,
    k: usize,
    t_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<GSample>> {
    if k <= class.big_n || k > class.n {
        return Err(Error::Domain(format!("k = {k} outside {}..={}", class.big_n + 1, class.n)));
    }
    let thetas = enumerate_theta(class);
    let bracket = Bracket::general(class, q0, thetas[k - class.big_n - 1])?;
    g_datum(q0, &bracket, t_grid, cfg)
}

/// Numerical settings of [`solve_dtn`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DtnConfig {
    #[serde(skip)]
    pub quad: QuadratureConfig,
    /// Chebyshev nodes for the fit of `g`.
    pub fit_nodes: usize,
    /// Fit order; the class default when absent.
    pub fit_order: Option<usize>,
    /// Left end of the fit window as a fraction of `T`.
    pub t_lo_fraction: f64,
    pub cond_bound: f64,
    /// Steps of the L1 grid on `[0, T]`.
    pub l1_steps: usize,
    /// Stop once `|Y_u| T^{uα}` exceeds this multiple of the reference size.
    pub overflow_factor: f64,
}

impl Default for DtnConfig {
    fn default() -> Self {
        Self {
            quad: QuadratureConfig::default(),
            fit_nodes: 64,
            fit_order: None,
            t_lo_fraction: 1.0 / 50.0,
            cond_bound: crate::fraccalc::DEFAULT_COND_BOUND,
            l1_steps: 4096,
            overflow_factor: 1e8,
        }
    }
}

/// Quality of the fitted `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitReport {
    pub order: usize,
    pub residual: f64,
    pub condition: f64,
    /// Largest `|fit − sample|` over the nodes.
    pub deviation: f64,
    /// Largest quadrature error estimate among the samples.
    pub sample_error: f64,
}

/// FLODE residuals of the truncated solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlodeResidual {
    /// `sup |lhs(y_U) − rhs|` on `[T/10, T]` with the L1 Caputo scheme and sampled `g`.
    pub l1_sup: f64,
    /// Largest coefficient of the exact termwise residual against the fitted series.
    pub series_max: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub l1_steps: usize,
}

/// Boundary values `y_j = ∂_x^j q(0,·)` as truncated series.
#[derive(Debug, Clone)]
pub struct DtnSolution {
    pub kind: ProblemKind,
    pub requested_order: usize,
    /// Order actually kept after the overflow guard.
    pub order: usize,
    pub y: BTreeMap<usize, FracPowerSeries>,
    /// Right-hand side series fed to the recurrence.
    pub rhs: FracPowerSeries,
    pub fit: FitReport,
    pub flode_residual: FlodeResidual,
    /// Set when the overflow guard truncated the series.
    pub early_stop: Option<String>,
}

impl DtnSolution {
    pub fn y0(&self) -> &FracPowerSeries {
        &self.y[&0]
    }
}

fn run_recurrence(kind: ProblemKind, p: &ProblemSpec, rhs: &FracPowerSeries, order: usize) -> Result<FracPowerSeries> {
    let y0 = p.q0.eval(0.0);
    match kind {
        ProblemKind::Heat => heat_recurrence(&p.b(), rhs, y0, order),
        ProblemKind::Ls => ls_recurrence(&p.b(), rhs, y0, order),
        ProblemKind::Lkdv1 => lkdv1_recurrence(&p.b(), rhs, y0, order),
        ProblemKind::Lkdv2 => lkdv2_recurrence(&p.b(), &p.beta(), rhs, y0, order),
    }
}

/// Left side minus right side of the governing equation, termwise and exact.
pub fn series_residual(kind: ProblemKind, p: &ProblemSpec, y: &FracPowerSeries, rhs: &FracPowerSeries) -> Result<FracPowerSeries> {
    let a = kind.alpha();
    let order = y.order();
    let by = p.b().mul_to(y, order)?;
    let sqrt_i = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let lhs = match kind {
        ProblemKind::Heat => caputo_series(y, a)?.add(&by.scale((-1.0).into()))?,
        ProblemKind::Ls => caputo_series(y, a)?.add(&by.scale(-sqrt_i))?,
        ProblemKind::Lkdv1 => caputo_series(y, a)?.add(&by)?,
        ProblemKind::Lkdv2 => {
            let z = caputo_series(y, a)?.add(&by.scale((-1.0).into()))?;
            let beta_y = p.beta().mul_to(y, order)?;
            caputo_series(&z, a)?.add(&beta_y.scale((-1.0).into()))?
        }
    };
    let scaled = if kind == ProblemKind::Ls { rhs.scale(sqrt_i) } else { rhs.clone() };
    lhs.add(&scaled.scale((-1.0).into()))
}

/// Number of residual coefficients fixed by a series of order `U`.
fn exact_terms(kind: ProblemKind, order: usize) -> usize {
    match kind {
        ProblemKind::Lkdv2 => order.saturating_sub(1),
        _ => order,
    }
}

fn l1_residual(
    kind: ProblemKind,
    p: &ProblemSpec,
    y: &FracPowerSeries,
    cfg: &DtnConfig,
) -> Result<FlodeResidual> {
    let t_final = p.horizon;
    let n = cfg.l1_steps.max(64);
    let h = t_final / n as f64;
    let ts: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
    let a = crate::fraccalc::alpha_f64(kind.alpha());
    let ys: Vec<Complex64> = ts.iter().map(|&t| y.eval(t)).collect();
    let b = p.b();
    let bs: Vec<Complex64> = ts.iter().map(|&t| b.eval(t)).collect();
    let sqrt_i = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let lhs: Vec<Complex64> = match kind {
        ProblemKind::Heat | ProblemKind::Ls => {
            let c = if kind == ProblemKind::Ls { sqrt_i } else { Complex64::new(1.0, 0.0) };
            let d = caputo_l1_numeric(&ys, h, a)?;
            (0..=n).map(|i| d[i] - c * bs[i] * ys[i]).collect()
        }
        ProblemKind::Lkdv1 => {
            let d = caputo_l1_numeric(&ys, h, a)?;
            (0..=n).map(|i| d[i] + bs[i] * ys[i]).collect()
        }
        ProblemKind::Lkdv2 => {
            let d = caputo_l1_numeric(&ys, h, a)?;
            let z: Vec<Complex64> = (0..=n).map(|i| d[i] - bs[i] * ys[i]).collect();
            let dz = caputo_l1_numeric(&z, h, a)?;
            let beta = p.beta();
            (0..=n).map(|i| dz[i] - beta.eval(ts[i]) * ys[i]).collect()
        }
    };
    let stride = (n / 128).max(1);
    let i_lo = n.div_ceil(10);
    let idx: Vec<usize> = (i_lo..=n).step_by(stride).collect();
    let check_ts: Vec<f64> = idx.iter().map(|&i| ts[i]).collect();
    let g = g_datum(&p.q0, &p.bracket()?, &check_ts, &cfg.quad)?;
    let hser = p.h[0].clone();
    let mut sup: f64 = 0.0;
    for (gs, &i) in g.iter().zip(&idx) {
        let mut rhs = gs.value - hser.eval(ts[i]);
        if kind == ProblemKind::Ls {
            rhs *= sqrt_i;
        }
        sup = sup.max((lhs[i] - rhs).norm());
    }
    Ok(FlodeResidual { l1_sup: sup, series_max: 0.0, t_lo: t_final / 10.0, t_hi: t_final, l1_steps: n })
}

/// Fitted series of `g` on Chebyshev nodes of `[t_lo, T]`.
pub fn fit_g(p: &ProblemSpec, cfg: &DtnConfig) -> Result<(FracPowerSeries, FitReport)> {
    let kind = p.supported_kind()?;
    let order = cfg.fit_order.unwrap_or(kind.default_fit_order());
    if p.q0.is_zero() {
        let zero = FracPowerSeries::zero(kind.alpha(), order + 1);
        return Ok((zero, FitReport { order, residual: 0.0, condition: 1.0, deviation: 0.0, sample_error: 0.0 }));
    }
    let ts = chebyshev_nodes(cfg.t_lo_fraction * p.horizon, p.horizon, cfg.fit_nodes);
    let samples = g_datum(&p.q0, &p.bracket()?, &ts, &cfg.quad)?;
    let values: Vec<Complex64> = samples.iter().map(|s| s.value).collect();
    let fit = extract_coefficients(&ts, &values, kind.alpha(), order, cfg.cond_bound)?;
    let deviation = ts.iter().zip(&values).map(|(&t, v)| (fit.series.eval(t) - v).norm()).fold(0.0, f64::max);
    let sample_error = samples.iter().map(|s| s.error).fold(0.0, f64::max);
    Ok((fit.series, FitReport { order, residual: fit.residual, condition: fit.condition, deviation, sample_error }))
}

/// Solve for the boundary values to order `U`.
pub fn solve_dtn(p: &ProblemSpec, order: usize, cfg: &DtnConfig) -> Result<DtnSolution> {
    let kind = p.supported_kind()?;
    if order < 2 {
        return Err(Error::Domain(format!("truncation order must be ≥ 2, got {order}")));
    }
    let (g, fit) = fit_g(p, cfg)?;
    let rhs = g.add(&p.h[0].scale((-1.0).into()))?;
    let full = run_recurrence(kind, p, &rhs, order)?;

    // overflow guard
    let a = full.alpha_f64();
    let reference = if full.coeff(0).norm() > 0.0 {
        full.coeff(0).norm()
    } else {
        (0..=order).map(|u| full.coeff(u).norm() * p.horizon.powf(u as f64 * a)).fold(0.0, f64::max).max(f64::MIN_POSITIVE)
    };
    let mut kept = order;
    let mut early_stop = None;
    for u in 1..=order {
        let size = full.coeff(u).norm() * p.horizon.powf(u as f64 * a);
        if size > cfg.overflow_factor * reference {
            kept = u - 1;
            early_stop = Some(format!(
                "|Y_{u}| T^{{uα}} = {size:.3e} exceeds {:.0e} × reference; radius of convergence suspected below T",
                cfg.overflow_factor
            ));
            break;
        }
    }
    let y = full.resized(kept);

    let res = series_residual(kind, p, &full, &rhs)?;
    let series_max = (0..exact_terms(kind, order)).map(|u| res.coeff(u).norm()).fold(0.0, f64::max);
    let mut flode_residual = l1_residual(kind, p, &y, cfg)?;
    flode_residual.series_max = series_max;

    let mut ys = BTreeMap::new();
    let b = p.b();
    match kind {
        ProblemKind::Heat | ProblemKind::Ls => {
            ys.insert(1, p.h[0].add(&b.mul_to(&y, kept)?.scale((-1.0).into()))?.resized(kept));
        }
        ProblemKind::Lkdv1 => {
            ys.insert(2, b.mul_to(&y, kept)?.scale((-1.0).into()));
        }
        ProblemKind::Lkdv2 => {
            ys.insert(1, b.mul_to(&y, kept)?.scale((-1.0).into()));
            ys.insert(2, p.beta().mul_to(&y, kept)?.scale((-1.0).into()));
        }
    }
    ys.insert(0, y);
    Ok(DtnSolution { kind, requested_order: order, order: kept, y: ys, rhs, fit, flode_residual, early_stop })
}

/// Nonnegative series `D_j` with `|y_j − y_j^{exact}| ≲ D_j(t)` on `[0, T]`.
///
/// The `g` error (fit deviation plus sample quadrature error) is pushed
/// through the recurrence with `|b|`, `|β|` coefficientwise, which majorizes
/// the Volterra solution operator; the last kept terms stand in for the tail.
pub fn data_error_bound(p: &ProblemSpec, dtn: &DtnSolution) -> Result<BTreeMap<usize, FracPowerSeries>> {
    let kind = dtn.kind;
    let alpha = kind.alpha();
    let abs = |s: &FracPowerSeries| -> Result<FracPowerSeries> {
        FracPowerSeries::new(s.alpha(), s.coeffs().iter().map(|c| Complex64::new(c.norm(), 0.0)).collect())
    };
    let eps = FracPowerSeries::constant(alpha, Complex64::new(dtn.fit.deviation + dtn.fit.sample_error, 0.0));
    let order = dtn.order + 4 * *alpha.denom() as usize;
    let b = abs(&p.b())?;
    let zero = Complex64::new(0.0, 0.0);
    let mut d0 = match kind {
        ProblemKind::Heat | ProblemKind::Ls => heat_recurrence(&b, &eps, zero, order)?,
        ProblemKind::Lkdv1 => lkdv1_recurrence(&b, &eps, zero, order)?,
        ProblemKind::Lkdv2 => lkdv2_recurrence(&b, &abs(&p.beta())?, &eps, zero, order)?,
    };
    let y0 = dtn.y0();
    let tail = *alpha.denom() as usize;
    let mut coeffs = d0.coeffs().to_vec();
    for u in (dtn.order + 1).saturating_sub(tail)..=dtn.order {
        coeffs[u] += y0.coeff(u).norm();
    }
    d0 = FracPowerSeries::new(alpha, coeffs)?;
    let mut out = BTreeMap::new();
    for (&j, _) in &dtn.y {
        let d = match (kind, j) {
            (_, 0) => d0.clone(),
            (ProblemKind::Heat | ProblemKind::Ls, 1) | (ProblemKind::Lkdv1, 2) | (ProblemKind::Lkdv2, 1) => {
                b.mul_to(&d0, order)?
            }
            (ProblemKind::Lkdv2, 2) => abs(&p.beta())?.mul_to(&d0, order)?,
            _ => return Err(Error::Domain(format!("no boundary value y_{j} for {kind:?}"))),
        };
        out.insert(j, d);
    }
    Ok(out)
}
