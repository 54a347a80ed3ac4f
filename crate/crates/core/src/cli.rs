//! Run configuration and the drivers behind the `halfline` binary.
//!
//! Every check in a verify report calls one library operation; nothing here
//! computes numerics of its own.
//!
//! # Defaults
//!
//! | setting                         | value              |
//! |---------------------------------|--------------------|
//! | truncation order `U`            | 16                 |
//! | quadrature `abs_tol` / `rel_tol`| 1e-8 / 1e-6        |
//! | contour radius `R`              | 1                  |
//! | `τ`                             | `T`                |
//! | fit window start `t_lo`         | `T/50`             |
//! | solve grid                      | 20 × 20 on `[0.2, 4] × [T/20, T]` |
//! | global-relation `t` samples     | `T/4, T/2, T`      |
//! | boundary-trace `t` samples      | `jT/10`, `j = 1..9`|
//! | finite-difference grid          | `x_max = 12`, 480 × 400 |

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dtn::{general_flode_rhs, solve_dtn, DtnConfig, DtnSolution, ProblemKind, ProblemSpec};
use crate::ehrenpreis::{
    boundary_trace_check, deformation_check, deformation_taus, gr_residual, write_grid_csv, FieldValue,
    SolutionField, DEFORMATION_RADII,
};
use crate::error::{Error, Result};
use crate::fraccalc::series::parse_alpha;
use crate::fraccalc::{Alpha, FracPowerSeries};
use crate::oracle::{fd_solve, sup_relative_gap, FdGrid};
use crate::spectral::{enumerate_theta, validate_class, EquationClass};
use crate::transforms::gdatum::{g_to_csv, removeqt_check};
use crate::transforms::{InitialDatum, QuadratureConfig};

/// Version tag carried by every JSON report.
pub const REPORT_SCHEMA: &str = "halfline-report/1";

/// The shipped defaults, in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Defaults {
    pub order: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub radius: f64,
    pub t_lo_fraction: f64,
    pub grid_points: usize,
    pub grid_x: (f64, f64),
    /// `t` range as fractions of `T`.
    pub grid_t_fraction: (f64, f64),
    pub fd_x_max: f64,
    pub fd_nx: usize,
    pub fd_nt: usize,
    /// `|residual| ≤ factor × bound`.
    pub gr_factor: f64,
    pub deformation_factor: f64,
    pub trace_tol: f64,
    pub oracle_rel_tol: f64,
    pub removeqt_tol: f64,
    pub l1_tol: f64,
    pub series_tol: f64,
}

pub const DEFAULTS: Defaults = Defaults {
    order: 16,
    abs_tol: 1e-8,
    rel_tol: 1e-6,
    radius: 1.0,
    t_lo_fraction: 1.0 / 50.0,
    grid_points: 20,
    grid_x: (0.2, 4.0),
    grid_t_fraction: (0.05, 1.0),
    fd_x_max: 12.0,
    fd_nx: 480,
    fd_nt: 400,
    gr_factor: 5.0,
    deformation_factor: 10.0,
    trace_tol: 1e-4,
    oracle_rel_tol: 1e-2,
    removeqt_tol: 1e-6,
    l1_tol: 1e-2,
    series_tol: 1e-10,
};

/// Sample points of the global relation when the config names none.
pub const DEFAULT_LAMBDAS: [[f64; 2]; 10] = [
    [0.0, -1.0],
    [1.5, -0.75],
    [-2.0, -2.0],
    [3.0, 0.0],
    [0.0, -0.1],
    [-1.0, 0.0],
    [0.5, -1.5],
    [-2.5, -0.5],
    [1.0, -2.0],
    [0.2, -0.05],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemSelection {
    Heat,
    Ls,
    Lkdv1,
    Lkdv2,
    GeneralRhsOnly,
}

/// `q0` from the built-in library.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatumConfig {
    Zero,
    /// `Σ_k poly[k] x^k e^{−κx}`.
    ExpDecay {
        poly: Vec<f64>,
        #[serde(default = "one")]
        kappa: f64,
    },
    /// `amplitude · e^{−((x − center)/width)²}`.
    Gaussian {
        #[serde(default = "one")]
        amplitude: f64,
        center: f64,
        #[serde(default = "one")]
        width: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// Coefficients of `Σ_u c_u t^{uα}`; `alpha` is an exact rational such as `"1/2"`.
#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub alpha: Option<String>,
    #[serde(default)]
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ContourSection {
    pub radius: Option<f64>,
    pub tau: Option<f64>,
}

/// Evaluation grid; counts include both ends.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub nx: Option<usize>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub nt: Option<usize>,
}

/// Class of the `general-rhs-only` mode.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralSection {
    pub n: usize,
    /// `[re, im]`.
    pub a: [f64; 2],
    #[serde(rename = "N")]
    pub big_n: usize,
    /// Sample times of the right-hand sides.
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    /// `[re, im]` pairs in the closed lower half plane.
    pub lambdas: Option<Vec<[f64; 2]>>,
    pub fd_x_max: Option<f64>,
    pub fd_nx: Option<usize>,
    pub fd_nt: Option<usize>,
}

/// Parsed contents of a TOML run file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSelection,
    /// `T`.
    pub horizon: f64,
    /// `U`.
    pub order: Option<usize>,
    pub datum: DatumConfig,
    #[serde(default)]
    pub b: SeriesConfig,
    #[serde(default)]
    pub h: SeriesConfig,
    #[serde(default)]
    pub beta: SeriesConfig,
    pub quadrature: Option<QuadratureSection>,
    #[serde(default)]
    pub contour: ContourSection,
    #[serde(default)]
    pub grid: GridSection,
    pub general: Option<GeneralSection>,
    #[serde(default)]
    pub verify: VerifySection,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn order(&self) -> usize {
        self.order.unwrap_or(DEFAULTS.order)
    }

    pub fn quad(&self) -> QuadratureConfig {
        let q = self.quadrature.unwrap_or(QuadratureSection { abs_tol: None, rel_tol: None });
        QuadratureConfig {
            abs_tol: q.abs_tol.unwrap_or(DEFAULTS.abs_tol),
            rel_tol: q.rel_tol.unwrap_or(DEFAULTS.rel_tol),
            ..QuadratureConfig::default()
        }
    }

    pub fn dtn_config(&self) -> DtnConfig {
        DtnConfig { quad: self.quad(), t_lo_fraction: DEFAULTS.t_lo_fraction, ..DtnConfig::default() }
    }

    pub fn datum(&self) -> Result<InitialDatum> {
        match &self.datum {
            DatumConfig::Zero => Ok(InitialDatum::zero()),
            DatumConfig::ExpDecay { poly, kappa } => InitialDatum::exp_poly_real(poly, *kappa),
            DatumConfig::Gaussian { amplitude, center, width } => {
                InitialDatum::gaussian(C::new(*amplitude, 0.0), *center, *width)
            }
        }
    }

    pub fn kind(&self) -> Result<ProblemKind> {
        match self.problem {
            ProblemSelection::Heat => Ok(ProblemKind::Heat),
            ProblemSelection::Ls => Ok(ProblemKind::Ls),
            ProblemSelection::Lkdv1 => Ok(ProblemKind::Lkdv1),
            ProblemSelection::Lkdv2 => Ok(ProblemKind::Lkdv2),
            ProblemSelection::GeneralRhsOnly => {
                Err(Error::Unsupported("general-rhs-only has no boundary solver; use `dtn`".into()))
            }
        }
    }

    /// Builds and validates the problem, compatibility included.
    pub fn problem(&self) -> Result<ProblemSpec> {
        let kind = self.kind()?;
        let alpha = kind.alpha();
        let q0 = self.datum()?;
        let b = series(&self.b, alpha, "b")?;
        let t = self.horizon;
        match kind {
            ProblemKind::Heat => ProblemSpec::heat(q0, b, series(&self.h, alpha, "h")?, t),
            ProblemKind::Ls => ProblemSpec::schrodinger(q0, b, series(&self.h, alpha, "h")?, t),
            ProblemKind::Lkdv1 => {
                no_h(&self.h)?;
                ProblemSpec::lkdv1(q0, b, t)
            }
            ProblemKind::Lkdv2 => {
                no_h(&self.h)?;
                ProblemSpec::lkdv2(q0, b, series(&self.beta, alpha, "beta")?, t)
            }
        }
    }

    pub fn field(&self, problem: ProblemSpec, dtn: DtnSolution) -> Result<SolutionField> {
        Ok(SolutionField::new(problem, dtn)?
            .with_quad(self.quad())
            .with_radius(self.contour.radius.unwrap_or(DEFAULTS.radius))
            .with_tau(self.contour.tau))
    }

    /// `(xs, ts)` of the evaluation grid.
    pub fn grid(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let g = &self.grid;
        let t = self.horizon;
        let xs = linspace(
            g.x_min.unwrap_or(DEFAULTS.grid_x.0),
            g.x_max.unwrap_or(DEFAULTS.grid_x.1),
            g.nx.unwrap_or(DEFAULTS.grid_points),
        )?;
        let ts = linspace(
            g.t_min.unwrap_or(DEFAULTS.grid_t_fraction.0 * t),
            g.t_max.unwrap_or(DEFAULTS.grid_t_fraction.1 * t),
            g.nt.unwrap_or(DEFAULTS.grid_points),
        )?;
        if xs.iter().any(|&x| x < 0.0) || ts.iter().any(|&s| !(0.0..=t).contains(&s)) {
            return Err(Error::Config(format!("grid must lie in [0, ∞) × [0, {t}]")));
        }
        Ok((xs, ts))
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("halfline-out"))
    }
}

fn no_h(h: &SeriesConfig) -> Result<()> {
    if h.re.iter().chain(&h.im).any(|&v| v != 0.0) {
        return Err(Error::Config("LKdV boundary conditions are homogeneous; drop [h]".into()));
    }
    Ok(())
}

fn linspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::Config(format!("bad grid range [{a}, {b}] with {n} points")));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|j| a + (b - a) * j as f64 / (n - 1) as f64).collect())
}

fn series(cfg: &SeriesConfig, alpha: Alpha, name: &str) -> Result<FracPowerSeries> {
    if let Some(a) = &cfg.alpha {
        let given = parse_alpha(a)?;
        if given != alpha {
            return Err(Error::AlphaMismatch { left: format!("{name}: {given}"), right: alpha.to_string() });
        }
    }
    let len = cfg.re.len().max(cfg.im.len()).max(1);
    let coeffs = (0..len)
        .map(|u| C::new(cfg.re.get(u).copied().unwrap_or(0.0), cfg.im.get(u).copied().unwrap_or(0.0)))
        .collect();
    FracPowerSeries::new(alpha, coeffs)
}

/// Parses `a` as `i`, `-i`, a real number, `re,im`, or `polar:φ` with `φ`
/// a number or a multiple of `pi` such as `-pi/6` or `5pi/36`.
pub fn parse_complex(s: &str) -> Result<C> {
    let s = s.trim();
    let bad = || Error::Config(format!("cannot read {s:?} as a complex number"));
    match s {
        "i" | "+i" => return Ok(C::i()),
        "-i" => return Ok(-C::i()),
        _ => {}
    }
    if let Some(phi) = s.strip_prefix("polar:") {
        return Ok(C::from_polar(1.0, parse_angle(phi).ok_or_else(bad)?));
    }
    if let Some((re, im)) = s.split_once(',') {
        let re = re.trim().parse::<f64>().map_err(|_| bad())?;
        let im = im.trim().parse::<f64>().map_err(|_| bad())?;
        return Ok(C::new(re, im));
    }
    s.parse::<f64>().map(|re| C::new(re, 0.0)).map_err(|_| bad())
}

fn parse_angle(s: &str) -> Option<f64> {
    let s = s.trim();
    let Some(at) = s.find("pi") else {
        return s.parse().ok();
    };
    let (head, tail) = (s[..at].trim_end_matches('*'), &s[at + 2..]);
    let k = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().ok()?,
    };
    let d = match tail.strip_prefix('/') {
        Some(d) => d.parse::<f64>().ok()?,
        None if tail.is_empty() => 1.0,
        None => return None,
    };
    Some(k * PI / d)
}

/// `θ` as `kπ/d` (smallest `d ≤ 720`) when it is one to 1e-12.
pub fn format_angle(theta: f64) -> String {
    let hit = (1..=720i64).find_map(|q| {
        let p = (theta / PI * q as f64).round() as i64;
        ((theta - PI * p as f64 / q as f64).abs() <= 1e-12).then_some((p, q))
    });
    let Some((p, q)) = hit else {
        return format!("{theta}");
    };
    let sign = if p < 0 { "-" } else { "" };
    let num = match p.abs() {
        0 => return "0".into(),
        1 => "π".to_string(),
        k => format!("{k}π"),
    };
    if q == 1 {
        format!("{sign}{num}")
    } else {
        format!("{sign}{num}/{q}")
    }
}

/// The `N` implied by `(n, a)`.
pub fn boundary_count(n: usize, a: C) -> usize {
    if n % 2 == 0 {
        n / 2
    } else if a.im > 0.0 {
        (n + 1) / 2
    } else {
        (n - 1) / 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaReport {
    pub schema: &'static str,
    pub class: EquationClass,
    pub theta: Vec<f64>,
    /// `{−π/6, −5π/6}` style.
    pub display: String,
}

pub fn cmd_theta(n: usize, a: C, big_n: Option<usize>) -> Result<ThetaReport> {
    let class = validate_class(n, a, big_n.unwrap_or_else(|| boundary_count(n, a)))?;
    let theta = enumerate_theta(&class);
    let display = format!("{{{}}}", theta.iter().map(|&t| format_angle(t)).collect::<Vec<_>>().join(", "));
    Ok(ThetaReport { schema: REPORT_SCHEMA, class, theta, display })
}

fn series_json(s: &FracPowerSeries) -> Value {
    json!({
        "alpha": s.alpha().to_string(),
        "coeffs": s.coeffs().iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
    })
}

fn dtn_json(d: &DtnSolution) -> Value {
    let y: BTreeMap<String, Value> = d.y.iter().map(|(j, s)| (format!("y{j}"), series_json(s))).collect();
    json!({
        "kind": format!("{:?}", d.kind),
        "requested_order": d.requested_order,
        "order": d.order,
        "early_stop": d.early_stop,
        "fit": d.fit,
        "flode_residual": d.flode_residual,
        "rhs": series_json(&d.rhs),
        "y": y,
    })
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::Config(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

/// Boundary series (or, in `general-rhs-only` mode, sampled right-hand sides).
pub fn cmd_dtn(cfg: &RunConfig) -> Result<Value> {
    let dir = cfg.output_dir();
    if cfg.problem == ProblemSelection::GeneralRhsOnly {
        let g = cfg.general.as_ref().ok_or_else(|| Error::Config("general-rhs-only needs [general]".into()))?;
        let class = validate_class(g.n, C::new(g.a[0], g.a[1]), g.big_n)?;
        let q0 = cfg.datum()?;
        let mut files = Vec::new();
        for k in class.big_n + 1..=class.n {
            let samples = general_flode_rhs(&class, &q0, k, &g.times, &cfg.quad())?;
            let mut buf = Vec::new();
            g_to_csv(&samples, &mut buf)?;
            files.push(write(&dir, &format!("rhs_k{k}.csv"), &buf)?.display().to_string());
        }
        let report = json!({ "schema": REPORT_SCHEMA, "command": "dtn", "class": class, "files": files });
        write(&dir, "dtn.json", &pretty(&report))?;
        return Ok(report);
    }
    let problem = cfg.problem()?;
    let dtn = solve_dtn(&problem, cfg.order(), &cfg.dtn_config())?;
    let report = json!({ "schema": REPORT_SCHEMA, "command": "dtn", "dtn": dtn_json(&dtn) });
    write(&dir, "dtn.json", &pretty(&report))?;
    Ok(report)
}

/// Grid CSV of the reconstructed field.
pub fn cmd_solve(cfg: &RunConfig) -> Result<Value> {
    let problem = cfg.problem()?;
    let dtn = solve_dtn(&problem, cfg.order(), &cfg.dtn_config())?;
    let field = cfg.field(problem, dtn)?;
    let (xs, ts) = cfg.grid()?;
    let values = field.evaluate_grid(&xs, &ts)?;
    let mut buf = Vec::new();
    write_grid_csv(&values, &mut buf)?;
    let path = write(&cfg.output_dir(), "solution.csv", &buf)?;
    let worst = values.iter().map(|v| v.error).fold(0.0, f64::max);
    Ok(json!({
        "schema": REPORT_SCHEMA,
        "command": "solve",
        "csv": path.display().to_string(),
        "points": values.len(),
        "max_err_estimate": worst,
        "all_converged": values.iter().all(|v| v.converged),
    }))
}

fn fd_grid(cfg: &RunConfig) -> FdGrid {
    let v = &cfg.verify;
    FdGrid::new(
        v.fd_x_max.unwrap_or(DEFAULTS.fd_x_max),
        v.fd_nx.unwrap_or(DEFAULTS.fd_nx),
        v.fd_nt.unwrap_or(DEFAULTS.fd_nt),
        cfg.horizon,
    )
}

fn fd_coefficient(kind: ProblemKind) -> Result<C> {
    match kind {
        ProblemKind::Heat => Ok(C::new(1.0, 0.0)),
        ProblemKind::Ls => Ok(C::i()),
        _ => Err(Error::Unsupported("the finite-difference oracle covers heat and LS only".into())),
    }
}

/// Finite-difference field on the solve grid, `b` and `h` taken from the problem.
fn fd_values(problem: &ProblemSpec, kind: ProblemKind, grid: &FdGrid, xs: &[f64], ts: &[f64]) -> Result<Vec<C>> {
    let (b, h) = (problem.b(), problem.h[0].clone());
    let coarse = fd_solve(&problem.q0, fd_coefficient(kind)?, |t| b.eval(t), |t| h.eval(t), grid)?;
    Ok(ts.iter().flat_map(|&t| xs.iter().map(move |&x| (x, t))).map(|(x, t)| coarse.at(x, t)).collect())
}

/// Grid CSV from the finite-difference oracle; the error column is the
/// difference against the twice-refined grid.
pub fn cmd_oracle(cfg: &RunConfig) -> Result<Value> {
    let problem = cfg.problem()?;
    let kind = cfg.kind()?;
    let (xs, ts) = cfg.grid()?;
    let grid = fd_grid(cfg);
    let coarse = fd_values(&problem, kind, &grid, &xs, &ts)?;
    let fine = fd_values(&problem, kind, &grid.refined(), &xs, &ts)?;
    let points = ts.iter().flat_map(|&t| xs.iter().map(move |&x| (x, t)));
    let values: Vec<FieldValue> = points
        .zip(coarse.iter().zip(&fine))
        .map(|((x, t), (c, f))| FieldValue { x, t, value: *f, error: (f - c).norm(), converged: true })
        .collect();
    let mut buf = Vec::new();
    write_grid_csv(&values, &mut buf)?;
    let path = write(&cfg.output_dir(), "oracle.csv", &buf)?;
    Ok(json!({ "schema": REPORT_SCHEMA, "command": "oracle", "csv": path.display().to_string(), "grid": {
        "x_max": grid.x_max, "nx": grid.nx, "nt": grid.nt } }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One named entry of a verify report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub measured: Value,
    pub threshold: Option<f64>,
    pub note: Option<String>,
}

impl Check {
    fn judged(name: &'static str, pass: bool, measured: Value, threshold: f64) -> Self {
        let status = if pass { Status::Pass } else { Status::Fail };
        Self { name, status, measured, threshold: Some(threshold), note: None }
    }

    fn skipped(name: &'static str, note: impl Into<String>) -> Self {
        Self { name, status: Status::Skipped, measured: Value::Null, threshold: None, note: Some(note.into()) }
    }

    fn failed(name: &'static str, err: &Error) -> Self {
        Self { name, status: Status::Fail, measured: Value::Null, threshold: None, note: Some(err.to_string()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub problem: ProblemSelection,
    pub horizon: f64,
    pub order: usize,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

fn check_or_fail(name: &'static str, r: Result<Check>) -> Check {
    r.unwrap_or_else(|e| match e {
        Error::Unsupported(msg) => Check::skipped(name, msg),
        e => Check::failed(name, &e),
    })
}

fn gr_check(cfg: &RunConfig, field: &SolutionField) -> Result<Check> {
    let lambdas: Vec<C> = cfg
        .verify
        .lambdas
        .clone()
        .unwrap_or_else(|| DEFAULT_LAMBDAS.to_vec())
        .iter()
        .map(|l| C::new(l[0], l[1]))
        .collect();
    let t = cfg.horizon;
    let mut worst: f64 = 0.0;
    let mut samples = Vec::new();
    for &lambda in &lambdas {
        for s in [t / 4.0, t / 2.0, t] {
            let r = gr_residual(field, lambda, s)?;
            worst = worst.max(r.residual.norm() / r.bound.max(f64::MIN_POSITIVE));
            samples.push(r);
        }
    }
    let measured = json!({ "worst_ratio": worst, "samples": samples });
    Ok(Check::judged("gr_residual", worst <= DEFAULTS.gr_factor, measured, DEFAULTS.gr_factor))
}

fn flode_check(dtn: &DtnSolution) -> Check {
    let f = &dtn.flode_residual;
    let scale = dtn.rhs.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max);
    let pass = f.l1_sup <= DEFAULTS.l1_tol && f.series_max <= DEFAULTS.series_tol * scale;
    let mut c = Check::judged("flode_residual", pass, serde_json::to_value(f).expect("serializes"), DEFAULTS.l1_tol);
    c.note = Some(format!("series residual bound {:.1e} × max|rhs coefficient|", DEFAULTS.series_tol));
    c
}

fn deformation_check_entry(cfg: &RunConfig, field: &SolutionField) -> Result<Check> {
    let t = cfg.horizon;
    let r = deformation_check(field, 1.0, t / 2.0, &DEFORMATION_RADII, &deformation_taus(t / 2.0, t))?;
    let tol = DEFAULTS.deformation_factor * field.quad.abs_tol;
    Ok(Check::judged("deformation", r.deviation <= tol, serde_json::to_value(&r).expect("serializes"), tol))
}

fn trace_check(cfg: &RunConfig, field: &SolutionField) -> Result<Check> {
    let t = cfg.horizon;
    let grid: Vec<f64> = (1..10).map(|j| t * j as f64 / 10.0).collect();
    let r = boundary_trace_check(field, &grid)?;
    let measured = serde_json::to_value(&r).expect("serializes");
    Ok(Check::judged("boundary_trace", r.gap <= DEFAULTS.trace_tol, measured, DEFAULTS.trace_tol))
}

fn oracle_check(cfg: &RunConfig, field: &SolutionField) -> Result<Check> {
    let kind = cfg.kind()?;
    if kind != ProblemKind::Heat {
        return Err(Error::Unsupported("finite-difference accuracy is certified for heat only".into()));
    }
    let (xs, ts) = cfg.grid()?;
    let fd = fd_values(&field.problem, kind, &fd_grid(cfg), &xs, &ts)?;
    let spectral: Vec<C> = field.evaluate_grid(&xs, &ts)?.iter().map(|v| v.value).collect();
    let rel = sup_relative_gap(&spectral, &fd)?;
    let measured = json!({ "sup_rel": rel, "points": fd.len() });
    Ok(Check::judged("oracle_diff", rel <= DEFAULTS.oracle_rel_tol, measured, DEFAULTS.oracle_rel_tol))
}

fn removeqt_entry(cfg: &RunConfig, problem: &ProblemSpec) -> Result<Check> {
    let class = problem.class;
    let mut worst: f64 = 0.0;
    let mut samples = Vec::new();
    for theta in enumerate_theta(&class) {
        for s in [0.25, 1.0] {
            let e = removeqt_check(&problem.q0, theta, class.n, s, &cfg.quad())?;
            worst = worst.max(e.value.norm());
            samples.push(json!({ "theta": theta, "t_gap": s, "value": [e.value.re, e.value.im], "error": e.error }));
        }
    }
    let measured = json!({ "worst": worst, "samples": samples });
    Ok(Check::judged("removeqT", worst <= DEFAULTS.removeqt_tol, measured, DEFAULTS.removeqt_tol))
}

/// Runs every named check and writes `verify.json`.
pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    let problem = cfg.problem()?;
    let dtn = solve_dtn(&problem, cfg.order(), &cfg.dtn_config())?;
    let field = cfg.field(problem.clone(), dtn.clone())?;
    let checks = vec![
        check_or_fail("gr_residual", gr_check(cfg, &field)),
        flode_check(&dtn),
        check_or_fail("deformation", deformation_check_entry(cfg, &field)),
        check_or_fail("boundary_trace", trace_check(cfg, &field)),
        check_or_fail("oracle_diff", oracle_check(cfg, &field)),
        check_or_fail("removeqT", removeqt_entry(cfg, &problem)),
    ];
    let all_pass = checks.iter().all(|c| c.status != Status::Fail);
    let report = VerifyReport { schema: REPORT_SCHEMA, problem: cfg.problem, horizon: cfg.horizon, order: cfg.order(), checks, all_pass };
    write(&cfg.output_dir(), "verify.json", &pretty(&serde_json::to_value(&report).expect("serializes")))?;
    Ok(report)
}

/// Stable name of an error variant for machine-readable payloads.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::AlphaMismatch { .. } => "alpha_mismatch",
        Error::InvalidClass(_) => "invalid_class",
        Error::BranchCut(_) => "branch_cut",
        Error::IllConditioned { .. } => "ill_conditioned",
        Error::Unstable(_) => "unstable_direction",
        Error::Compatibility { .. } => "compatibility",
        Error::Unsupported(_) => "unsupported",
        Error::Tolerance(_) => "tolerance",
        Error::Config(_) => "config",
    }
}

/// `{"schema", "error": {"kind", "message", …}}`.
pub fn error_payload(e: &Error) -> Value {
    let mut err = json!({ "kind": error_kind(e), "message": e.to_string() });
    if let Error::Compatibility { k, mismatch } = e {
        err["condition"] = json!(k);
        err["mismatch"] = json!(mismatch);
    }
    json!({ "schema": REPORT_SCHEMA, "error": err })
}
