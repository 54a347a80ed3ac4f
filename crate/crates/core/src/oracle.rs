//! Reference solutions independent of the spectral pipeline: a θ-scheme
//! finite-difference solver for `q_t = c q_xx` with a dynamic Robin
//! condition, the method-of-images solution for the Neumann heat problem,
//! and Mittag-Leffler functions.

use num_complex::Complex64;
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quad::Estimate;
use crate::transforms::InitialDatum;

/// Discretization of `[0, x_max] × [0, t_final]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdGrid {
    pub x_max: f64,
    pub nx: usize,
    pub nt: usize,
    pub t_final: f64,
    /// Implicitness weight; 1/2 is Crank–Nicolson.
    pub theta: f64,
    /// Fully implicit steps taken first to damp start-up oscillations.
    pub implicit_startup: usize,
    /// Allowed mismatch in `b(0)q0(0) + q0'(0) = h(0)`.
    pub compat_tol: f64,
}

impl FdGrid {
    pub fn new(x_max: f64, nx: usize, nt: usize, t_final: f64) -> Self {
        Self { x_max, nx, nt, t_final, theta: 0.5, implicit_startup: 2, compat_tol: 1e-8 }
    }

    /// Both step counts doubled.
    pub fn refined(&self) -> Self {
        Self { nx: 2 * self.nx, nt: 2 * self.nt, implicit_startup: 2 * self.implicit_startup, ..*self }
    }

    pub fn dx(&self) -> f64 {
        self.x_max / self.nx as f64
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.nt as f64
    }

    fn validate(&self) -> Result<()> {
        if self.nx < 16 || self.nt < 16 {
            return Err(Error::Config(format!("grid needs nx, nt ≥ 16, got {}, {}", self.nx, self.nt)));
        }
        if !(self.x_max > 0.0 && self.t_final > 0.0 && self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::Config(format!("invalid grid {self:?}")));
        }
        Ok(())
    }
}

/// Field samples `q[j][i] ≈ q(x_i, t_j)`.
#[derive(Debug, Clone)]
pub struct FdSolution {
    pub grid: FdGrid,
    pub q: Vec<Vec<Complex64>>,
}

impl FdSolution {
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.grid.dx()
    }

    pub fn t(&self, j: usize) -> f64 {
        j as f64 * self.grid.dt()
    }

    /// `q(0, t_j)`.
    pub fn trace(&self) -> Vec<Complex64> {
        self.q.iter().map(|row| row[0]).collect()
    }

    /// Cubic Lagrange interpolation in both variables.
    pub fn at(&self, x: f64, t: f64) -> Complex64 {
        let stencil = |v: f64, h: f64, n: usize| -> (usize, [f64; 4]) {
            let k = ((v / h).floor() as isize - 1).clamp(0, n as isize - 3) as usize;
            let s = v / h - k as f64;
            let mut w = [0.0; 4];
            for (a, wa) in w.iter_mut().enumerate() {
                *wa = (0..4).filter(|&b| b != a).map(|b| (s - b as f64) / (a as f64 - b as f64)).product();
            }
            (k, w)
        };
        let (i0, wx) = stencil(x, self.grid.dx(), self.grid.nx);
        let (j0, wt) = stencil(t, self.grid.dt(), self.grid.nt);
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, &wb) in wt.iter().enumerate() {
            for (a, &wa) in wx.iter().enumerate() {
                acc += self.q[j0 + b][i0 + a] * wa * wb;
            }
        }
        acc
    }
}

fn thomas(sub: &[Complex64], diag: &[Complex64], sup: &[Complex64], rhs: &mut [Complex64]) {
    let n = diag.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut d = diag[0];
    c[0] = sup[0] / d;
    rhs[0] /= d;
    for i in 1..n {
        d = diag[i] - sub[i] * c[i - 1];
        if i + 1 < n {
            c[i] = sup[i] / d;
        }
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= c[i] * next;
    }
}

/// Solve `q_t = c q_xx`, `b(t)q(0,t) + q_x(0,t) = h(t)`, `q(x_max, t) = 0`.
///
/// `c = 1` is the heat equation and `c = i` the linear Schrödinger equation.
/// The boundary row uses the second-order one-sided difference for `q_x`,
/// with `q_2` eliminated through the first interior row.
pub fn fd_solve<B, H>(q0: &InitialDatum, c: Complex64, b: B, h: H, grid: &FdGrid) -> Result<FdSolution>
where
    B: Fn(f64) -> Complex64,
    H: Fn(f64) -> Complex64,
{
    grid.validate()?;
    let q00 = q0.eval(0.0);
    let q01 = q0
        .deriv(0.0, 1)
        .ok_or_else(|| Error::Domain("datum lacks q0'(0) for the compatibility check".into()))?;
    let mismatch = (b(0.0) * q00 + q01 - h(0.0)).norm();
    if mismatch > grid.compat_tol {
        return Err(Error::Compatibility { k: 1, mismatch });
    }
    let (nx, dx, dt) = (grid.nx, grid.dx(), grid.dt());
    let m = nx; // unknowns at i = 0..nx−1
    let mut cur: Vec<Complex64> = (0..=nx).map(|i| q0.eval(i as f64 * dx)).collect();
    cur[nx] = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(grid.nt + 1);
    out.push(cur.clone());
    let mut sub = vec![Complex64::new(0.0, 0.0); m];
    let mut diag = vec![Complex64::new(0.0, 0.0); m];
    let mut sup = vec![Complex64::new(0.0, 0.0); m];
    let mut rhs = vec![Complex64::new(0.0, 0.0); m];
    for step in 1..=grid.nt {
        let th = if step <= grid.implicit_startup { 1.0 } else { grid.theta };
        let t = step as f64 * dt;
        let r = c * th * dt / (dx * dx);
        let re = c * (1.0 - th) * dt / (dx * dx);
        for i in 1..m {
            sub[i] = -r;
            diag[i] = 1.0 + 2.0 * r;
            sup[i] = -r;
            rhs[i] = cur[i] + re * (cur[i - 1] - 2.0 * cur[i] + cur[i + 1]);
        }
        // boundary row after eliminating q_2
        let two_r_dx = 2.0 * r * dx;
        diag[0] = b(t) - 1.0 / dx;
        sup[0] = 2.0 / dx - (1.0 + 2.0 * r) / two_r_dx;
        rhs[0] = h(t) - rhs[1] / two_r_dx;
        thomas(&sub, &diag, &sup, &mut rhs);
        cur[..m].copy_from_slice(&rhs);
        cur[nx] = Complex64::new(0.0, 0.0);
        out.push(cur.clone());
    }
    Ok(FdSolution { grid: *grid, q: out })
}

/// Heat specialization of [`fd_solve`].
pub fn fd_solve_heat<B, H>(q0: &InitialDatum, b: B, h: H, grid: &FdGrid) -> Result<FdSolution>
where
    B: Fn(f64) -> Complex64,
    H: Fn(f64) -> Complex64,
{
    fd_solve(q0, Complex64::new(1.0, 0.0), b, h, grid)
}

/// `sup_k |a_k − b_k| / |b_k|` against the reference `b`.
pub fn sup_relative_gap(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!("{} values against {} references", a.len(), b.len())));
    }
    a.iter().zip(b).try_fold(0.0f64, |worst, (x, y)| {
        if y.norm() == 0.0 {
            return Err(Error::Domain("relative gap against a zero reference".into()));
        }
        Ok(worst.max((x - y).norm() / y.norm()))
    })
}

/// Neumann heat solution for `q0 = e^{−(x−c)²}` by even reflection.
pub fn image_neumann_gaussian(x: f64, t: f64, center: f64) -> f64 {
    if t == 0.0 {
        return (-(x - center).powi(2)).exp();
    }
    let s = 1.0 + 4.0 * t;
    let a = s / (4.0 * t);
    let term = |x: f64| {
        let m = (x + 4.0 * t * center) / s;
        (-(x - center).powi(2) / s).exp() / s.sqrt() * 0.5 * erfc(-m * a.sqrt())
    };
    term(x) + term(-x)
}

/// `E_{α,β}(z) = Σ z^k/Γ(kα+β)` with a certified tail bound.
pub fn mittag_leffler2(alpha: f64, beta: f64, z: Complex64, terms: usize) -> Result<Estimate> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::Domain(format!("Mittag-Leffler needs α, β > 0, got {alpha}, {beta}")));
    }
    let lz = z.norm().ln();
    let term = |k: usize| -> Complex64 {
        if z.norm() == 0.0 {
            return if k == 0 { Complex64::new(1.0 / statrs::function::gamma::gamma(beta), 0.0) } else { Complex64::new(0.0, 0.0) };
        }
        let mag = (k as f64 * lz - ln_gamma(k as f64 * alpha + beta)).exp();
        Complex64::from_polar(mag, k as f64 * z.arg())
    };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for k in 0..terms {
        let tk = term(k);
        sum += tk;
        abs_sum += tk.norm();
    }
    // ratios |t_{k+1}/t_k| decrease once kα + β is past the gamma minimum
    let tk = term(terms).norm();
    let ratio = |k: usize| -> f64 {
        if z.norm() == 0.0 {
            return 0.0;
        }
        (lz + ln_gamma(k as f64 * alpha + beta) - ln_gamma((k + 1) as f64 * alpha + beta)).exp()
    };
    let r = ratio(terms);
    let monotone = terms as f64 * alpha + beta > 2.0;
    if !(monotone && r < 1.0) {
        return Err(Error::Tolerance(format!(
            "Mittag-Leffler tail not certified with {terms} terms (ratio {r:.3e})"
        )));
    }
    Ok(Estimate { value: sum, error: tk / (1.0 - r) + 8.0 * f64::EPSILON * abs_sum })
}

/// `E_α(z) = E_{α,1}(z)`.
pub fn mittag_leffler(alpha: f64, z: Complex64, terms: usize) -> Result<Estimate> {
    mittag_leffler2(alpha, 1.0, z, terms)
}
