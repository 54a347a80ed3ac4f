//! Inverse transforms along the real `ρ` line for the inhomogeneity `g` of
//! the boundary-value equations, and the numerical check that the final-time
//! term integrates to zero.
//!
//! With `p = −iρ`, the integrands are functions `W(p)` whose large-`p`
//! behaviour `Σ d_m p^{−m/n}` is known from the derivatives of the datum at
//! the origin. A model `M(p) = Σ e_m (1+p)^{−m/n}` with the same expansion to
//! order `K` is subtracted; its inverse transform is exact and the remainder
//! decays like `|ρ|^{−(K+1)/n}`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::datum::{InitialDatum, QuadratureConfig};
use crate::error::{Error, Result};
use crate::fraccalc::gamma::gamma_pos;
use crate::fraccalc::{Alpha, FracPowerSeries};
use crate::quad::{gk15_nodes, graded_edges, uniform_edges, Estimate, PanelRule};
use crate::spectral::{c_coeff, in_theta_band, EquationClass};

/// Largest truncation radius tried before giving up on the tail target.
const RHO_CAP: f64 = 1.0e6;

fn binom_neg(beta: f64, k: usize) -> f64 {
    // C(−β, k)
    (0..k).fold(1.0, |acc, i| acc * (-beta - i as f64) / (i + 1) as f64)
}

/// Coefficients `e_m` with `Σ e_m (1+p)^{−m/n} ~ Σ d_m p^{−m/n}` through `m = d.len()`.
pub fn model_coefficients(d: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); d.len()];
    for m in 1..=d.len() {
        let mut v = d[m - 1];
        let mut j = m;
        let mut k = 0;
        while j > n {
            j -= n;
            k += 1;
            v -= e[j - 1] * binom_neg(j as f64 / n as f64, k);
        }
        e[m - 1] = v;
    }
    e
}

fn model_eval(e: &[Complex64], n: usize, p: Complex64) -> Complex64 {
    let base = (1.0 + p).ln() / n as f64;
    e.iter().enumerate().map(|(i, c)| c * (-(i as f64 + 1.0) * base).exp()).sum()
}

/// `(1/2π)∫ e^{−iρt}(1+p)^{−m/n} dρ = t^{m/n−1}e^{−t}/Γ(m/n)` summed over the model.
pub fn model_inverse(e: &[Complex64], n: usize, t: f64) -> Complex64 {
    e.iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(i, c)| {
            let b = (i as f64 + 1.0) / n as f64;
            c * t.powf(b - 1.0) * (-t).exp() / gamma_pos(b)
        })
        .sum()
}

/// Remainder `W − M` sampled on the detoured real line, reusable for any kernel.
#[derive(Debug, Clone)]
pub struct SpectralLine {
    rule_pos: PanelRule,
    rule_neg: PanelRule,
    arc_nodes: [f64; 15],
    r_arc: f64,
    rem_pos: Vec<Complex64>,
    rem_neg: Vec<Complex64>,
    rem_arc: Vec<Complex64>,
    err_pos: Vec<f64>,
    err_neg: Vec<f64>,
    err_arc: Vec<f64>,
    /// Bound on the contribution from `|ρ| > rho_max` for unimodular kernels.
    pub tail: f64,
    pub rho_max: f64,
    pub model: Vec<Complex64>,
    pub n: usize,
}

impl SpectralLine {
    /// Sample `W(p) − M(p)` with `d` the large-`p` coefficients of `W`.
    ///
    /// `w` returns the integrand and a pointwise error estimate. Panels on
    /// `|ρ| ≥ 1` have width at most `min(1, π/t_max)`.
    pub fn build<W>(w: W, d: &[Complex64], n: usize, t_max: f64, cfg: &QuadratureConfig) -> Result<Self>
    where
        W: Fn(Complex64) -> Result<Estimate> + Sync,
    {
        cfg.validate()?;
        if d.len() < n {
            return Err(Error::Domain(format!(
                "need at least {n} expansion coefficients of the datum, got {}",
                d.len()
            )));
        }
        let model = model_coefficients(d, n);
        let decay = (d.len() as f64 + 1.0) / n as f64;
        let r = cfg.r_arc;
        let h = 1.0f64.min(PI / t_max.max(1e-12));
        let rem = |rho: Complex64| -> Result<(Complex64, f64)> {
            let p = -Complex64::i() * rho;
            let v = w(p)?;
            Ok((v.value - model_eval(&model, n, p), v.error))
        };
        let sample = |nodes: &[f64], sign: f64| -> Result<(Vec<Complex64>, Vec<f64>)> {
            use rayon::prelude::*;
            let out: Result<Vec<(Complex64, f64)>> =
                nodes.par_iter().map(|&x| rem(Complex64::new(sign * x, 0.0))).collect();
            Ok(out?.into_iter().unzip())
        };

        let arc_nodes = gk15_nodes(0.0, PI);
        let mut rem_arc = Vec::with_capacity(15);
        let mut err_arc = Vec::with_capacity(15);
        for &phi in &arc_nodes {
            let (v, e) = rem(Complex64::from_polar(r, phi))?;
            rem_arc.push(v);
            err_arc.push(e);
        }

        let mut rho_max = cfg.rho_max.unwrap_or(32.0);
        loop {
            let mut edges = if r < 1.0 { graded_edges(r, 1.0, r, 2.0) } else { vec![r] };
            let start = *edges.last().unwrap();
            if rho_max > start {
                edges.pop();
                edges.extend(uniform_edges(start, rho_max, h));
            }
            let rule = PanelRule::new(&edges);
            let (rem_pos, err_pos) = sample(&rule.nodes, 1.0)?;
            let (rem_neg, err_neg) = sample(&rule.nodes, -1.0)?;
            let edge = rem(Complex64::new(rho_max, 0.0))?.0.norm().max(rem(Complex64::new(-rho_max, 0.0))?.0.norm());
            let tail = if decay > 1.0 { 2.0 * edge * rho_max / (decay - 1.0) } else { f64::INFINITY };
            let done = cfg.rho_max.is_some() || tail <= 0.25 * cfg.abs_tol || rho_max >= RHO_CAP;
            if done {
                return Ok(Self {
                    rule_pos: rule.clone(),
                    rule_neg: rule,
                    arc_nodes,
                    r_arc: r,
                    rem_pos,
                    rem_neg,
                    rem_arc,
                    err_pos,
                    err_neg,
                    err_arc,
                    tail,
                    rho_max,
                    model,
                    n,
                });
            }
            rho_max *= 2.0;
        }
    }

    /// `(1/2π)∫ k(ρ)(W − M)(ρ) dρ` along the detoured line, `|k| ≤ 1` on ℝ.
    pub fn integrate<K: Fn(Complex64) -> Complex64>(&self, kernel: K) -> Estimate {
        let weighted = |rule: &PanelRule, vals: &[Complex64], errs: &[f64], sign: f64| {
            let kv: Vec<Complex64> = rule
                .nodes
                .iter()
                .zip(vals)
                .map(|(&x, &v)| kernel(Complex64::new(sign * x, 0.0)) * v)
                .collect();
            let ev: Vec<Complex64> = errs.iter().map(|&e| Complex64::new(e, 0.0)).collect();
            let mut est = rule.apply(&kv);
            est.error += rule.apply(&ev).value.re.abs();
            est
        };
        let pos = weighted(&self.rule_pos, &self.rem_pos, &self.err_pos, 1.0);
        let neg = weighted(&self.rule_neg, &self.rem_neg, &self.err_neg, -1.0);
        // ρ = r e^{iφ} from φ = π to 0
        let mut arc_vals = [Complex64::new(0.0, 0.0); 15];
        let mut arc_err = 0.0;
        for (i, &phi) in self.arc_nodes.iter().enumerate() {
            let rho = Complex64::from_polar(self.r_arc, phi);
            let jac = Complex64::i() * rho;
            arc_vals[i] = -kernel(rho) * self.rem_arc[i] * jac;
            arc_err += self.err_arc[i] * self.r_arc * kernel(rho).norm();
        }
        let arc = crate::quad::gk15_from_values(0.5 * PI, &arc_vals);
        let total = pos + neg + arc;
        Estimate {
            value: total.value / (2.0 * PI),
            error: (total.error + arc_err * PI / 15.0 + self.tail) / (2.0 * PI),
        }
    }
}

/// `W(p) = Σ_i w_i q̂0(e^{iθ_i} p^{1/n}) − Σ_j κ_j p^{−(j+1)/n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub n: usize,
    pub terms: Vec<(Complex64, f64)>,
    pub kappa: Vec<Complex64>,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl Bracket {
    /// Heat: `q̂0(−i√p) − q0(0)/√p`.
    pub fn heat(q0: &InitialDatum) -> Self {
        Self { n: 2, terms: vec![(c(1.0), -PI / 2.0)], kappa: vec![q0.eval(0.0)] }
    }

    /// Heat with the correction term entering with a plus sign; kept to
    /// demonstrate the resulting `t^{−1/2}` singularity.
    pub fn heat_plus_sign(q0: &InitialDatum) -> Self {
        Self { n: 2, terms: vec![(c(1.0), -PI / 2.0)], kappa: vec![-q0.eval(0.0)] }
    }

    /// Schrödinger (without the boundary-forcing term):
    /// `−i q̂0(−√i√p) − q0(0)/(√i√p)`.
    pub fn schrodinger(q0: &InitialDatum) -> Self {
        let sqrt_i = Complex64::from_polar(1.0, PI / 4.0);
        Self {
            n: 2,
            terms: vec![(-Complex64::i(), -3.0 * PI / 4.0)],
            kappa: vec![q0.eval(0.0) / sqrt_i],
        }
    }

    /// Third order, one condition: the two-ray combination eliminating `q_x(0,·)`.
    pub fn lkdv1(q0: &InitialDatum) -> Self {
        let (t1, t2) = (-PI / 6.0, -5.0 * PI / 6.0);
        let s3 = 3f64.sqrt();
        Self {
            n: 3,
            terms: vec![
                (Complex64::from_polar(1.0 / s3, -t1), t1),
                (-Complex64::from_polar(1.0 / s3, -t2), t2),
            ],
            kappa: vec![q0.eval(0.0)],
        }
    }

    /// Third order, two conditions: `q̂0(−ip^{1/3}) − q0(0)(p^{1/3} − b(0))/p^{2/3}`.
    pub fn lkdv2(q0: &InitialDatum, b0: Complex64) -> Self {
        let y0 = q0.eval(0.0);
        Self { n: 3, terms: vec![(c(1.0), -PI / 2.0)], kappa: vec![y0, -y0 * b0] }
    }

    /// General class along ray `θ`: `q̂0(e^{iθ}p^{1/n}) − Σ_{j≤n−2} c_j(e^{iθ})q0^{(j)}(0)p^{−(j+1)/n}`.
    pub fn general(class: &EquationClass, q0: &InitialDatum, theta: f64) -> Result<Self> {
        let e = Complex64::from_polar(1.0, theta);
        let derivs = q0.derivs_at_zero(class.n - 1);
        if derivs.len() + 1 < class.n {
            return Err(Error::Domain(format!("datum supplies {} derivatives, need {}", derivs.len(), class.n - 1)));
        }
        let kappa = (0..class.n - 1)
            .map(|j| Ok(c_coeff(e, j, class)? * derivs[j]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n: class.n, terms: vec![(c(1.0), theta)], kappa })
    }

    /// `W(p)`.
    pub fn eval(&self, q0: &InitialDatum, p: Complex64, cfg: &QuadratureConfig) -> Result<Estimate> {
        let s = p.powf(1.0 / self.n as f64);
        let mut out = Estimate::zero();
        for &(w, theta) in &self.terms {
            let h = q0.hat(Complex64::from_polar(1.0, theta) * s, cfg)?;
            out += Estimate { value: w * h.value, error: w.norm() * h.error };
        }
        for (j, k) in self.kappa.iter().enumerate() {
            out.value -= k / s.powi(j as i32 + 1);
        }
        Ok(out)
    }

    /// `d_m`, `m = 1..=count`, from `q̂0(λ) ~ Σ q0^{(m−1)}(0)/(iλ)^m`.
    pub fn expansion(&self, q0: &InitialDatum, count: usize) -> Vec<Complex64> {
        let derivs = q0.derivs_at_zero(count);
        (1..=derivs.len())
            .map(|m| {
                let mut d: Complex64 = self
                    .terms
                    .iter()
                    .map(|&(w, theta)| {
                        w * derivs[m - 1] / (Complex64::i() * Complex64::from_polar(1.0, theta)).powi(m as i32)
                    })
                    .sum();
                if let Some(k) = self.kappa.get(m - 1) {
                    d -= k;
                }
                d
            })
            .collect()
    }
}

/// Expansion coefficients `d_m`, `m < n`, that fail to cancel; each makes
/// `g` behave like `t^{m/n−1}` at the origin.
pub fn singular_terms(q0: &InitialDatum, bracket: &Bracket, tol: f64) -> Vec<(usize, Complex64)> {
    bracket
        .expansion(q0, bracket.n - 1)
        .into_iter()
        .enumerate()
        .filter(|(_, d)| d.norm() > tol)
        .map(|(i, d)| (i + 1, d))
        .collect()
}

/// One sample of `g` with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GSample {
    pub t: f64,
    pub value: Complex64,
    pub error: f64,
}

/// `g(t) = (1/2π)∫ e^{−iρt} W(−iρ) dρ` on `t_grid ⊂ (0, ∞)`.
pub fn g_datum(
    q0: &InitialDatum,
    bracket: &Bracket,
    t_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<GSample>> {
    if let Some(&t) = t_grid.iter().find(|&&t| !(t > 0.0)) {
        return Err(Error::Domain(format!("g is sampled on t > 0, got t = {t}")));
    }
    if q0.is_zero() {
        return Ok(t_grid.iter().map(|&t| GSample { t, value: c(0.0), error: 0.0 }).collect());
    }
    let n = bracket.n;
    let d = bracket.expansion(q0, 4 * n);
    let t_max = t_grid.iter().cloned().fold(0.0, f64::max);
    let line = SpectralLine::build(|p| bracket.eval(q0, p, cfg), &d, n, t_max, cfg)?;
    Ok(t_grid
        .iter()
        .map(|&t| {
            let rem = line.integrate(|rho| (-Complex64::i() * rho * t).exp());
            GSample { t, value: model_inverse(&line.model, n, t) + rem.value, error: rem.error }
        })
        .collect())
}

/// `∫_ℝ e^{iρs} φ̂(e^{iθ}(−iρ)^{1/n}) dρ` for `s = T − t > 0`, which vanishes
/// for admissible `θ`.
pub fn removeqt_check(
    phi: &InitialDatum,
    theta: f64,
    n: usize,
    s: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if !in_theta_band(n, theta) {
        return Err(Error::Domain(format!("θ = {theta} lies outside [−(2n−1)π/2n, −π/2n] for n = {n}")));
    }
    if !(s > 0.0) {
        return Err(Error::Domain(format!("T − t must be positive, got {s}")));
    }
    if phi.is_zero() {
        return Ok(Estimate::zero());
    }
    let bracket = Bracket { n, terms: vec![(c(1.0), theta)], kappa: vec![] };
    let d = bracket.expansion(phi, 4 * n);
    let line = SpectralLine::build(|p| bracket.eval(phi, p, cfg), &d, n, s, cfg)?;
    // the model closes to zero in the upper half plane
    let est = line.integrate(|rho| (Complex64::i() * rho * s).exp());
    Ok(Estimate { value: est.value * (2.0 * PI), error: est.error * (2.0 * PI) })
}

/// Small-time expansion `g(t) = Σ_u G_u t^{u/n}`, `G_u = d_{u+n}/Γ(u/n+1)`,
/// from the bracket's large-`p` coefficients; `count` terms.
pub fn g_small_time_series(q0: &InitialDatum, bracket: &Bracket, count: usize) -> Result<FracPowerSeries> {
    let n = bracket.n;
    let d = bracket.expansion(q0, count + n);
    let coeffs = (0..count)
        .map(|u| {
            let m = u + n; // 1-based index into d
            d.get(m - 1).map(|v| v / gamma_pos(u as f64 / n as f64 + 1.0)).unwrap_or(c(0.0))
        })
        .collect();
    FracPowerSeries::new(Alpha::new(1, n as i64), coeffs)
}

/// Write samples as CSV with columns `t, re g, im g, err_estimate`.
pub fn g_to_csv<W: std::io::Write>(samples: &[GSample], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
    wr.write_record(["t", "re g", "im g", "err_estimate"]).map_err(io)?;
    for s in samples {
        wr.write_record([
            format!("{:.17e}", s.t),
            format!("{:.17e}", s.value.re),
            format!("{:.17e}", s.value.im),
            format!("{:.6e}", s.error),
        ])
        .map_err(io)?;
    }
    wr.flush().map_err(|e| Error::Config(format!("csv: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::erf::erfc;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn watson(d: &[Complex64], n: usize, t: f64) -> Complex64 {
        // g(t) = Σ_u d_{u+n} t^{u/n}/Γ(u/n+1)
        (n - 1..d.len())
            .map(|m| {
                let u = (m + 1 - n) as f64;
                d[m] * t.powf(u / n as f64) / gamma_pos(u / n as f64 + 1.0)
            })
            .sum()
    }

    #[test]
    fn model_matches_expansion() {
        let d: Vec<Complex64> = (1..=9).map(|m| Complex64::new(m as f64, -0.5 * m as f64)).collect();
        let e = model_coefficients(&d, 3);
        for &r in &[1e3, 1e4] {
            let p = Complex64::new(0.0, -r);
            let series: Complex64 = d.iter().enumerate().map(|(i, c)| c * p.powf(-(i as f64 + 1.0) / 3.0)).sum();
            let diff = (model_eval(&e, 3, p) - series).norm();
            assert!(diff < 50.0 * r.powf(-10.0 / 3.0), "r = {r}: {diff}");
        }
    }

    #[test]
    fn expansion_matches_bracket() {
        let q0 = InitialDatum::exp_poly_real(&[1.0, 0.5, 0.25], 0.5).unwrap();
        let b = Bracket::lkdv1(&q0);
        let d = b.expansion(&q0, 12);
        let p = Complex64::new(0.0, -2e3);
        let w = b.eval(&q0, p, &cfg()).unwrap().value;
        let series: Complex64 = d.iter().enumerate().map(|(i, c)| c * p.powf(-(i as f64 + 1.0) / 3.0)).sum();
        assert!((w - series).norm() < 1e-12);
        // the first two orders cancel for this combination
        assert!(d[0].norm() < 1e-14 && d[1].norm() < 1e-14);
    }

    #[test]
    fn heat_exponential_closed_form() {
        // q0 = e^{−x}: W = −1/(√p(1+√p)) so g = −e^t erfc(√t)
        let q0 = InitialDatum::exp_poly_real(&[1.0], 1.0).unwrap();
        let ts = [0.02, 0.3, 0.7, 1.0];
        let g = g_datum(&q0, &Bracket::heat(&q0), &ts, &cfg()).unwrap();
        for s in &g {
            let want = -(s.t.exp()) * erfc(s.t.sqrt());
            assert!((s.value.re - want).abs() < 1e-8 && s.value.im.abs() < 1e-8, "t={}: {}", s.t, s.value);
            assert!(s.error < 1e-7);
        }
    }

    #[test]
    fn plus_sign_adds_inverse_sqrt() {
        let q0 = InitialDatum::exp_poly_real(&[1.0, 2.0], 1.0).unwrap();
        let ts = [0.1, 0.5];
        let a = g_datum(&q0, &Bracket::heat(&q0), &ts, &cfg()).unwrap();
        let b = g_datum(&q0, &Bracket::heat_plus_sign(&q0), &ts, &cfg()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let want = 2.0 / (PI * x.t).sqrt();
            assert!(((y.value - x.value).re - want).abs() < 1e-7);
        }
        assert!(singular_terms(&q0, &Bracket::heat(&q0), 1e-12).is_empty());
        assert_eq!(singular_terms(&q0, &Bracket::heat_plus_sign(&q0), 1e-12).len(), 1);
    }

    #[test]
    fn all_classes_match_watson_series() {
        let q0 = InitialDatum::exp_poly_real(&[1.0, 1.5], 0.5).unwrap();
        let cases = [
            Bracket::heat(&q0),
            Bracket::schrodinger(&q0),
            Bracket::lkdv1(&q0),
            Bracket::lkdv2(&q0, Complex64::new(-1.0, 0.0)),
        ];
        for b in &cases {
            let d = b.expansion(&q0, 80);
            let ts = [0.1, 0.5, 1.0];
            let g = g_datum(&q0, b, &ts, &cfg()).unwrap();
            for s in &g {
                let want = watson(&d, b.n, s.t);
                assert!((s.value - want).norm() < 1e-8, "n={} t={}: {} vs {want}", b.n, s.t, s.value);
            }
        }
    }

    #[test]
    fn general_specialises_to_heat() {
        let q0 = InitialDatum::exp_poly_real(&[1.0, 1.0], 1.0).unwrap();
        let g = Bracket::general(&EquationClass::heat(), &q0, -PI / 2.0).unwrap();
        let h = Bracket::heat(&q0);
        assert_eq!(g.terms, h.terms);
        assert!((g.kappa[0] - h.kappa[0]).norm() < 1e-15);
    }

    #[test]
    fn zero_datum_gives_zero() {
        let g = g_datum(&InitialDatum::zero(), &Bracket::heat(&InitialDatum::zero()), &[0.5], &cfg()).unwrap();
        assert_eq!(g[0].value, Complex64::new(0.0, 0.0));
        assert!(g_datum(&InitialDatum::zero(), &Bracket::heat(&InitialDatum::zero()), &[0.0], &cfg()).is_err());
    }

    #[test]
    fn refinement_within_error_estimate() {
        let q0 = InitialDatum::exp_poly_real(&[1.0, 0.5], 1.0).unwrap();
        let b = Bracket::lkdv2(&q0, Complex64::new(0.5, 0.0));
        let ts = [0.25, 0.75];
        let base = g_datum(&q0, &b, &ts, &QuadratureConfig { rho_max: Some(64.0), ..cfg() }).unwrap();
        let fine = g_datum(&q0, &b, &ts, &QuadratureConfig { rho_max: Some(128.0), r_arc: 5e-4, ..cfg() }).unwrap();
        for (x, y) in base.iter().zip(&fine) {
            assert!((x.value - y.value).norm() <= 2.0 * x.error, "{} vs {} (err {})", x.value, y.value, x.error);
        }
    }

    #[test]
    fn removeqt_vanishes() {
        let phi = InitialDatum::exp_poly_real(&[1.0], 1.0).unwrap();
        let v = removeqt_check(&phi, -PI / 2.0, 2, 0.5, &cfg()).unwrap();
        assert!(v.value.norm() <= 1e-6, "{}", v.value);
        assert!(removeqt_check(&phi, PI / 2.0, 2, 0.5, &cfg()).is_err());
        assert_eq!(removeqt_check(&InitialDatum::zero(), -PI / 2.0, 2, 0.5, &cfg()).unwrap().value.norm(), 0.0);
        let small = removeqt_check(&phi, -PI / 6.0, 3, 0.25, &QuadratureConfig { rho_max: Some(16.0), ..cfg() }).unwrap();
        let large = removeqt_check(&phi, -PI / 6.0, 3, 0.25, &QuadratureConfig { rho_max: Some(256.0), ..cfg() }).unwrap();
        assert!(large.value.norm() < small.value.norm());
    }

    #[test]
    fn small_time_series_matches_sampled_g() {
        let q0 = InitialDatum::exp_poly_real(&[1.0, 2.0], 1.0).unwrap();
        let b = Bracket::heat(&q0);
        let series = g_small_time_series(&q0, &b, 30).unwrap();
        let samples = g_datum(&q0, &b, &[0.2, 0.6], &cfg()).unwrap();
        for s in samples {
            assert!((series.eval(s.t) - s.value).norm() < 1e-8);
        }
    }
}
