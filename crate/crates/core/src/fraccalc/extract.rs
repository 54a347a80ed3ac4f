//! Least-squares recovery of fractional series coefficients from samples.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::series::{alpha_f64, Alpha, FracPowerSeries};
use crate::error::{Error, Result};

/// Default bound on the scaled condition estimate.
pub const DEFAULT_COND_BOUND: f64 = 1e13;

/// Chebyshev points of the first kind on `[a, b]`, ascending.
pub fn chebyshev_nodes(a: f64, b: f64, m: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..m)
        .map(|k| {
            let x = ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * x
        })
        .collect();
    v.reverse();
    v
}

#[derive(Debug, Clone)]
pub struct CoefficientFit {
    pub series: FracPowerSeries,
    /// `‖A c − v‖ / ‖v‖` (zero when the samples vanish).
    pub residual: f64,
    /// Ratio of extreme singular values of the column-scaled design matrix.
    pub condition: f64,
}

/// Fit `Σ_{u=0}^{U} c_u t^{uα}` to samples by column-scaled QR.
pub fn extract_coefficients(
    ts: &[f64],
    values: &[Complex64],
    alpha: Alpha,
    order: usize,
    cond_bound: f64,
) -> Result<CoefficientFit> {
    if ts.len() != values.len() {
        return Err(Error::Domain("sample count mismatch".into()));
    }
    if ts.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::Domain("sample times must be positive".into()));
    }
    let m = ts.len();
    let cols = order + 1;
    if m < cols {
        return Err(Error::Domain(format!("{m} samples cannot fix {cols} coefficients")));
    }
    let a = alpha_f64(alpha);
    let mut design = DMatrix::<f64>::from_fn(m, cols, |i, u| ts[i].powf(u as f64 * a));
    let scales: Vec<f64> = (0..cols).map(|j| design.column(j).norm()).collect();
    for (j, s) in scales.iter().enumerate() {
        design.column_mut(j).scale_mut(1.0 / s);
    }
    let sv = design.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > cond_bound {
        return Err(Error::IllConditioned { estimate: condition, bound: cond_bound });
    }
    let qr = design.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let solve = |rhs: DVector<f64>| -> Result<DVector<f64>> {
        r.solve_upper_triangular(&(q.transpose() * rhs))
            .ok_or_else(|| Error::Domain("singular triangular factor".into()))
    };
    let re = solve(DVector::from_iterator(m, values.iter().map(|v| v.re)))?;
    let im = solve(DVector::from_iterator(m, values.iter().map(|v| v.im)))?;
    let coeffs: Vec<Complex64> =
        (0..cols).map(|j| Complex64::new(re[j], im[j]) / scales[j]).collect();
    let series = FracPowerSeries::new(alpha, coeffs)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, v) in ts.iter().zip(values) {
        num += (series.eval(*t) - v).norm_sqr();
        den += v.norm_sqr();
    }
    let residual = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
    Ok(CoefficientFit { series, residual, condition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccalc::gamma::gamma;
    use num_rational::Ratio;

    #[test]
    fn exact_member_is_recovered() {
        let ts = chebyshev_nodes(0.02, 1.0, 20);
        let v: Vec<Complex64> = ts.iter().map(|t| Complex64::new(1.0 + t.sqrt(), 0.0)).collect();
        let fit = extract_coefficients(&ts, &v, Ratio::new(1, 2), 3, DEFAULT_COND_BOUND).unwrap();
        let want = [1.0, 1.0, 0.0, 0.0];
        for (u, w) in want.iter().enumerate() {
            assert!((fit.series.coeff(u).re - w).abs() < 1e-10);
        }
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn zero_samples_give_zero_series() {
        let ts = chebyshev_nodes(0.02, 1.0, 10);
        let v = vec![Complex64::new(0.0, 0.0); 10];
        let fit = extract_coefficients(&ts, &v, Ratio::new(1, 2), 4, DEFAULT_COND_BOUND).unwrap();
        assert!(fit.series.is_zero());
        assert_eq!(fit.residual, 0.0);
    }

    #[test]
    fn truncated_mittag_leffler() {
        let coeffs: Vec<f64> =
            (0..=8).map(|u| (-1f64).powi(u) / gamma(u as f64 / 2.0 + 1.0).unwrap()).collect();
        let s = FracPowerSeries::from_real(Ratio::new(1, 2), &coeffs).unwrap();
        let ts = chebyshev_nodes(0.02, 1.0, 40);
        let v: Vec<Complex64> = ts.iter().map(|&t| s.eval(t)).collect();
        let fit = extract_coefficients(&ts, &v, Ratio::new(1, 2), 8, DEFAULT_COND_BOUND).unwrap();
        for (u, c) in coeffs.iter().enumerate() {
            assert!((fit.series.coeff(u).re - c).abs() < 1e-6, "u={u}");
        }
    }

    #[test]
    fn reports_ill_conditioning() {
        let ts = chebyshev_nodes(0.5, 0.5001, 40);
        let v = vec![Complex64::new(1.0, 0.0); 40];
        let err = extract_coefficients(&ts, &v, Ratio::new(1, 2), 10, 1e8).unwrap_err();
        assert!(matches!(err, Error::IllConditioned { .. }));
    }
}
