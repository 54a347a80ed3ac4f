//! L1 discretization of the Caputo derivative on a uniform grid.

use num_complex::Complex64;

use super::gamma::gamma_pos;
use crate::error::{Error, Result};

/// Caputo derivative of order `alpha ∈ (0,1)` at every node of a uniform grid
/// `t_n = n h`, from samples `y_n`. The value at `t_0` is zero.
pub fn caputo_l1_numeric(samples: &[Complex64], h: f64, alpha: f64) -> Result<Vec<Complex64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("L1 scheme needs alpha in (0,1), got {alpha}")));
    }
    if !(h > 0.0) {
        return Err(Error::Domain("grid spacing must be positive".into()));
    }
    let n = samples.len();
    let w: Vec<f64> = (0..n)
        .map(|k| ((k + 1) as f64).powf(1.0 - alpha) - (k as f64).powf(1.0 - alpha))
        .collect();
    let diffs: Vec<Complex64> = (1..n).map(|j| samples[j] - samples[j - 1]).collect();
    let scale = h.powf(-alpha) / gamma_pos(2.0 - alpha);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (m, o) in out.iter_mut().enumerate().skip(1) {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..m {
            acc += diffs[m - k - 1] * w[k];
        }
        *o = acc * scale;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccalc::gamma::gamma;
    use std::f64::consts::PI;

    fn grid(n: usize, t: f64, f: impl Fn(f64) -> f64) -> (Vec<Complex64>, f64) {
        let h = t / n as f64;
        ((0..=n).map(|i| Complex64::new(f(i as f64 * h), 0.0)).collect(), h)
    }

    #[test]
    fn constant_gives_zero() {
        let (y, h) = grid(100, 1.0, |_| 4.2);
        let d = caputo_l1_numeric(&y, h, 0.5).unwrap();
        assert!(d.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn linear_is_exact_up_to_rounding() {
        // the scheme interpolates piecewise linearly, so t is reproduced
        let (y, h) = grid(400, 1.0, |t| t);
        let d = caputo_l1_numeric(&y, h, 0.5).unwrap();
        assert!((d[400].re - 2.0 / PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fitted_order_for_t_three_halves() {
        let exact = gamma(2.5).unwrap() / gamma(2.0).unwrap();
        let errs: Vec<f64> = [100usize, 200, 400, 800]
            .iter()
            .map(|&n| {
                let (y, h) = grid(n, 1.0, |t| t.powf(1.5));
                (caputo_l1_numeric(&y, h, 0.5).unwrap()[n].re - exact).abs()
            })
            .collect();
        let order = (errs[0] / errs[3]).log2() / 3.0;
        assert!(order >= 1.4, "order {order}, errs {errs:?}");
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(caputo_l1_numeric(&[Complex64::new(0.0, 0.0)], 0.1, 1.0).is_err());
        assert!(caputo_l1_numeric(&[Complex64::new(0.0, 0.0)], 0.1, 0.0).is_err());
    }
}
