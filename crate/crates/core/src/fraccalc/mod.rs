//! Fractional power series, Caputo and Riemann-Liouville operators on them,
//! gamma evaluation, a grid-based L1 Caputo scheme and coefficient fitting.

pub mod extract;
pub mod gamma;
pub mod l1;
pub mod series;

pub use extract::{chebyshev_nodes, extract_coefficients, CoefficientFit, DEFAULT_COND_BOUND};
pub use gamma::{gamma, gamma_complex, gamma_ratio};
pub use l1::caputo_l1_numeric;
pub use series::{
    alpha_f64, caputo_series, parse_alpha, rl_integral_series, series_to_csv, Alpha,
    FracMonomialExponent, FracPowerSeries, SeriesRecord,
};
