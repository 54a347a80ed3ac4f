//! Integral transforms: the half-line Fourier transform of the initial
//! datum, the finite-time transform `F`, and the inverse transforms that
//! produce the inhomogeneities of the boundary-value equations.

pub mod datum;
pub mod ftrans;

pub use datum::{InitialDatum, QuadratureConfig};
pub use ftrans::{f_transform_fn, f_transform_series, moment, moment_split, Direction, MomentSplit};
pub mod gdatum;

pub use gdatum::{g_datum, g_small_time_series, g_to_csv, removeqt_check, singular_terms, Bracket, GSample, SpectralLine};
