//! Extended Kolmogorov-Zurbenko (EKZ) filtering.
//!
//! The EKZ filter iterates a centered moving average whose window length may
//! be any real `m_r >= 1`. Odd integer lengths give the classic KZ filter and,
//! with one iteration, the simple moving average.
//!
//! ```
//! use ekz::{apply_direct, FilterSpec, TimeSeries};
//!
//! let x = TimeSeries::new((0..40).map(|t| (t as f64 * 1.3).sin()).collect()).unwrap();
//! let y = apply_direct(&x, &FilterSpec::new(4.0, 2).unwrap()).unwrap();
//! assert_eq!(y.len(), x.len());
//! assert_eq!(y.missing_count(), 2 * 4);
//! ```

pub mod cli;
pub mod error;
pub mod filter;
pub mod io;
pub mod recipe;
pub mod series;
pub mod simulate;
pub mod spectral;
pub mod window;

pub use error::{Error, Result};
pub use filter::{apply_direct, apply_iterated, esma};
pub use series::TimeSeries;
pub use spectral::{
    cutoff_half_power, etf_closed_form, etf_exact, log_periodogram, periodogram, Periodogram,
    TransferCurve,
};
pub use window::{decompose_window_length, ekz_coefficients, BoundaryPolicy, CoefficientWindow, FilterSpec};
