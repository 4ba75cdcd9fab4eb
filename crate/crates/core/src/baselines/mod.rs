//! Statistical baselines for intermittent demand.
//!
//! All forecasters take a raw history slice and return a non-negative
//! forecast of the requested horizon. Croston and ADIDA produce flat
//! forecasts; ARIMA produces a recursive multi-step path.

mod adida;
mod arima;
mod croston;
mod nelder_mead;
mod ses;

pub use adida::{adida_forecast, Adida};
pub use arima::{arima_fit, arima_forecast, css_objective, difference, Arima, ArimaModel, ArimaOrder};
pub use croston::{croston_forecast, Croston};
pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use ses::SesState;

use crate::error::Result;

/// Smoothing weight used by Croston and ADIDA unless overridden.
pub const DEFAULT_ALPHA: f64 = 0.1;

/// A per-series statistical forecaster.
pub trait Baseline: Send + Sync {
    fn name(&self) -> &str;

    /// Fits on `history` and forecasts `horizon` steps ahead.
    fn forecast(&self, history: &[f64], horizon: usize) -> Result<Vec<f64>>;
}
