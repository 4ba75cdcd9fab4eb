//! Forecasting and evaluation toolkit for irregular (intermittent and lumpy)
//! demand series.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`] holds the series type, Syntetos-Boylan classification and
//!   window construction.
//! * [`metrics`] implements the error metrics (MAPE, sMAPE, RMSE, SPEC) and the
//!   distribution-oriented ones (MSTD, void recall/precision/F1).
//! * [`baselines`] contains Croston, ADIDA and a CSS-fitted ARIMA.
//! * [`nn`] is a small deterministic neural-network core with explicit
//!   forward/backward pairs.
//! * [`adversarial`] builds forecaster/discriminator pairs and trains them.
//! * [`data`] reads and writes CSV and generates synthetic irregular series.
//! * [`bench`] ties everything together behind a method registry.

pub mod adversarial;
pub mod baselines;
pub mod bench;
pub mod config;
pub mod data;
pub mod error;
pub mod metrics;
pub mod nn;
pub mod series;

pub use error::{Error, Result};
pub use series::{SbcClass, SbcKind, TimeSeries, WindowPair};
