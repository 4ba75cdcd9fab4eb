use super::{Baseline, SesState, DEFAULT_ALPHA};
use crate::error::Result;

/// Classic Croston: smooth non-zero sizes and inter-demand intervals
/// separately and forecast their ratio. The first interval is the 1-based
/// index of the first demand.
pub fn croston_forecast(history: &[f64], alpha: f64, horizon: usize) -> Result<Vec<f64>> {
    let mut sizes = Vec::new();
    let mut intervals = Vec::new();
    let mut last = 0usize;
    for (t, &v) in history.iter().enumerate() {
        if v > 0.0 {
            sizes.push(v);
            intervals.push((t + 1 - last) as f64);
            last = t + 1;
        }
    }
    let (Some(z), Some(p)) = (SesState::over(alpha, &sizes)?, SesState::over(alpha, &intervals)?) else {
        SesState::new(alpha, 0.0)?;
        return Ok(vec![0.0; horizon]);
    };
    Ok(vec![z.level() / p.level(); horizon])
}

#[derive(Debug, Clone, Copy)]
pub struct Croston {
    pub alpha: f64,
}

impl Default for Croston {
    fn default() -> Self {
        Self { alpha: DEFAULT_ALPHA }
    }
}

impl Baseline for Croston {
    fn name(&self) -> &str {
        "croston"
    }

    fn forecast(&self, history: &[f64], horizon: usize) -> Result<Vec<f64>> {
        croston_forecast(history, self.alpha, horizon)
    }
}
