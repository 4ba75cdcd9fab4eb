use crate::error::{Error, Result};

/// Simple exponential smoothing level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SesState {
    alpha: f64,
    level: f64,
}

impl SesState {
    pub fn new(alpha: f64, level: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Config(format!("smoothing weight {alpha} not in (0, 1)")));
        }
        Ok(Self { alpha, level })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    /// `level <- alpha * obs + (1 - alpha) * level`.
    #[must_use]
    pub fn update(self, observation: f64) -> Self {
        Self {
            alpha: self.alpha,
            level: self.alpha * observation + (1.0 - self.alpha) * self.level,
        }
    }

    /// Smooths a whole sequence, initialising the level at its first value.
    pub fn over(alpha: f64, values: &[f64]) -> Result<Option<Self>> {
        let Some((&first, rest)) = values.split_first() else {
            return Ok(None);
        };
        let state = SesState::new(alpha, first)?;
        Ok(Some(rest.iter().fold(state, |s, v| s.update(*v))))
    }
}
