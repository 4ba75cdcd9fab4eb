//! Forecaster/discriminator pairs and their adversarial training.
//!
//! Each side is either recursive (two LSTM layers) or non-recursive (four
//! linear layers), giving four configurations named `<forecaster>-<critic>`
//! with `R` for recursive and `NR` for non-recursive: `R-R`, `R-NR`, `NR-R`
//! and `NR-NR`. The discriminator only sees horizon windows. Setting the
//! adversarial weight to zero turns training into plain supervised
//! regression.

mod model;
mod network;
mod scaling;
mod train;

pub use model::{build_discriminator, build_forecaster, Discriminator, Forecaster};
pub use network::{
    CriticCache, EncoderCache, Mlp, MlpCache, NetCache, NetKind, Network, RecurrentCritic, RecurrentEncoder,
};
pub use scaling::{scale_window, unscale_forecast, ScaleStats};
pub use train::{
    discriminator_step, discriminator_update, forecaster_step, generator_loss, search_learning_rate, train,
    train_supervised, EpochRecord, ForecasterLoss, LrOutcome, StepLoss, TrainHistory, LR_GRID,
};

use crate::error::{Error, Result};

/// One cell of the forecaster × discriminator matrix plus training knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub forecaster: NetKind,
    pub discriminator: NetKind,
    /// History length.
    pub p: usize,
    /// Horizon length.
    pub l: usize,
    pub hidden: usize,
    pub lr_f: f64,
    pub lr_d: f64,
    pub lambda_sup: f64,
    pub lambda_adv: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            forecaster: NetKind::Mlp,
            discriminator: NetKind::Lstm,
            p: 28,
            l: 28,
            hidden: 64,
            lr_f: 1e-3,
            lr_d: 1e-3,
            lambda_sup: 1.0,
            lambda_adv: 0.1,
            epochs: 100,
            batch_size: 256,
            seed: 0,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("P", self.p),
            ("L", self.l),
            ("hidden", self.hidden),
            ("epochs", self.epochs),
            ("batch", self.batch_size),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("{name} must be at least 1")));
        }
        if !(self.lr_f > 0.0 && self.lr_d > 0.0) {
            return Err(Error::Config("learning rates must be positive".into()));
        }
        if !(self.lambda_sup >= 0.0 && self.lambda_adv >= 0.0) {
            return Err(Error::Config("loss weights must be non-negative".into()));
        }
        Ok(())
    }

    /// Matrix cell name such as `R-NR`.
    pub fn cell_name(&self) -> String {
        format!("{}-{}", self.forecaster.tag(), self.discriminator.tag())
    }
}
