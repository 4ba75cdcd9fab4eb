use super::model::{build_discriminator, build_forecaster, Discriminator, Forecaster};
use super::network::Network;
use super::scaling::{scale_window, ScaleStats};
use super::ModelConfig;
use crate::error::{Error, Result};
use crate::metrics::{mape, ForecastSet};
use crate::nn::{mean_bce_with_logits, Adam, ParamStore, Rng, Tensor2};
use crate::series::WindowPair;

/// Learning rates tried by [`search_learning_rate`].
pub const LR_GRID: [f64; 3] = [1e-4, 1e-3, 1e-2];

// Independent random streams derived from the configured seed.
const STREAM_FORECASTER_INIT: u64 = 0;
const STREAM_DISCRIMINATOR_INIT: u64 = 1;
const STREAM_SHUFFLE: u64 = 2;

#[derive(Debug, Clone)]
pub struct ForecasterLoss {
    pub sup: f64,
    pub adv: f64,
    pub total: f64,
    /// Forecaster output on the batch before the update, detached.
    pub forecast: Tensor2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepLoss {
    pub sup: f64,
    pub adv: f64,
    pub total: f64,
    pub discriminator: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub sup: f64,
    pub adv: f64,
    pub forecaster: f64,
    pub discriminator: f64,
    pub val_mape: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
    /// Epoch with the lowest validation MAPE (the last epoch when MAPE was
    /// never defined).
    pub best_epoch: usize,
    pub steps: Vec<StepLoss>,
}

/// Combined forecaster loss `λ_sup · MSE(ŷ, y) + λ_adv · BCE(D(ŷ), 1)`.
///
/// Gradients are accumulated into `store` (the forecaster parameters). The
/// discriminator is only used to route gradients back to `ŷ`; its own
/// parameter gradients are cleared before returning.
pub fn generator_loss(
    net: &dyn Network,
    store: &mut ParamStore,
    disc: &mut Discriminator,
    x: &Tensor2,
    y: &Tensor2,
    lambda_sup: f64,
    lambda_adv: f64,
) -> ForecasterLoss {
    let (yhat, cache) = net.forward(store, x);
    let n = yhat.len() as f64;
    let sup = yhat
        .data()
        .iter()
        .zip(y.data())
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        / n;
    let dsup = yhat.zip_map(y, |a, b| 2.0 * (a - b) / n);

    let (logits, dcache) = disc.net.forward(&disc.store, &yhat);
    let (adv, dlogits) = mean_bce_with_logits(&logits, 1.0);
    let dadv = disc.net.backward(&mut disc.store, &dcache, &dlogits);
    disc.store.zero_grad();

    let dyhat = dsup.zip_map(&dadv, |s, a| lambda_sup * s + lambda_adv * a);
    net.backward(store, &cache, &dyhat);
    ForecasterLoss {
        sup,
        adv,
        total: lambda_sup * sup + lambda_adv * adv,
        forecast: yhat,
    }
}

/// One optimiser step on the forecaster with the discriminator frozen.
pub fn forecaster_step(
    forecaster: &mut Forecaster,
    disc: &mut Discriminator,
    opt: &mut Adam,
    x: &Tensor2,
    y: &Tensor2,
    lambda_sup: f64,
    lambda_adv: f64,
) -> Result<ForecasterLoss> {
    forecaster.store.zero_grad();
    let loss = generator_loss(
        forecaster.net.as_ref(),
        &mut forecaster.store,
        disc,
        x,
        y,
        lambda_sup,
        lambda_adv,
    );
    if !loss.total.is_finite() || !forecaster.store.is_finite() {
        return Err(Error::Training(format!(
            "non-finite forecaster loss (sup {}, adv {})",
            loss.sup, loss.adv
        )));
    }
    opt.step(&mut forecaster.store);
    Ok(loss)
}

/// `BCE(D(real), 1) + BCE(D(fake), 0)` followed by one optimiser step on the
/// discriminator. Returns the loss before the step.
pub fn discriminator_update(disc: &mut Discriminator, opt: &mut Adam, real: &Tensor2, fake: &Tensor2) -> Result<f64> {
    disc.store.zero_grad();
    let (zr, cr) = disc.net.forward(&disc.store, real);
    let (lr, gr) = mean_bce_with_logits(&zr, 1.0);
    disc.net.backward(&mut disc.store, &cr, &gr);
    let (zf, cf) = disc.net.forward(&disc.store, fake);
    let (lf, gf) = mean_bce_with_logits(&zf, 0.0);
    disc.net.backward(&mut disc.store, &cf, &gf);
    let loss = lr + lf;
    if !loss.is_finite() || !disc.store.is_finite() {
        return Err(Error::Training(format!("non-finite discriminator loss {loss}")));
    }
    opt.step(&mut disc.store);
    Ok(loss)
}

/// Discriminator step on a batch, with forecaster outputs detached.
pub fn discriminator_step(
    forecaster: &Forecaster,
    disc: &mut Discriminator,
    opt: &mut Adam,
    x: &Tensor2,
    y: &Tensor2,
) -> Result<f64> {
    let fake = forecaster.forward_scaled(x);
    discriminator_update(disc, opt, y, &fake)
}

/// Scaled training tensors, one window per row.
struct Prepared {
    x: Tensor2,
    y: Tensor2,
}

impl Prepared {
    fn new(pairs: &[WindowPair], p: usize, l: usize) -> Result<Self> {
        let mut xs = Vec::with_capacity(pairs.len() * p);
        let mut ys = Vec::with_capacity(pairs.len() * l);
        for pair in pairs {
            if pair.history.len() != p || pair.target.len() != l {
                return Err(Error::Config(format!(
                    "window of series {} has shape ({}, {}), expected ({p}, {l})",
                    pair.series_id,
                    pair.history.len(),
                    pair.target.len()
                )));
            }
            let scaled = scale_window(pair, &ScaleStats::from_history(&pair.history));
            xs.extend(scaled.history);
            ys.extend(scaled.target);
        }
        Ok(Self {
            x: Tensor2::new(pairs.len(), p, xs),
            y: Tensor2::new(pairs.len(), l, ys),
        })
    }

    fn len(&self) -> usize {
        self.x.rows()
    }

    fn gather(&self, idx: &[usize]) -> (Tensor2, Tensor2) {
        let pick = |t: &Tensor2| {
            let mut out = Tensor2::zeros(idx.len(), t.cols());
            for (r, &i) in idx.iter().enumerate() {
                out.row_mut(r).copy_from_slice(t.row(i));
            }
            out
        };
        (pick(&self.x), pick(&self.y))
    }
}

fn validation_mape(forecaster: &Forecaster, validation: &[WindowPair]) -> Option<f64> {
    if validation.is_empty() {
        return None;
    }
    let histories: Vec<&[f64]> = validation.iter().map(|w| w.history.as_slice()).collect();
    let forecasts = forecaster.forecast_batch(&histories);
    let actuals = validation.iter().map(|w| w.target.clone()).collect();
    let fs = ForecastSet::new(actuals, forecasts).ok()?;
    mape(&fs).ok()
}

/// Trains one forecaster/discriminator pair on pooled windows from every
/// series.
///
/// Each epoch walks a seeded shuffle of the training windows in batches;
/// per batch the forecaster is updated first, then the discriminator. After
/// every epoch the validation MAPE is computed and the forecaster weights of
/// the best epoch are returned.
pub fn train(
    train_pairs: &[WindowPair],
    validation: &[WindowPair],
    config: &ModelConfig,
) -> Result<(Forecaster, TrainHistory)> {
    config.validate()?;
    if train_pairs.is_empty() {
        return Err(Error::Config("empty training set".into()));
    }
    let data = Prepared::new(train_pairs, config.p, config.l)?;
    let mut forecaster = build_forecaster(config, &mut Rng::stream(config.seed, STREAM_FORECASTER_INIT));
    let mut disc = build_discriminator(config, &mut Rng::stream(config.seed, STREAM_DISCRIMINATOR_INIT));
    let mut shuffle = Rng::stream(config.seed, STREAM_SHUFFLE);
    let mut opt_f = Adam::new(&forecaster.store, config.lr_f);
    let mut opt_d = Adam::new(&disc.store, config.lr_d);

    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut history = TrainHistory {
        epochs: Vec::with_capacity(config.epochs),
        best_epoch: 0,
        steps: Vec::new(),
    };
    let mut best: Option<(f64, Vec<Tensor2>)> = None;

    for epoch in 0..config.epochs {
        shuffle.shuffle(&mut order);
        let mut sums = [0.0f64; 4];
        for (step, idx) in order.chunks(config.batch_size).enumerate() {
            let (xb, yb) = data.gather(idx);
            let fl = forecaster_step(
                &mut forecaster,
                &mut disc,
                &mut opt_f,
                &xb,
                &yb,
                config.lambda_sup,
                config.lambda_adv,
            )
            .map_err(|e| Error::Training(format!("epoch {epoch}, step {step}: {e}")))?;
            let dl = discriminator_update(&mut disc, &mut opt_d, &yb, &fl.forecast)
                .map_err(|e| Error::Training(format!("epoch {epoch}, step {step}: {e}")))?;
            let w = idx.len() as f64;
            sums[0] += w * fl.sup;
            sums[1] += w * fl.adv;
            sums[2] += w * fl.total;
            sums[3] += w * dl;
            history.steps.push(StepLoss {
                sup: fl.sup,
                adv: fl.adv,
                total: fl.total,
                discriminator: dl,
            });
        }
        let n = data.len() as f64;
        let val_mape = validation_mape(&forecaster, validation);
        history.epochs.push(EpochRecord {
            sup: sums[0] / n,
            adv: sums[1] / n,
            forecaster: sums[2] / n,
            discriminator: sums[3] / n,
            val_mape,
        });
        if let Some(m) = val_mape {
            if best.as_ref().is_none_or(|(b, _)| m < *b) {
                best = Some((m, forecaster.store.snapshot()));
                history.best_epoch = epoch;
            }
        }
    }
    match best {
        Some((_, weights)) => forecaster.store.restore(&weights),
        None => history.best_epoch = config.epochs - 1,
    }
    Ok((forecaster, history))
}

/// Plain supervised regression of the forecaster on `λ_sup · MSE`, with the
/// same initialisation and batch order as [`train`]. No discriminator is
/// built. Returns the final forecaster and the per-step losses.
pub fn train_supervised(train_pairs: &[WindowPair], config: &ModelConfig) -> Result<(Forecaster, Vec<f64>)> {
    config.validate()?;
    if train_pairs.is_empty() {
        return Err(Error::Config("empty training set".into()));
    }
    let data = Prepared::new(train_pairs, config.p, config.l)?;
    let mut forecaster = build_forecaster(config, &mut Rng::stream(config.seed, STREAM_FORECASTER_INIT));
    let mut shuffle = Rng::stream(config.seed, STREAM_SHUFFLE);
    let mut opt = Adam::new(&forecaster.store, config.lr_f);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut losses = Vec::new();
    for _ in 0..config.epochs {
        shuffle.shuffle(&mut order);
        for idx in order.chunks(config.batch_size) {
            let (xb, yb) = data.gather(idx);
            let (yhat, cache) = forecaster.net.forward(&forecaster.store, &xb);
            let n = yhat.len() as f64;
            let mut mse = 0.0;
            for (a, b) in yhat.data().iter().zip(yb.data()) {
                mse += (a - b) * (a - b);
            }
            mse /= n;
            let dyhat = yhat.zip_map(&yb, |a, b| config.lambda_sup * (2.0 * (a - b) / n));
            forecaster.store.zero_grad();
            forecaster.net.backward(&mut forecaster.store, &cache, &dyhat);
            opt.step(&mut forecaster.store);
            losses.push(config.lambda_sup * mse);
        }
    }
    Ok((forecaster, losses))
}

/// Learning rate paired with its best validation MAPE, if defined.
pub type LrOutcome = (f64, Option<f64>);

/// Trains once per learning rate (shared by both networks) and returns the
/// rate with the lowest best-epoch validation MAPE, plus every outcome.
pub fn search_learning_rate(
    train_pairs: &[WindowPair],
    validation: &[WindowPair],
    config: &ModelConfig,
    grid: &[f64],
) -> Result<(f64, Vec<LrOutcome>)> {
    let mut outcomes = Vec::with_capacity(grid.len());
    for &lr in grid {
        let cfg = ModelConfig {
            lr_f: lr,
            lr_d: lr,
            ..config.clone()
        };
        let (_, h) = train(train_pairs, validation, &cfg)?;
        outcomes.push((lr, h.epochs[h.best_epoch].val_mape));
    }
    let best = outcomes
        .iter()
        .filter_map(|(lr, m)| m.map(|m| (*lr, m)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map_or(config.lr_f, |(lr, _)| lr);
    Ok((best, outcomes))
}
