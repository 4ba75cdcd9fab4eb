use rayon::prelude::*;

use super::BenchConfig;
use crate::adversarial::{search_learning_rate, train, ModelConfig, NetKind, LR_GRID};
use crate::baselines::{Adida, Arima, Baseline, Croston};
use crate::error::{Error, Result};
use crate::nn::ParamStore;
use crate::series::WindowPair;

/// Everything a method sees: pooled training windows plus, per evaluated
/// series, the pre-test history and the test window.
#[derive(Debug, Clone)]
pub struct BenchData {
    pub p: usize,
    pub l: usize,
    pub ids: Vec<String>,
    /// Values before the test horizon, one entry per evaluated series.
    pub pre_test: Vec<Vec<f64>>,
    pub test: Vec<WindowPair>,
    pub train: Vec<WindowPair>,
    pub validation: Vec<WindowPair>,
}

#[derive(Debug, Clone)]
pub struct MethodOutput {
    /// One horizon per evaluated series, in [`BenchData::ids`] order.
    pub forecasts: Vec<Vec<f64>>,
    pub note: Option<String>,
    /// Trained forecaster weights for neural methods.
    pub params: Option<ParamStore>,
}

pub trait Method: Send + Sync {
    fn name(&self) -> &str;
    fn run(&self, data: &BenchData) -> Result<MethodOutput>;
}

/// Per-series statistical baseline fitted on the full pre-test history.
pub struct BaselineMethod {
    name: String,
    model: Box<dyn Baseline>,
}

impl BaselineMethod {
    pub fn new(name: impl Into<String>, model: Box<dyn Baseline>) -> Self {
        Self {
            name: name.into(),
            model,
        }
    }
}

impl Method for BaselineMethod {
    fn name(&self) -> &str {
        &self.name
    }

    fn run(&self, data: &BenchData) -> Result<MethodOutput> {
        let forecasts = data
            .pre_test
            .par_iter()
            .zip(&data.ids)
            .map(|(h, id)| {
                self.model
                    .forecast(h, data.l)
                    .map_err(|e| Error::Fit(format!("series {id}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MethodOutput {
            forecasts,
            note: None,
            params: None,
        })
    }
}

/// Global neural forecaster trained on pooled windows. With a zero
/// adversarial weight this is the supervised baseline.
pub struct NeuralMethod {
    name: String,
    model: ModelConfig,
    lr_search: bool,
}

impl NeuralMethod {
    pub fn new(name: impl Into<String>, model: ModelConfig, lr_search: bool) -> Self {
        Self {
            name: name.into(),
            model,
            lr_search,
        }
    }

    pub fn model(&self) -> &ModelConfig {
        &self.model
    }
}

impl Method for NeuralMethod {
    fn name(&self) -> &str {
        &self.name
    }

    fn run(&self, data: &BenchData) -> Result<MethodOutput> {
        let mut cfg = ModelConfig {
            p: data.p,
            l: data.l,
            ..self.model.clone()
        };
        if self.lr_search {
            let (lr, _) = search_learning_rate(&data.train, &data.validation, &cfg, &LR_GRID)?;
            cfg.lr_f = lr;
            cfg.lr_d = lr;
        }
        let (forecaster, history) = train(&data.train, &data.validation, &cfg)?;
        let histories: Vec<&[f64]> = data.test.iter().map(|w| w.history.as_slice()).collect();
        let forecasts = forecaster.forecast_batch(&histories);
        Ok(MethodOutput {
            forecasts,
            note: Some(format!(
                "best epoch {}/{}, lr {}",
                history.best_epoch + 1,
                cfg.epochs,
                cfg.lr_f
            )),
            params: Some(forecaster.params().clone()),
        })
    }
}

pub type MethodFactory = Box<dyn Fn(&BenchConfig) -> Box<dyn Method> + Send + Sync>;

/// Methods selectable by name. Lookup ignores ASCII case.
pub struct Registry {
    entries: Vec<(String, MethodFactory)>,
}

impl Registry {
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    /// Adds or replaces a method.
    pub fn register(&mut self, name: impl Into<String>, factory: MethodFactory) {
        let name = name.into();
        self.entries.retain(|(n, _)| !n.eq_ignore_ascii_case(&name));
        self.entries.push((name, factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    /// Canonical spelling of a registered name.
    pub fn resolve(&self, name: &str) -> Option<&str> {
        self.names().find(|n| n.eq_ignore_ascii_case(name.trim()))
    }

    pub fn create(&self, name: &str, config: &BenchConfig) -> Result<Box<dyn Method>> {
        self.entries
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name.trim()))
            .map(|(_, f)| f(config))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown method '{name}' (known: {})",
                    self.names().collect::<Vec<_>>().join(", ")
                ))
            })
    }
}

fn neural(name: &'static str, forecaster: NetKind, discriminator: NetKind, supervised: bool) -> MethodFactory {
    Box::new(move |c: &BenchConfig| {
        let model = ModelConfig {
            forecaster,
            discriminator,
            lambda_adv: if supervised { 0.0 } else { c.model.lambda_adv },
            ..c.model.clone()
        };
        Box::new(NeuralMethod::new(name, model, c.lr_search))
    })
}

impl Default for Registry {
    /// Croston, ADIDA, ARIMA, the two supervised networks, the four
    /// adversarial cells and `adv`, which takes both network kinds from the
    /// model settings.
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(
            "croston",
            Box::new(|c: &BenchConfig| {
                Box::new(BaselineMethod::new("croston", Box::new(Croston { alpha: c.smoothing })))
            }),
        );
        r.register(
            "adida",
            Box::new(|c: &BenchConfig| Box::new(BaselineMethod::new("adida", Box::new(Adida { alpha: c.smoothing })))),
        );
        r.register(
            "arima",
            Box::new(|c: &BenchConfig| {
                Box::new(BaselineMethod::new("arima", Box::new(Arima { order: c.arima_order })))
            }),
        );
        r.register("mlp", neural("mlp", NetKind::Mlp, NetKind::Mlp, true));
        // the critic is inert at zero adversarial weight; the cheap one suffices
        r.register("lstm", neural("lstm", NetKind::Lstm, NetKind::Mlp, true));
        for (name, f, d) in [
            ("R-R", NetKind::Lstm, NetKind::Lstm),
            ("R-NR", NetKind::Lstm, NetKind::Mlp),
            ("NR-R", NetKind::Mlp, NetKind::Lstm),
            ("NR-NR", NetKind::Mlp, NetKind::Mlp),
        ] {
            r.register(name, neural(name, f, d, false));
        }
        r.register(
            "adv",
            Box::new(|c: &BenchConfig| Box::new(NeuralMethod::new("adv", c.model.clone(), c.lr_search))),
        );
        r
    }
}

/// Default method list for a bench run.
pub const DEFAULT_METHODS: [&str; 9] = [
    "croston", "adida", "arima", "mlp", "lstm", "R-R", "R-NR", "NR-R", "NR-NR",
];
