//! Benchmark harness: load or generate a dataset, run every selected method
//! on the same windows, score the forecasts and write reports.

mod methods;
mod pathology;
mod report;

pub use methods::{
    BaselineMethod, BenchData, Method, MethodFactory, MethodOutput, NeuralMethod, Registry, DEFAULT_METHODS,
};
pub use pathology::{run_pathology_suite, PathologyCheck, PathologyReport, PathologyVariant};
pub use report::{emit_report, write_forecasts, REPORT_FILES, TIMING_FILE};

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use crate::adversarial::{ModelConfig, NetKind};
use crate::baselines::{ArimaOrder, DEFAULT_ALPHA};
use crate::config::Config;
use crate::data::{filter_irregular, gen_synthetic, load_csv, Dataset, DatasetStats, GenSpec};
use crate::error::{Error, Result};
use crate::metrics::{evaluate_all, ForecastSet, MetricParams, MetricReport, RmseDivisor, VoidPooling};
use crate::series::split_windows;

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Csv(PathBuf),
    Generated(GenSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub source: DataSource,
    pub p: usize,
    pub l: usize,
    /// Keep only intermittent and lumpy series.
    pub filter: bool,
    pub methods: Vec<String>,
    pub metrics: MetricParams,
    /// Template for the neural methods; kinds and adversarial weight are set
    /// per method.
    pub model: ModelConfig,
    pub lr_search: bool,
    /// Smoothing weight for Croston and ADIDA.
    pub smoothing: f64,
    pub arima_order: ArimaOrder,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl BenchConfig {
    pub fn new(source: DataSource) -> Self {
        Self {
            source,
            p: 28,
            l: 28,
            filter: true,
            methods: DEFAULT_METHODS.iter().map(|s| s.to_string()).collect(),
            metrics: MetricParams::default(),
            model: ModelConfig::default(),
            lr_search: false,
            smoothing: DEFAULT_ALPHA,
            arima_order: ArimaOrder::default(),
            out: None,
            seed: 0,
        }
    }
}

/// Keys accepted in configuration files.
pub const CONFIG_KEYS: [&str; 33] = [
    "dataset.path",
    "dataset.p",
    "dataset.l",
    "dataset.filter",
    "gen.q",
    "gen.size",
    "gen.m",
    "gen.t",
    "gen.seed",
    "bench.methods",
    "bench.seed",
    "bench.out",
    "metrics.alpha1",
    "metrics.alpha2",
    "metrics.tau",
    "metrics.rmse_divisor",
    "metrics.void_pooling",
    "model.forecaster",
    "model.discriminator",
    "model.hidden",
    "train.lr",
    "train.lr_f",
    "train.lr_d",
    "train.lambda_sup",
    "train.lambda_adv",
    "train.epochs",
    "train.batch",
    "train.seed",
    "train.lr_search",
    "baseline.alpha",
    "baseline.arima_p",
    "baseline.arima_d",
    "baseline.arima_q",
];

fn net_kind(config: &Config, key: &str, default: NetKind) -> Result<NetKind> {
    match config.raw(key) {
        None => Ok(default),
        Some(v) => NetKind::parse(v).ok_or_else(|| Error::Config(format!("{key}: unknown network kind '{v}'"))),
    }
}

/// Metric parameters from the `metrics.*` keys, defaults elsewhere.
pub fn metric_params(config: &Config) -> Result<MetricParams> {
    let mut m = MetricParams::default();
    m.alpha1 = config.get_or("metrics.alpha1", m.alpha1)?;
    m.alpha2 = config.get_or("metrics.alpha2", m.alpha2)?;
    m.tau = config.get_or("metrics.tau", m.tau)?;
    m.rmse_divisor = match config.raw("metrics.rmse_divisor") {
        None | Some("horizon") => RmseDivisor::Horizon,
        Some("step") => RmseDivisor::StepIndex,
        Some(v) => {
            return Err(Error::Config(format!(
                "metrics.rmse_divisor: expected horizon or step, got '{v}'"
            )))
        }
    };
    m.void_pooling = match config.raw("metrics.void_pooling") {
        None | Some("pooled") => VoidPooling::Pooled,
        Some("per-series") => VoidPooling::PerSeries,
        Some(v) => {
            return Err(Error::Config(format!(
                "metrics.void_pooling: expected pooled or per-series, got '{v}'"
            )))
        }
    };
    if !(m.alpha1 >= 0.0 && m.alpha2 >= 0.0 && m.tau.is_finite()) {
        return Err(Error::Config(
            "metric parameters must be finite and non-negative".into(),
        ));
    }
    Ok(m)
}

impl BenchConfig {
    /// Builds a configuration from flat keys. The dataset comes from
    /// `dataset.path` or from `gen.*`, never both.
    pub fn from_config(config: &Config) -> Result<Self> {
        config.check_known(&CONFIG_KEYS)?;
        let seed = config.get_or("bench.seed", 0u64)?;
        let source = match (config.raw("dataset.path"), config.has_gen()) {
            (Some(_), true) => return Err(Error::Config("give either dataset.path or gen.*, not both".into())),
            (Some(path), false) => DataSource::Csv(PathBuf::from(path)),
            (None, true) => DataSource::Generated(config.gen_spec(GenSpec {
                seed,
                ..GenSpec::default()
            })?),
            (None, false) => return Err(Error::Config("no dataset: set dataset.path or a generator spec".into())),
        };
        let mut out = Self::new(source);
        out.seed = seed;
        out.p = config.get_or("dataset.p", out.p)?;
        out.l = config.get_or("dataset.l", out.l)?;
        out.filter = config.get_or("dataset.filter", out.filter)?;
        if let Some(list) = config.raw("bench.methods") {
            out.methods = list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
        }
        out.out = config.get("bench.out")?;
        out.metrics = metric_params(config)?;

        let model = &mut out.model;
        model.forecaster = net_kind(config, "model.forecaster", model.forecaster)?;
        model.discriminator = net_kind(config, "model.discriminator", model.discriminator)?;
        model.hidden = config.get_or("model.hidden", model.hidden)?;
        let lr = config.get::<f64>("train.lr")?;
        model.lr_f = config.get_or("train.lr_f", lr.unwrap_or(model.lr_f))?;
        model.lr_d = config.get_or("train.lr_d", lr.unwrap_or(model.lr_d))?;
        model.lambda_sup = config.get_or("train.lambda_sup", model.lambda_sup)?;
        model.lambda_adv = config.get_or("train.lambda_adv", model.lambda_adv)?;
        model.epochs = config.get_or("train.epochs", model.epochs)?;
        model.batch_size = config.get_or("train.batch", model.batch_size)?;
        model.seed = config.get_or("train.seed", seed)?;
        out.lr_search = config.get_or("train.lr_search", false)?;
        out.smoothing = config.get_or("baseline.alpha", out.smoothing)?;
        let d = ArimaOrder::default();
        out.arima_order = ArimaOrder {
            p: config.get_or("baseline.arima_p", d.p)?,
            d: config.get_or("baseline.arima_d", d.d)?,
            q: config.get_or("baseline.arima_q", d.q)?,
        };
        out.validate()?;
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.l == 0 {
            return Err(Error::Config("P and L must be positive".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods selected".into()));
        }
        let m = &self.metrics;
        if !(m.alpha1 >= 0.0 && m.alpha2 >= 0.0 && m.tau.is_finite()) {
            return Err(Error::Config(
                "metric parameters must be finite and non-negative".into(),
            ));
        }
        if !(self.smoothing > 0.0 && self.smoothing < 1.0) {
            return Err(Error::Config(format!(
                "baseline.alpha must lie in (0, 1), got {}",
                self.smoothing
            )));
        }
        ModelConfig {
            p: self.p,
            l: self.l,
            ..self.model.clone()
        }
        .validate()
    }

    pub fn load_dataset(&self) -> Result<Dataset> {
        match &self.source {
            DataSource::Csv(path) => load_csv(path, self.p, self.l),
            DataSource::Generated(spec) => gen_synthetic(spec, self.p, self.l),
        }
    }
}

/// Splits every series and pools the windows. Series too short for a test
/// window are skipped.
pub fn prepare(dataset: &Dataset) -> Result<BenchData> {
    let (p, l) = (dataset.p, dataset.l);
    let mut data = BenchData {
        p,
        l,
        ids: Vec::new(),
        pre_test: Vec::new(),
        test: Vec::new(),
        train: Vec::new(),
        validation: Vec::new(),
    };
    for s in &dataset.series {
        let split = split_windows(s, p, l)?;
        let Some(test) = split.test else { continue };
        data.ids.push(s.id().to_string());
        data.pre_test.push(s.values()[..s.len() - l].to_vec());
        data.test.push(test);
        data.train.extend(split.train);
        data.validation.extend(split.validation);
    }
    if data.test.is_empty() {
        return Err(Error::Config(format!(
            "dataset '{}' yields no test windows for P={p}, L={l}",
            dataset.name
        )));
    }
    Ok(data)
}

#[derive(Debug, Clone)]
pub struct MethodResult {
    pub output: MethodOutput,
    pub metrics: MetricReport,
}

#[derive(Debug, Clone)]
pub struct MethodRow {
    pub name: String,
    /// Scores, or the reason the method failed.
    pub outcome: std::result::Result<MethodResult, String>,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub dataset: String,
    pub p: usize,
    pub l: usize,
    /// Statistics before and after the irregular-only filter.
    pub input: DatasetStats,
    pub used: DatasetStats,
    pub filtered: bool,
    pub ids: Vec<String>,
    pub actuals: Vec<Vec<f64>>,
    pub rows: Vec<MethodRow>,
}

impl BenchReport {
    pub fn row(&self, name: &str) -> Option<&MethodRow> {
        self.rows.iter().find(|r| r.name.eq_ignore_ascii_case(name))
    }

    pub fn metrics(&self, name: &str) -> Option<&MetricReport> {
        self.row(name)?.outcome.as_ref().ok().map(|r| &r.metrics)
    }
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    run_bench_with(config, &Registry::default())
}

/// Runs every configured method on one prepared dataset. Methods run in
/// parallel; a failing method is recorded and the others continue.
pub fn run_bench_with(config: &BenchConfig, registry: &Registry) -> Result<BenchReport> {
    config.validate()?;
    let methods = config
        .methods
        .iter()
        .map(|name| registry.create(name, config))
        .collect::<Result<Vec<_>>>()?;
    let dataset = config.load_dataset()?;
    let input = dataset.stats();
    let used = if config.filter {
        filter_irregular(&dataset).0
    } else {
        dataset
    };
    let data = prepare(&used)?;
    let actuals: Vec<Vec<f64>> = data.test.iter().map(|w| w.target.clone()).collect();

    let rows = methods
        .par_iter()
        .map(|m| {
            let start = Instant::now();
            let outcome = m
                .run(&data)
                .and_then(|output| {
                    let fs = ForecastSet::new(actuals.clone(), output.forecasts.clone())?;
                    let metrics = evaluate_all(&fs, &config.metrics);
                    Ok(MethodResult { output, metrics })
                })
                .map_err(|e| e.to_string());
            MethodRow {
                name: m.name().to_string(),
                outcome,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect();

    Ok(BenchReport {
        dataset: used.name.clone(),
        p: config.p,
        l: config.l,
        input,
        used: used.stats(),
        filtered: config.filter,
        ids: data.ids,
        actuals,
        rows,
    })
}
