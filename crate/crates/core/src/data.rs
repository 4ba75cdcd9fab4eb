use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand_distr::{Distribution, LogNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::ForecastSet;
use crate::nn::Rng;
use crate::series::{adi, classify_sbc, cv2, SbcKind, TimeSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub series: Vec<TimeSeries>,
    /// History window length.
    pub p: usize,
    /// Forecast horizon.
    pub l: usize,
}

impl Dataset {
    pub fn new(name: impl Into<String>, series: Vec<TimeSeries>, p: usize, l: usize) -> Result<Self> {
        if p == 0 || l == 0 {
            return Err(Error::Config(format!("window lengths must be positive (P={p}, L={l})")));
        }
        Ok(Self {
            name: name.into(),
            series,
            p,
            l,
        })
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn stats(&self) -> DatasetStats {
        DatasetStats::of(&self.series)
    }
}

fn parse_err(path: &Path, row: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        row,
        col,
        msg: msg.into(),
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => parse_err(path, row, 0, format!("{other:?}")),
    }
}

fn parse_cell(path: &Path, row: usize, col: usize, cell: &str) -> Result<f64> {
    let v: f64 = cell
        .trim()
        .parse()
        .map_err(|_| parse_err(path, row, col, format!("'{cell}' is not a number")))?;
    if !v.is_finite() || v < 0.0 {
        return Err(parse_err(
            path,
            row,
            col,
            format!("'{cell}' is not a finite non-negative value"),
        ));
    }
    Ok(v)
}

/// Reads a wide CSV: header `id,t1,...,tT`, one series per row.
///
/// Rows and columns in errors are 1-based file positions (the header is
/// row 1).
pub fn load_csv(path: impl AsRef<Path>, p: usize, l: usize) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| csv_err(path, e))?,
        None => return Err(parse_err(path, 1, 1, "missing header")),
    };
    if header.get(0).map(str::trim) != Some("id") {
        return Err(parse_err(path, 1, 1, "first header column must be 'id'"));
    }
    let width = header.len();
    if width < 2 {
        return Err(parse_err(path, 1, 2, "header has no time columns"));
    }

    let mut series = Vec::new();
    let mut seen = HashMap::new();
    for (i, record) in records.enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| csv_err(path, e))?;
        if record.len() != width {
            return Err(parse_err(
                path,
                row,
                record.len().min(width) + 1,
                format!("expected {width} cells, found {}", record.len()),
            ));
        }
        let id = record[0].trim().to_string();
        if id.is_empty() {
            return Err(parse_err(path, row, 1, "empty series id"));
        }
        if let Some(prev) = seen.insert(id.clone(), row) {
            return Err(parse_err(
                path,
                row,
                1,
                format!("duplicate id '{id}' (first on row {prev})"),
            ));
        }
        let values = record
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, cell)| parse_cell(path, row, j + 1, cell))
            .collect::<Result<Vec<_>>>()?;
        series.push(TimeSeries::new(id, values)?);
    }
    let name = path
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    Dataset::new(name, series, p, l)
}

/// Writes the wide format read by [`load_csv`]. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn save_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let t = dataset.series.first().map_or(0, TimeSeries::len);
    if dataset.series.iter().any(|s| s.len() != t) {
        return Err(Error::InvalidSeries(
            "series lengths differ; wide format needs equal lengths".into(),
        ));
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    let mut header = vec!["id".to_string()];
    header.extend((1..=t).map(|k| format!("t{k}")));
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    for s in &dataset.series {
        let mut rec = vec![s.id().to_string()];
        rec.extend(s.values().iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Number of series in each SBC class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub smooth: usize,
    pub erratic: usize,
    pub intermittent: usize,
    pub lumpy: usize,
}

impl ClassCounts {
    pub fn of(series: &[TimeSeries]) -> Self {
        let mut c = Self::default();
        for s in series {
            *c.slot(classify_sbc(s).kind) += 1;
        }
        c
    }

    fn slot(&mut self, kind: SbcKind) -> &mut usize {
        match kind {
            SbcKind::Smooth => &mut self.smooth,
            SbcKind::Erratic => &mut self.erratic,
            SbcKind::Intermittent => &mut self.intermittent,
            SbcKind::Lumpy => &mut self.lumpy,
        }
    }

    pub fn get(&self, kind: SbcKind) -> usize {
        match kind {
            SbcKind::Smooth => self.smooth,
            SbcKind::Erratic => self.erratic,
            SbcKind::Intermittent => self.intermittent,
            SbcKind::Lumpy => self.lumpy,
        }
    }

    pub fn total(&self) -> usize {
        self.smooth + self.erratic + self.intermittent + self.lumpy
    }

    pub fn irregular(&self) -> usize {
        self.intermittent + self.lumpy
    }
}

/// Keeps intermittent and lumpy series. The counts describe the input.
pub fn filter_irregular(dataset: &Dataset) -> (Dataset, ClassCounts) {
    let counts = ClassCounts::of(&dataset.series);
    let kept = dataset
        .series
        .iter()
        .filter(|s| classify_sbc(s).kind.is_irregular())
        .cloned()
        .collect();
    let out = Dataset {
        name: dataset.name.clone(),
        series: kept,
        p: dataset.p,
        l: dataset.l,
    };
    (out, counts)
}

/// Dataset-level summary. Per-series statistics are averaged over the series
/// where they are defined; `pooled_cv2` treats every non-zero entry of every
/// series as one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetStats {
    pub m: usize,
    /// Length of the longest series.
    pub t: usize,
    pub mean_adi: Option<f64>,
    pub adi_defined: usize,
    pub mean_cv2: Option<f64>,
    pub cv2_defined: usize,
    pub pooled_cv2: Option<f64>,
    pub counts: ClassCounts,
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

impl DatasetStats {
    pub fn of(series: &[TimeSeries]) -> Self {
        let adis: Vec<f64> = series.iter().filter_map(|s| adi(s).ok()).collect();
        let cv2s: Vec<f64> = series.iter().filter_map(|s| cv2(s).ok()).collect();
        let pooled: Vec<f64> = series
            .iter()
            .flat_map(|s| s.values().iter().copied().filter(|v| *v > 0.0))
            .collect();
        let pooled_cv2 = (pooled.len() >= 2).then(|| {
            let n = pooled.len() as f64;
            let mu = pooled.iter().sum::<f64>() / n;
            pooled.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n / (mu * mu)
        });
        Self {
            m: series.len(),
            t: series.iter().map(TimeSeries::len).max().unwrap_or(0),
            mean_adi: mean(&adis),
            adi_defined: adis.len(),
            mean_cv2: mean(&cv2s),
            cv2_defined: cv2s.len(),
            pooled_cv2,
            counts: ClassCounts::of(series),
        }
    }
}

/// Distribution of non-zero demand sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizeDist {
    Constant(f64),
    /// Inclusive integer range.
    UniformInt(u64, u64),
    /// `exp(N(mu, sigma²))` rounded to the nearest integer and floored at 1.
    LogNormal {
        mu: f64,
        sigma: f64,
    },
}

impl SizeDist {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            SizeDist::Constant(c) => c.is_finite() && c > 0.0,
            SizeDist::UniformInt(a, b) => a >= 1 && a <= b,
            SizeDist::LogNormal { mu, sigma } => mu.is_finite() && sigma.is_finite() && sigma >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid size distribution {self}")))
        }
    }

    pub fn is_integer_valued(&self) -> bool {
        match *self {
            SizeDist::Constant(c) => c.fract() == 0.0,
            _ => true,
        }
    }
}

impl fmt::Display for SizeDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeDist::Constant(c) => write!(f, "const:{c}"),
            SizeDist::UniformInt(a, b) => write!(f, "uniform:{a}:{b}"),
            SizeDist::LogNormal { mu, sigma } => write!(f, "lognormal:{mu}:{sigma}"),
        }
    }
}

/// Parses `const:c`, `uniform:a:b` or `lognormal:mu:sigma`. A bare number is
/// read as a constant.
impl FromStr for SizeDist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse size distribution '{s}'"));
        let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
        let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
        let int = |t: &str| t.parse::<u64>().map_err(|_| bad());
        let dist = match parts.as_slice() {
            [c] => SizeDist::Constant(num(c)?),
            ["const" | "constant", c] => SizeDist::Constant(num(c)?),
            ["uniform", a, b] => SizeDist::UniformInt(int(a)?, int(b)?),
            ["lognormal", mu, sigma] => SizeDist::LogNormal {
                mu: num(mu)?,
                sigma: num(sigma)?,
            },
            _ => return Err(bad()),
        };
        dist.validate()?;
        Ok(dist)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub m: usize,
    pub t: usize,
    /// Per-step demand probability, in (0, 1].
    pub q: f64,
    pub size: SizeDist,
    pub seed: u64,
}

impl Default for GenSpec {
    fn default() -> Self {
        Self {
            m: 100,
            t: 182,
            q: 0.25,
            size: SizeDist::LogNormal { mu: 1.0, sigma: 1.2 },
            seed: 0,
        }
    }
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(Error::Config(format!("q must lie in (0, 1], got {}", self.q)));
        }
        if self.t == 0 {
            return Err(Error::Config("series length T must be positive".into()));
        }
        self.size.validate()
    }
}

fn gen_series(spec: &GenSpec, index: usize) -> Vec<f64> {
    let mut rng = Rng::stream(spec.seed, index as u64);
    let lognormal = match spec.size {
        SizeDist::LogNormal { mu, sigma } => Some(LogNormal::new(mu, sigma).expect("validated")),
        _ => None,
    };
    (0..spec.t)
        .map(|_| {
            if !rng.bernoulli(spec.q) {
                return 0.0;
            }
            match spec.size {
                SizeDist::Constant(c) => c,
                SizeDist::UniformInt(a, b) => (a + rng.below((b - a + 1) as usize) as u64) as f64,
                SizeDist::LogNormal { .. } => {
                    let x: f64 = lognormal.as_ref().unwrap().sample(rng.inner_mut());
                    x.round().max(1.0)
                }
            }
        })
        .collect()
}

/// Generates `m` independent renewal-style series. Series `i` draws from its
/// own stream `(seed, i)`, so output does not depend on thread scheduling.
pub fn gen_synthetic(spec: &GenSpec, p: usize, l: usize) -> Result<Dataset> {
    spec.validate()?;
    let series = (0..spec.m)
        .into_par_iter()
        .map(|i| TimeSeries::new(format!("syn{i}"), gen_series(spec, i)))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(
        format!("synthetic-q{}-{}-m{}-t{}", spec.q, spec.size, spec.m, spec.t),
        series,
        p,
        l,
    )
}

/// Writes long-format forecasts: `series_id,step,actual,forecast` with
/// 1-based steps.
pub fn save_forecasts<S: AsRef<str>>(ids: &[S], forecasts: &ForecastSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if ids.len() != forecasts.series_count() {
        return Err(Error::InvalidSeries(format!(
            "{} ids for {} forecast rows",
            ids.len(),
            forecasts.series_count()
        )));
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(["series_id", "step", "actual", "forecast"])
        .map_err(|e| csv_err(path, e))?;
    for ((id, y), f) in ids.iter().zip(forecasts.actuals()).zip(forecasts.forecasts()) {
        for (k, (a, b)) in y.iter().zip(f).enumerate() {
            w.write_record([id.as_ref(), &(k + 1).to_string(), &a.to_string(), &b.to_string()])
                .map_err(|e| csv_err(path, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a file written by [`save_forecasts`]. Series keep their order of
/// first appearance; steps must run 1..=L for each series.
pub fn load_forecasts(path: impl AsRef<Path>) -> Result<(Vec<String>, ForecastSet)> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let header = reader.headers().map_err(|e| csv_err(path, e))?;
    let expected = ["series_id", "step", "actual", "forecast"];
    if header.iter().map(str::trim).ne(expected) {
        return Err(parse_err(path, 1, 1, format!("header must be {}", expected.join(","))));
    }
    let mut ids: Vec<String> = Vec::new();
    let mut actuals: Vec<Vec<f64>> = Vec::new();
    let mut forecasts: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| csv_err(path, e))?;
        if record.len() != 4 {
            return Err(parse_err(path, row, record.len().min(4) + 1, "expected 4 cells"));
        }
        let id = record[0].trim();
        if ids.last().map(String::as_str) != Some(id) {
            if ids.iter().any(|s| s == id) {
                return Err(parse_err(
                    path,
                    row,
                    1,
                    format!("rows of series '{id}' are not contiguous"),
                ));
            }
            ids.push(id.to_string());
            actuals.push(Vec::new());
            forecasts.push(Vec::new());
        }
        let step: usize = record[1]
            .trim()
            .parse()
            .map_err(|_| parse_err(path, row, 2, format!("'{}' is not a step index", &record[1])))?;
        let ys = actuals.last_mut().unwrap();
        if step != ys.len() + 1 {
            return Err(parse_err(
                path,
                row,
                2,
                format!("expected step {}, found {step}", ys.len() + 1),
            ));
        }
        ys.push(parse_cell(path, row, 3, &record[2])?);
        forecasts
            .last_mut()
            .unwrap()
            .push(parse_cell(path, row, 4, &record[3])?);
    }
    let fs = ForecastSet::new(actuals, forecasts).map_err(|e| parse_err(path, 0, 0, e.to_string()))?;
    Ok((ids, fs))
}
