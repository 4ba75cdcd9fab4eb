//! Forecast evaluation metrics.
//!
//! All functions take a [`ForecastSet`] of `M` series by `L` horizon steps.
//! Error metrics (MAPE, sMAPE, RMSE, SPEC) are averaged per series first and
//! then across series. MSTD and the void family look at the shape of the
//! forecast rather than its pointwise error.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

/// Actuals and forecasts aligned by series and horizon step.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastSet {
    actuals: Vec<Vec<f64>>,
    forecasts: Vec<Vec<f64>>,
}

impl ForecastSet {
    pub fn new(actuals: Vec<Vec<f64>>, forecasts: Vec<Vec<f64>>) -> Result<Self> {
        if actuals.len() != forecasts.len() {
            return Err(Error::Config(format!(
                "{} actual rows vs {} forecast rows",
                actuals.len(),
                forecasts.len()
            )));
        }
        let horizon = actuals.first().map_or(0, Vec::len);
        for (i, (y, f)) in actuals.iter().zip(&forecasts).enumerate() {
            if y.len() != horizon || f.len() != horizon {
                return Err(Error::Config(format!(
                    "series {i}: expected horizon {horizon}, got {} actuals / {} forecasts",
                    y.len(),
                    f.len()
                )));
            }
            if y.iter().chain(f).any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::InvalidSeries(format!(
                    "series {i}: values must be finite and non-negative"
                )));
            }
        }
        Ok(Self { actuals, forecasts })
    }

    /// Convenience constructor for a single series.
    pub fn single(actual: &[f64], forecast: &[f64]) -> Result<Self> {
        Self::new(vec![actual.to_vec()], vec![forecast.to_vec()])
    }

    pub fn series_count(&self) -> usize {
        self.actuals.len()
    }

    pub fn horizon(&self) -> usize {
        self.actuals.first().map_or(0, Vec::len)
    }

    pub fn actuals(&self) -> &[Vec<f64>] {
        &self.actuals
    }

    pub fn forecasts(&self) -> &[Vec<f64>] {
        &self.forecasts
    }

    fn rows(&self) -> impl Iterator<Item = (&[f64], &[f64])> {
        self.actuals
            .iter()
            .zip(&self.forecasts)
            .map(|(y, f)| (y.as_slice(), f.as_slice()))
    }
}

/// A series-averaged score together with the number of series its mask
/// excluded entirely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskedScore {
    pub value: f64,
    pub excluded: usize,
}

fn masked_mean<F>(fs: &ForecastSet, name: &str, term: F) -> Result<MaskedScore>
where
    F: Fn(f64, f64) -> Option<f64>,
{
    let mut total = 0.0;
    let mut used = 0usize;
    let mut excluded = 0usize;
    for (y, f) in fs.rows() {
        let mut sum = 0.0;
        let mut n = 0usize;
        for (&a, &p) in y.iter().zip(f) {
            if let Some(t) = term(a, p) {
                sum += t;
                n += 1;
            }
        }
        if n == 0 {
            excluded += 1;
        } else {
            total += sum / n as f64;
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::UndefinedMetric(format!(
            "{name}: every series has an empty mask"
        )));
    }
    Ok(MaskedScore {
        value: total / used as f64,
        excluded,
    })
}

/// MAPE restricted to steps with positive actual demand.
pub fn mape(fs: &ForecastSet) -> Result<f64> {
    mape_masked(fs).map(|s| s.value)
}

pub fn mape_masked(fs: &ForecastSet) -> Result<MaskedScore> {
    masked_mean(fs, "MAPE", |y, f| (y > 0.0).then(|| (y - f).abs() / y))
}

/// Symmetric MAPE over steps where actual or forecast is positive. Range [0, 2].
pub fn smape(fs: &ForecastSet) -> Result<f64> {
    smape_masked(fs).map(|s| s.value)
}

pub fn smape_masked(fs: &ForecastSet) -> Result<MaskedScore> {
    masked_mean(fs, "sMAPE", |y, f| (y + f > 0.0).then(|| 2.0 * (y - f).abs() / (y + f)))
}

/// How the squared error at horizon step `n` is normalised before the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RmseDivisor {
    /// Mean over the horizon (divide the sum by `L`).
    #[default]
    Horizon,
    /// Divide each squared error by its own 1-based step index.
    StepIndex,
}

pub fn rmse(fs: &ForecastSet) -> f64 {
    rmse_with(fs, RmseDivisor::Horizon)
}

pub fn rmse_with(fs: &ForecastSet, divisor: RmseDivisor) -> f64 {
    let m = fs.series_count();
    if m == 0 {
        return 0.0;
    }
    let l = fs.horizon() as f64;
    let total: f64 = fs
        .rows()
        .map(|(y, f)| {
            let inner: f64 = match divisor {
                RmseDivisor::Horizon => y.iter().zip(f).map(|(a, p)| (a - p).powi(2)).sum::<f64>() / l,
                RmseDivisor::StepIndex => y
                    .iter()
                    .zip(f)
                    .enumerate()
                    .map(|(n, (a, p))| (a - p).powi(2) / (n + 1) as f64)
                    .sum(),
            };
            inner.sqrt()
        })
        .sum();
    total / m as f64
}

/// Stock-keeping-oriented prediction error cost.
///
/// For every horizon step `n` and every earlier-or-equal step `m`, the cost
/// is `(n - m + 1) * max(0, α₁·min(y_m, Y_m − F_n), α₂·min(f_m, F_m − Y_n))`
/// where `Y` and `F` are cumulative sums. `α₁` weighs unmet demand and `α₂`
/// weighs surplus stock. The total is divided by `M·L`.
pub fn spec(fs: &ForecastSet, alpha1: f64, alpha2: f64) -> f64 {
    let m_count = fs.series_count();
    let l = fs.horizon();
    if m_count == 0 || l == 0 {
        return 0.0;
    }
    let mut total = 0.0;
    for (y, f) in fs.rows() {
        let cy = prefix_sums(y);
        let cf = prefix_sums(f);
        for n in 0..l {
            for m in 0..=n {
                let weight = (n - m + 1) as f64;
                let under = alpha1 * y[m].min(cy[m] - cf[n]);
                let over = alpha2 * f[m].min(cf[m] - cy[n]);
                total += weight * under.max(over).max(0.0);
            }
        }
    }
    total / (m_count * l) as f64
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Population standard deviation. Exactly zero for a constant vector.
pub fn population_std(v: &[f64]) -> f64 {
    if v.is_empty() || v.iter().all(|x| *x == v[0]) {
        return 0.0;
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Mean absolute gap between per-series forecast std and actual std.
pub fn mstd(fs: &ForecastSet) -> Result<f64> {
    if fs.horizon() < 2 {
        return Err(Error::UndefinedMetric("MSTD needs a horizon of at least 2".into()));
    }
    let m = fs.series_count();
    if m == 0 {
        return Err(Error::UndefinedMetric("MSTD of an empty forecast set".into()));
    }
    let total: f64 = fs
        .rows()
        .map(|(y, f)| (population_std(f) - population_std(y)).abs())
        .sum();
    Ok(total / m as f64)
}

/// Confusion counts with "void" (zero demand) as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VoidCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl VoidCounts {
    pub fn merge(self, other: VoidCounts) -> VoidCounts {
        VoidCounts {
            tp: self.tp + other.tp,
            fp: self.fp + other.fp,
            fn_: self.fn_ + other.fn_,
            tn: self.tn + other.tn,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// False when there are no actual voids, in which case recall reads 0.
    pub fn recall_defined(&self) -> bool {
        self.tp + self.fn_ > 0
    }
}

fn series_void_counts(y: &[f64], f: &[f64], tau: f64) -> VoidCounts {
    let mut c = VoidCounts::default();
    for (&a, &p) in y.iter().zip(f) {
        match (a == 0.0, p < tau) {
            (true, true) => c.tp += 1,
            (true, false) => c.fn_ += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
        }
    }
    c
}

/// Pooled void confusion over all `M·L` steps. A step is predicted void when
/// the forecast is below `tau`.
pub fn void_confusion(fs: &ForecastSet, tau: f64) -> VoidCounts {
    fs.rows()
        .map(|(y, f)| series_void_counts(y, f, tau))
        .fold(VoidCounts::default(), VoidCounts::merge)
}

pub fn v_recall(c: &VoidCounts) -> f64 {
    ratio(c.tp, c.tp + c.fn_)
}

pub fn v_precision(c: &VoidCounts) -> f64 {
    ratio(c.tp, c.tp + c.fp)
}

pub fn v_f1(c: &VoidCounts) -> f64 {
    f1(v_precision(c), v_recall(c))
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VoidPooling {
    /// Sum counts over every step of every series.
    #[default]
    Pooled,
    /// Score each series separately and average the scores.
    PerSeries,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoidScores {
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
    pub recall_defined: bool,
}

pub fn void_scores(fs: &ForecastSet, tau: f64, pooling: VoidPooling) -> VoidScores {
    let pooled = void_confusion(fs, tau);
    match pooling {
        VoidPooling::Pooled => VoidScores {
            recall: v_recall(&pooled),
            precision: v_precision(&pooled),
            f1: v_f1(&pooled),
            recall_defined: pooled.recall_defined(),
        },
        VoidPooling::PerSeries => {
            let m = fs.series_count().max(1) as f64;
            let (mut r, mut p, mut f) = (0.0, 0.0, 0.0);
            for (y, fc) in fs.rows() {
                let c = series_void_counts(y, fc, tau);
                r += v_recall(&c);
                p += v_precision(&c);
                f += v_f1(&c);
            }
            VoidScores {
                recall: r / m,
                precision: p / m,
                f1: f / m,
                recall_defined: pooled.recall_defined(),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub tau: f64,
    pub rmse_divisor: RmseDivisor,
    pub void_pooling: VoidPooling,
}

impl Default for MetricParams {
    fn default() -> Self {
        Self {
            alpha1: 0.5,
            alpha2: 0.5,
            tau: 0.5,
            rmse_divisor: RmseDivisor::Horizon,
            void_pooling: VoidPooling::Pooled,
        }
    }
}

/// A metric value, or the reason it could not be computed.
#[derive(Debug, Clone, PartialEq)]
pub enum Score {
    Value(f64),
    Absent(String),
}

impl Score {
    pub fn value(&self) -> Option<f64> {
        match self {
            Score::Value(v) => Some(*v),
            Score::Absent(_) => None,
        }
    }

    fn from_result(r: Result<f64>) -> Self {
        match r {
            Ok(v) => Score::Value(v),
            Err(e) => Score::Absent(e.to_string()),
        }
    }

    /// Shortest round-trip decimal, or `NA`.
    pub fn csv_cell(&self) -> String {
        match self {
            Score::Value(v) => format!("{v}"),
            Score::Absent(_) => "NA".to_owned(),
        }
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Score::Value(v) => write!(f, "{v:.3}"),
            Score::Absent(_) => f.write_str("n/a"),
        }
    }
}

/// Every metric for one forecast set.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub mape: Score,
    pub smape: Score,
    pub rmse: f64,
    pub spec: f64,
    pub mstd: Score,
    pub v_recall: f64,
    pub v_precision: f64,
    pub v_f1: f64,
    pub void: VoidCounts,
    pub v_recall_defined: bool,
    /// Series skipped by the MAPE mask (no positive actual).
    pub mape_excluded: usize,
    /// Series skipped by the sMAPE mask (actual and forecast all zero).
    pub smape_excluded: usize,
}

pub const CSV_COLUMNS: [&str; 13] = [
    "mape",
    "smape",
    "rmse",
    "spec",
    "mstd",
    "v_recall",
    "v_precision",
    "v_f1",
    "void_tp",
    "void_fp",
    "void_fn",
    "void_tn",
    "mape_excluded",
];

impl MetricReport {
    pub fn csv_header() -> String {
        CSV_COLUMNS.join(",")
    }

    pub fn csv_row(&self) -> String {
        [
            self.mape.csv_cell(),
            self.smape.csv_cell(),
            format!("{}", self.rmse),
            format!("{}", self.spec),
            self.mstd.csv_cell(),
            format!("{}", self.v_recall),
            format!("{}", self.v_precision),
            format!("{}", self.v_f1),
            self.void.tp.to_string(),
            self.void.fp.to_string(),
            self.void.fn_.to_string(),
            self.void.tn.to_string(),
            self.mape_excluded.to_string(),
        ]
        .join(",")
    }

    /// Human-readable block, one metric per line.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k:<12} {v}");
        };
        line("MSTD", self.mstd.to_string());
        line("V-Recall", format!("{:.3}", self.v_recall));
        line("V-Precision", format!("{:.3}", self.v_precision));
        line("V-F1", format!("{:.3}", self.v_f1));
        line("MAPE", self.mape.to_string());
        line("sMAPE", self.smape.to_string());
        line("RMSE", format!("{:.3}", self.rmse));
        line("SPEC", format!("{:.3}", self.spec));
        line(
            "void",
            format!(
                "tp={} fp={} fn={} tn={}",
                self.void.tp, self.void.fp, self.void.fn_, self.void.tn
            ),
        );
        if !self.v_recall_defined {
            line("note", "no actual voids; V-Recall reported as 0".into());
        }
        for (name, score) in [("MAPE", &self.mape), ("sMAPE", &self.smape), ("MSTD", &self.mstd)] {
            if let Score::Absent(why) = score {
                line("note", format!("{name} absent: {why}"));
            }
        }
        s
    }
}

pub fn evaluate_all(fs: &ForecastSet, params: &MetricParams) -> MetricReport {
    let mape_r = mape_masked(fs);
    let smape_r = smape_masked(fs);
    let void = void_confusion(fs, params.tau);
    let vs = void_scores(fs, params.tau, params.void_pooling);
    MetricReport {
        mape_excluded: mape_r.as_ref().map_or(fs.series_count(), |s| s.excluded),
        smape_excluded: smape_r.as_ref().map_or(fs.series_count(), |s| s.excluded),
        mape: Score::from_result(mape_r.map(|s| s.value)),
        smape: Score::from_result(smape_r.map(|s| s.value)),
        rmse: rmse_with(fs, params.rmse_divisor),
        spec: spec(fs, params.alpha1, params.alpha2),
        mstd: Score::from_result(mstd(fs)),
        v_recall: vs.recall,
        v_precision: vs.precision,
        v_f1: vs.f1,
        void,
        v_recall_defined: vs.recall_defined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(y: &[f64], f: &[f64]) -> ForecastSet {
        ForecastSet::single(y, f).unwrap()
    }

    /// Literal transcription of the triple sum, kept apart from the
    /// prefix-sum implementation above.
    fn spec_oracle(y: &[f64], f: &[f64], a1: f64, a2: f64) -> f64 {
        let l = y.len();
        let mut total = 0.0;
        for n in 1..=l {
            for m in 1..=n {
                let sum_y_m: f64 = (1..=m).map(|k| y[k - 1]).sum();
                let sum_f_n: f64 = (1..=n).map(|j| f[j - 1]).sum();
                let sum_f_m: f64 = (1..=m).map(|k| f[k - 1]).sum();
                let sum_y_n: f64 = (1..=n).map(|j| y[j - 1]).sum();
                let t1 = a1 * f64::min(y[m - 1], sum_y_m - sum_f_n);
                let t2 = a2 * f64::min(f[m - 1], sum_f_m - sum_y_n);
                total += (n - m + 1) as f64 * [0.0, t1, t2].into_iter().fold(f64::MIN, f64::max);
            }
        }
        total / l as f64
    }

    #[test]
    fn shape_checks() {
        assert!(ForecastSet::new(vec![vec![1.0]], vec![]).is_err());
        assert!(ForecastSet::new(vec![vec![1.0], vec![1.0, 2.0]], vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(ForecastSet::single(&[1.0], &[-1.0]).is_err());
    }

    #[test]
    fn mape_examples() {
        assert!((mape(&one(&[2., 0., 4.], &[1., 1., 2.])).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(mape(&one(&[2., 0., 4.], &[2., 0., 4.])).unwrap(), 0.0);
        assert_eq!(mape(&one(&[1., 2.], &[2., 4.])).unwrap(), 1.0);
        assert!(matches!(
            mape(&one(&[0., 0.], &[1., 1.])),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn mape_counts_excluded_series() {
        let fs = ForecastSet::new(vec![vec![0., 0.], vec![2., 2.]], vec![vec![1., 1.], vec![1., 1.]]).unwrap();
        let s = mape_masked(&fs).unwrap();
        assert_eq!(s.excluded, 1);
        assert!((s.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn smape_examples() {
        assert_eq!(smape(&one(&[2., 0.], &[0., 0.])).unwrap(), 2.0);
        assert_eq!(smape(&one(&[2., 0., 1.], &[2., 0., 1.])).unwrap(), 0.0);
        assert!((smape(&one(&[0., 3.], &[1., 3.])).unwrap() - 1.0).abs() < 1e-12);
        assert!(smape(&one(&[0., 0.], &[0., 0.])).is_err());
    }

    #[test]
    fn rmse_examples() {
        assert!((rmse(&one(&[3., 0.], &[0., 0.])) - (4.5f64).sqrt()).abs() < 1e-12);
        assert_eq!(rmse(&one(&[3., 1.], &[3., 1.])), 0.0);
        let fs = ForecastSet::new(vec![vec![1.0], vec![3.0]], vec![vec![0.0], vec![0.0]]).unwrap();
        assert_eq!(rmse(&fs), 2.0);
        // literal index reading: sqrt(9/1 + 0/2)
        assert_eq!(rmse_with(&one(&[3., 0.], &[0., 0.]), RmseDivisor::StepIndex), 3.0);
    }

    #[test]
    fn spec_examples() {
        assert_eq!(spec_oracle(&[1., 0.], &[0., 1.], 0.5, 0.5), 0.25);
        assert!((spec(&one(&[1., 0.], &[0., 1.]), 0.5, 0.5) - 0.25).abs() < 1e-12);
        assert_eq!(spec(&one(&[1., 0., 3.], &[1., 0., 3.]), 0.5, 0.5), 0.0);

        let y = [0., 0., 4.];
        let early = spec_oracle(&y, &[4., 0., 0.], 0.5, 0.5);
        let zero = spec_oracle(&y, &[0., 0., 0.], 0.5, 0.5);
        // early: n=1 -> 2, n=2 -> 2*2 (m=1 only), n=3 -> 0; sum 6 / 3
        assert!((early - 2.0).abs() < 1e-12);
        // zero: only n=3, m=3 contributes 0.5*4 = 2; 2 / 3
        assert!((zero - 2.0 / 3.0).abs() < 1e-12);
        assert!(early > zero);
        assert!((spec(&one(&y, &[4., 0., 0.]), 0.5, 0.5) - early).abs() < 1e-12);
        assert!((spec(&one(&y, &[0., 0., 0.]), 0.5, 0.5) - zero).abs() < 1e-12);
    }

    #[test]
    fn spec_matches_oracle_on_fixed_cases() {
        let cases: [(&[f64], &[f64]); 3] = [
            (&[0., 5., 0., 0., 2., 1.], &[1., 1., 1., 1., 1., 1.]),
            (&[3., 0., 0., 7.], &[0., 2., 6., 0.]),
            (&[0., 0., 0.], &[0.3, 0.0, 2.0]),
        ];
        for (y, f) in cases {
            for (a1, a2) in [(0.5, 0.5), (0.2, 0.8), (1.0, 0.0)] {
                let got = spec(&one(y, f), a1, a2);
                assert!((got - spec_oracle(y, f, a1, a2)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mstd_examples() {
        assert_eq!(mstd(&one(&[0., 4.], &[2., 2.])).unwrap(), 2.0);
        assert_eq!(mstd(&one(&[0., 4., 1.], &[0., 4., 1.])).unwrap(), 0.0);
        assert!(mstd(&one(&[1.], &[1.])).is_err());
        let fs = ForecastSet::new(vec![vec![0., 4.], vec![1., 3.]], vec![vec![0.1; 2], vec![7.0; 2]]).unwrap();
        assert_eq!(mstd(&fs).unwrap(), 1.5);
    }

    #[test]
    fn constant_std_is_exact_zero() {
        assert_eq!(population_std(&[0.1; 6]), 0.0);
        assert_eq!(population_std(&[]), 0.0);
    }

    #[test]
    fn void_examples() {
        let c = void_confusion(&one(&[0., 3., 0.], &[0.2, 2.7, 1.4]), 0.5);
        assert_eq!(
            c,
            VoidCounts {
                tp: 1,
                fp: 0,
                fn_: 1,
                tn: 1
            }
        );
        assert_eq!(v_recall(&c), 0.5);
        assert_eq!(v_precision(&c), 1.0);
        assert!((v_f1(&c) - 2.0 / 3.0).abs() < 1e-12);

        let c = void_confusion(&one(&[0., 3., 0.], &[0., 0., 0.]), 0.5);
        assert_eq!(c.fp, 1);
        assert_eq!(v_recall(&c), 1.0);

        let c = void_confusion(&one(&[1., 3.], &[0., 2.]), 0.5);
        assert!(!c.recall_defined());
        assert_eq!(v_recall(&c), 0.0);

        let c = void_confusion(&one(&[0., 3.], &[0., 3.]), 0.5);
        assert_eq!((v_recall(&c), v_f1(&c)), (1.0, 1.0));

        let c = VoidCounts {
            tp: 0,
            fp: 0,
            fn_: 4,
            tn: 2,
        };
        assert_eq!((v_recall(&c), v_f1(&c)), (0.0, 0.0));
    }

    #[test]
    fn per_series_void_pooling() {
        let fs = ForecastSet::new(vec![vec![0., 0.], vec![0., 1.]], vec![vec![0., 1.], vec![0., 1.]]).unwrap();
        let pooled = void_scores(&fs, 0.5, VoidPooling::Pooled);
        let per = void_scores(&fs, 0.5, VoidPooling::PerSeries);
        assert!((pooled.recall - 2.0 / 3.0).abs() < 1e-12);
        assert!((per.recall - 0.75).abs() < 1e-12);
    }

    #[test]
    fn report_marks_absent_metrics() {
        let r = evaluate_all(&one(&[0.], &[0.]), &MetricParams::default());
        assert!(matches!(r.mape, Score::Absent(_)));
        assert!(matches!(r.mstd, Score::Absent(_)));
        assert!(r.csv_row().starts_with("NA,NA,"));
        assert!(r.table().contains("MAPE absent"));
        assert_eq!(r.csv_row().split(',').count(), CSV_COLUMNS.len());
    }
}
