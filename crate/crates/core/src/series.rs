//! Demand series, Syntetos-Boylan classification and window construction.
//!
//! ADI uses the per-demand convention `T / nonzero_count` by default. The
//! alternative (mean gap between successive demands) is available through
//! [`AdiConvention::MeanGap`]. CV² uses the population standard deviation of
//! the non-zero sizes.

use std::fmt;

use crate::error::{Error, Result};

/// ADI threshold separating regular from irregular demand.
pub const ADI_THRESHOLD: f64 = 1.32;
/// CV² threshold separating intermittent from lumpy (and smooth from erratic).
pub const CV2_THRESHOLD: f64 = 0.49;

/// One demand series: an id plus a non-negative value per time step.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    id: String,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(id: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let id = id.into();
        if values.is_empty() {
            return Err(Error::InvalidSeries(format!("series {id:?} is empty")));
        }
        if let Some((t, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidSeries(format!(
                "series {id:?} has invalid value {v} at step {}",
                t + 1
            )));
        }
        Ok(Self { id, values })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|v| **v > 0.0).count()
    }

    /// Returns a copy with every value multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.id.clone(), self.values.iter().map(|v| v * factor).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdiConvention {
    /// `T / nonzero_count`.
    #[default]
    PerDemand,
    /// Mean distance between successive non-zero entries. Needs two demands.
    MeanGap,
}

/// Average demand interval under the default convention.
pub fn adi(series: &TimeSeries) -> Result<f64> {
    adi_with(series, AdiConvention::PerDemand)
}

pub fn adi_with(series: &TimeSeries, convention: AdiConvention) -> Result<f64> {
    let n = series.nonzero_count();
    if n == 0 {
        return Err(Error::UndefinedStatistic("ADI of an all-zero series"));
    }
    match convention {
        AdiConvention::PerDemand => Ok(series.len() as f64 / n as f64),
        AdiConvention::MeanGap => {
            if n < 2 {
                return Err(Error::UndefinedStatistic("mean-gap ADI needs two non-zero entries"));
            }
            let idx: Vec<usize> = series
                .values()
                .iter()
                .enumerate()
                .filter(|(_, v)| **v > 0.0)
                .map(|(i, _)| i)
                .collect();
            let span = (idx[idx.len() - 1] - idx[0]) as f64;
            Ok(span / (idx.len() - 1) as f64)
        }
    }
}

/// Squared coefficient of variation of the non-zero sizes.
pub fn cv2(series: &TimeSeries) -> Result<f64> {
    let nz: Vec<f64> = series.values().iter().copied().filter(|v| *v > 0.0).collect();
    if nz.len() < 2 {
        return Err(Error::UndefinedStatistic("CV² needs at least two non-zero entries"));
    }
    let n = nz.len() as f64;
    let mean = nz.iter().sum::<f64>() / n;
    let var = nz.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok(var / (mean * mean))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SbcKind {
    Smooth,
    Erratic,
    Intermittent,
    Lumpy,
}

impl SbcKind {
    pub const ALL: [SbcKind; 4] = [SbcKind::Smooth, SbcKind::Erratic, SbcKind::Intermittent, SbcKind::Lumpy];

    pub fn is_irregular(self) -> bool {
        matches!(self, SbcKind::Intermittent | SbcKind::Lumpy)
    }

    pub fn name(self) -> &'static str {
        match self {
            SbcKind::Smooth => "smooth",
            SbcKind::Erratic => "erratic",
            SbcKind::Intermittent => "intermittent",
            SbcKind::Lumpy => "lumpy",
        }
    }
}

impl fmt::Display for SbcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classification outcome with the statistics it was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbcClass {
    pub kind: SbcKind,
    pub adi: Option<f64>,
    pub cv2: Option<f64>,
}

/// Places a series on the ADI × CV² grid.
///
/// A single demand event has no size variability and is graded with CV² = 0.
/// An all-zero series is reported as intermittent with both statistics absent.
pub fn classify_sbc(series: &TimeSeries) -> SbcClass {
    classify_sbc_with(series, AdiConvention::PerDemand)
}

pub fn classify_sbc_with(series: &TimeSeries, convention: AdiConvention) -> SbcClass {
    let adi = adi_with(series, convention).ok().or_else(|| {
        // mean-gap is undefined for one demand; fall back to the per-demand value
        adi_with(series, AdiConvention::PerDemand).ok()
    });
    let cv2 = cv2(series).ok();
    let Some(a) = adi else {
        return SbcClass {
            kind: SbcKind::Intermittent,
            adi: None,
            cv2: None,
        };
    };
    let c = cv2.unwrap_or(0.0);
    let kind = match (a >= ADI_THRESHOLD, c >= CV2_THRESHOLD) {
        (false, false) => SbcKind::Smooth,
        (false, true) => SbcKind::Erratic,
        (true, false) => SbcKind::Intermittent,
        (true, true) => SbcKind::Lumpy,
    };
    SbcClass {
        kind,
        adi: Some(a),
        cv2,
    }
}

/// A (history, target) sample cut from one series.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowPair {
    pub series_id: String,
    /// Zero-based offset of `history[0]` in the parent series.
    pub start: usize,
    pub history: Vec<f64>,
    pub target: Vec<f64>,
}

impl WindowPair {
    fn cut(series: &TimeSeries, start: usize, p: usize, l: usize) -> Self {
        let v = series.values();
        Self {
            series_id: series.id().to_owned(),
            start,
            history: v[start..start + p].to_vec(),
            target: v[start + p..start + p + l].to_vec(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WindowSplit {
    pub train: Vec<WindowPair>,
    pub validation: Option<WindowPair>,
    pub test: Option<WindowPair>,
}

/// Partitions a series into train/validation/test windows.
///
/// The last `p + l` steps form the test pair and the window ending `l` steps
/// earlier forms the validation pair. Training windows are all stride-1
/// windows whose target ends before the validation target starts.
pub fn split_windows(series: &TimeSeries, p: usize, l: usize) -> Result<WindowSplit> {
    if p == 0 || l == 0 {
        return Err(Error::Config("window lengths P and L must be ≥ 1".into()));
    }
    let t = series.len();
    let span = p + l;
    let mut split = WindowSplit::default();
    if t < span {
        return Ok(split);
    }
    split.test = Some(WindowPair::cut(series, t - span, p, l));
    if t >= span + l {
        split.validation = Some(WindowPair::cut(series, t - span - l, p, l));
    }
    if t >= span + 2 * l {
        let last_start = t - 2 * l - span;
        split.train = (0..=last_start).map(|s| WindowPair::cut(series, s, p, l)).collect();
    }
    Ok(split)
}
