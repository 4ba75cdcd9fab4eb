use super::{Baseline, SesState, DEFAULT_ALPHA};
use crate::error::Result;
use crate::series::{adi, TimeSeries};

/// Aggregate-disaggregate forecast.
///
/// History is summed into trailing non-overlapping buckets of
/// `max(1, round(ADI))` steps (the oldest partial bucket is dropped), the
/// bucket totals are smoothed with SES, and the next-bucket level is spread
/// evenly over each horizon step.
pub fn adida_forecast(history: &[f64], alpha: f64, horizon: usize) -> Result<Vec<f64>> {
    SesState::new(alpha, 0.0)?;
    let series = TimeSeries::new("adida", history.to_vec())?;
    let Ok(a) = adi(&series) else {
        return Ok(vec![0.0; horizon]);
    };
    let bucket = (a.round() as usize).max(1);
    let skip = history.len() % bucket;
    let totals: Vec<f64> = history[skip..].chunks_exact(bucket).map(|c| c.iter().sum()).collect();
    let level = SesState::over(alpha, &totals)?.map_or(0.0, |s| s.level());
    Ok(vec![level / bucket as f64; horizon])
}

#[derive(Debug, Clone, Copy)]
pub struct Adida {
    pub alpha: f64,
}

impl Default for Adida {
    fn default() -> Self {
        Self { alpha: DEFAULT_ALPHA }
    }
}

impl Baseline for Adida {
    fn name(&self) -> &str {
        "adida"
    }

    fn forecast(&self, history: &[f64], horizon: usize) -> Result<Vec<f64>> {
        adida_forecast(history, self.alpha, horizon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_traced_example() {
        let f = adida_forecast(&[0., 2., 0., 4.], 0.1, 3).unwrap();
        for v in f {
            assert!((v - 1.1).abs() < 1e-12);
        }
    }

    #[test]
    fn regular_series_is_ses() {
        assert_eq!(adida_forecast(&[3., 3., 3., 3.], 0.1, 2).unwrap(), vec![3.0, 3.0]);
        let v = [1., 4., 2., 5., 3.];
        let ses = SesState::over(0.1, &v).unwrap().unwrap().level();
        assert_eq!(adida_forecast(&v, 0.1, 1).unwrap(), vec![ses]);
    }

    #[test]
    fn oldest_partial_bucket_dropped() {
        // adi 7/2 = 3.5 -> bucket 4; skip 3 leading steps -> single bucket [0,0,0,6]
        let f = adida_forecast(&[5., 0., 0., 0., 0., 0., 6.], 0.1, 1).unwrap();
        assert_eq!(f, vec![1.5]);
    }

    #[test]
    fn all_zero_history() {
        assert_eq!(adida_forecast(&[0.; 6], 0.1, 2).unwrap(), vec![0.0; 2]);
    }
}
