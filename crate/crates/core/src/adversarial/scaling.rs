use crate::series::WindowPair;

/// Per-window scale: the mean non-zero value of the history, or 1 when the
/// history holds no demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleStats {
    pub scale: f64,
}

impl ScaleStats {
    pub fn from_history(history: &[f64]) -> Self {
        let (sum, n) = history
            .iter()
            .filter(|v| **v > 0.0)
            .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
        let scale = if n == 0 { 1.0 } else { sum / n as f64 };
        Self { scale }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        v.iter().map(|x| x / self.scale).collect()
    }
}

/// Divides history and target by the history scale.
pub fn scale_window(pair: &WindowPair, stats: &ScaleStats) -> WindowPair {
    WindowPair {
        series_id: pair.series_id.clone(),
        start: pair.start,
        history: stats.apply(&pair.history),
        target: stats.apply(&pair.target),
    }
}

pub fn unscale_forecast(v: &[f64], stats: &ScaleStats) -> Vec<f64> {
    v.iter().map(|x| x * stats.scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_examples() {
        assert_eq!(ScaleStats::from_history(&[0.0, 0.0]).scale, 1.0);
        assert_eq!(ScaleStats::from_history(&[0.0, 2.0, 4.0]).scale, 3.0);
    }

    #[test]
    fn round_trip() {
        let pair = WindowPair {
            series_id: "a".into(),
            start: 0,
            history: vec![0.0, 2.0, 4.0, 7.0],
            target: vec![1.0, 0.0, 13.0],
        };
        let stats = ScaleStats::from_history(&pair.history);
        let scaled = scale_window(&pair, &stats);
        let back = unscale_forecast(&scaled.target, &stats);
        for (a, b) in back.iter().zip(&pair.target) {
            // division then multiplication is exact to within one ulp
            assert!((a - b).abs() <= f64::EPSILON * b.abs());
        }
        let unit = ScaleStats { scale: 1.0 };
        assert_eq!(unscale_forecast(&unit.apply(&pair.target), &unit), pair.target);
    }
}
