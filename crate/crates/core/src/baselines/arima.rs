use super::nelder_mead::{nelder_mead, NelderMeadOptions};
use super::Baseline;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl Default for ArimaOrder {
    fn default() -> Self {
        Self { p: 1, d: 1, q: 1 }
    }
}

/// ARIMA(p, d, q) in mean form on the `d`-times differenced series `w`:
///
/// `w_t - mu = sum_i ar_i (w_{t-i} - mu) + sum_j ma_j e_{t-j} + e_t`
#[derive(Debug, Clone, PartialEq)]
pub struct ArimaModel {
    pub order: ArimaOrder,
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub intercept: f64,
    pub fitted_len: usize,
    /// Conditional sum of squares at the fitted parameters.
    pub css: f64,
}

/// Applies first differences `d` times.
pub fn difference(values: &[f64], d: usize) -> Vec<f64> {
    let mut w = values.to_vec();
    for _ in 0..d {
        w = w.windows(2).map(|p| p[1] - p[0]).collect();
    }
    w
}

fn residuals(w: &[f64], ar: &[f64], ma: &[f64], mu: f64) -> Vec<f64> {
    let start = ar.len().max(ma.len());
    let mut e = vec![0.0; w.len()];
    for t in start..w.len() {
        let mut pred = mu;
        for (i, phi) in ar.iter().enumerate() {
            pred += phi * (w[t - 1 - i] - mu);
        }
        for (j, theta) in ma.iter().enumerate() {
            pred += theta * e[t - 1 - j];
        }
        e[t] = w[t] - pred;
    }
    e
}

/// Conditional sum of squared one-step residuals; residuals before
/// `max(p, q)` are fixed at zero and excluded.
pub fn css_objective(w: &[f64], ar: &[f64], ma: &[f64], mu: f64) -> f64 {
    residuals(w, ar, ma, mu).iter().map(|e| e * e).sum()
}

pub fn arima_fit(series: &[f64], order: ArimaOrder) -> Result<ArimaModel> {
    let ArimaOrder { p, d, q } = order;
    if series.len() <= d + p + q + 1 {
        return Err(Error::Fit(format!(
            "ARIMA({p},{d},{q}) needs more than {} observations, got {}",
            d + p + q + 1,
            series.len()
        )));
    }
    let w = difference(series, d);
    let mu0 = w.iter().sum::<f64>() / w.len() as f64;
    let mut x0 = vec![0.0; p + q + 1];
    x0[p + q] = mu0;
    let objective = |x: &[f64]| css_objective(&w, &x[..p], &x[p..p + q], x[p + q]);
    let result = nelder_mead(objective, &x0, NelderMeadOptions::default())
        .map_err(|at| Error::Fit(format!("non-finite CSS objective at parameters {at:?}")))?;
    let x = result.x;
    Ok(ArimaModel {
        order,
        ar: x[..p].to_vec(),
        ma: x[p..p + q].to_vec(),
        intercept: x[p + q],
        fitted_len: series.len(),
        css: result.value,
    })
}

/// Recursive forecast with future shocks set to zero, integrated back `d`
/// times and clamped at zero.
pub fn arima_forecast(model: &ArimaModel, series: &[f64], horizon: usize) -> Vec<f64> {
    let d = model.order.d;
    if series.len() <= d {
        return vec![0.0; horizon];
    }
    let w = difference(series, d);
    let mut e = residuals(&w, &model.ar, &model.ma, model.intercept);
    let mut path = w.clone();
    let mu = model.intercept;
    for _ in 0..horizon {
        let t = path.len();
        let mut next = mu;
        for (i, phi) in model.ar.iter().enumerate() {
            if let Some(v) = t.checked_sub(i + 1).map(|k| path[k]) {
                next += phi * (v - mu);
            }
        }
        for (j, theta) in model.ma.iter().enumerate() {
            if let Some(v) = t.checked_sub(j + 1).map(|k| e[k]) {
                next += theta * v;
            }
        }
        path.push(next);
        e.push(0.0);
    }
    let mut out: Vec<f64> = path[w.len()..].to_vec();
    for level in (0..d).rev() {
        let last = *difference(series, level).last().expect("non-empty level");
        let mut acc = last;
        for v in &mut out {
            acc += *v;
            *v = acc;
        }
    }
    out.iter().map(|v| v.max(0.0)).collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Arima {
    pub order: ArimaOrder,
}

impl Baseline for Arima {
    fn name(&self) -> &str {
        "arima"
    }

    fn forecast(&self, history: &[f64], horizon: usize) -> Result<Vec<f64>> {
        let model = arima_fit(history, self.order)?;
        Ok(arima_forecast(&model, history, horizon))
    }
}
