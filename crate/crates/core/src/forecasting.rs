//! Conditional multi-step forecasts and out-of-sample RMSE evaluation.
//!
//! Forecasts are recursive in the dependent variable and conditional on the
//! regressor path: dependent lags past the forecast origin use earlier
//! predictions, regressor terms use realised (or supplied) values.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::ModelFrame;
use crate::error::{Error, Result};
use crate::estimation::{fit, FittedModel};
use crate::series::{Dataset, ModelSpec, TimeSeries};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastResult {
    pub horizon: usize,
    /// Time index of the first prediction.
    pub first_index: i64,
    pub predictions: Vec<f64>,
    pub actuals: Option<Vec<f64>>,
    pub rmse: Option<f64>,
}

impl ForecastResult {
    fn with_actuals(mut self, actuals: Vec<f64>) -> Result<Self> {
        self.rmse = if self.horizon == 0 { None } else { Some(rmse(&self.predictions, &actuals)?) };
        self.actuals = Some(actuals);
        Ok(self)
    }

    /// Forecast errors `prediction − actual`, when actuals are known.
    pub fn errors(&self) -> Option<Vec<f64>> {
        let a = self.actuals.as_ref()?;
        Some(self.predictions.iter().zip(a).map(|(p, a)| p - a).collect())
    }
}

pub fn rmse(predictions: &[f64], actuals: &[f64]) -> Result<f64> {
    if predictions.len() != actuals.len() {
        return Err(Error::LengthMismatch(predictions.len(), actuals.len()));
    }
    if predictions.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sse: f64 = predictions.iter().zip(actuals).map(|(p, a)| (p - a) * (p - a)).sum();
    Ok((sse / predictions.len() as f64).sqrt())
}

/// Forecasts `h` periods past `origin` (0-based frame position of the first
/// forecast) using observed dependent values before `origin`.
pub(crate) fn forecast_frame(
    model: &FittedModel,
    frame: &ModelFrame,
    origin: usize,
    h: usize,
) -> Result<ForecastResult> {
    if model.column_names != frame.column_names() {
        return Err(Error::InvalidSpec("model and frame columns differ".into()));
    }
    let p = model.spec.p;
    if origin < model.spec.max_lag() || origin > frame.len() {
        return Err(Error::InsufficientData { rows: origin, cols: p });
    }
    if origin + h > frame.regressor_len() {
        let name = model.spec.regressors.first().cloned().unwrap_or_default();
        return Err(Error::MissingFuture(name));
    }
    let mut y: Vec<f64> = frame.dependent()[..origin].to_vec();
    let mut row = Vec::with_capacity(model.coefficients.len());
    for t in origin..origin + h {
        frame.fill_row(t, &y, &mut row);
        let yhat = row.iter().zip(&model.coefficients).map(|(z, b)| z * b).sum();
        y.push(yhat);
    }
    Ok(ForecastResult {
        horizon: h,
        first_index: frame.start_index() + origin as i64,
        predictions: y.split_off(origin),
        actuals: None,
        rmse: None,
    })
}

/// Forecasts `h` periods past the end of `history`, conditional on the
/// supplied future regressor values. Each entry of `future_regressors` must
/// start right after `history` ends; NSB partial sums continue from the
/// history's cumulative totals.
pub fn forecast(
    model: &FittedModel,
    history: &Dataset,
    future_regressors: &[TimeSeries],
    h: usize,
) -> Result<ForecastResult> {
    if h == 0 {
        return Ok(ForecastResult {
            horizon: 0,
            first_index: history.end_index() + 1,
            predictions: Vec::new(),
            actuals: None,
            rmse: None,
        });
    }
    let first_future = history.end_index() + 1;
    let mut columns = Vec::with_capacity(model.spec.regressors.len());
    for name in &model.spec.regressors {
        let past = history.regressor(name)?;
        let future = future_regressors
            .iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::MissingFuture(name.clone()))?;
        let mut col = past.values().to_vec();
        for t in first_future..first_future + h as i64 {
            col.push(future.get(t).ok_or_else(|| Error::MissingFuture(name.clone()))?);
        }
        columns.push(col);
    }
    let frame = ModelFrame::from_columns(history.dependent(), &columns, &model.spec)?;
    forecast_frame(model, &frame, history.len(), h)
}

/// Fits on the first `train_n` observations and forecasts the next `h`,
/// with partial sums taken over the full sample.
pub fn fixed_split_eval(
    data: &Dataset,
    spec: &ModelSpec,
    train_n: usize,
    h: usize,
) -> Result<(FittedModel, ForecastResult)> {
    if train_n + h > data.len() {
        return Err(Error::InvalidConfig(format!(
            "train size {train_n} plus horizon {h} exceeds the {} available observations",
            data.len()
        )));
    }
    let frame = ModelFrame::new(data, spec)?;
    evaluate_window(&frame, 0, train_n, h)
}

fn evaluate_window(
    frame: &ModelFrame,
    start: usize,
    window: usize,
    h: usize,
) -> Result<(FittedModel, ForecastResult)> {
    let origin = start + window;
    let dm = frame.design(start + frame.spec().max_lag()..origin)?;
    let model = fit(&dm)?;
    let actuals = frame.dependent()[origin..origin + h].to_vec();
    let fc = forecast_frame(&model, frame, origin, h)?.with_actuals(actuals)?;
    Ok((model, fc))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowOutcome {
    /// Index of the first training observation.
    pub train_start: i64,
    /// Index of the last training observation.
    pub train_end: i64,
    pub rmse: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RollingReport {
    pub window_size: usize,
    pub horizon: usize,
    pub windows: Vec<WindowOutcome>,
    /// One entry per window, `None` where the fit or forecast failed.
    pub per_window_rmse: Vec<Option<f64>>,
    /// Mean over successful windows; `None` if every window failed.
    pub mean_rmse: Option<f64>,
    pub failures: usize,
}

/// Fixed-size training window sliding by one period; each window is fit and
/// forecast `h` steps ahead.
pub fn rolling_eval(data: &Dataset, spec: &ModelSpec, window: usize, h: usize) -> Result<RollingReport> {
    if h == 0 || window == 0 || data.len() < window + h {
        return Err(Error::InvalidConfig(format!(
            "rolling evaluation needs window + horizon <= {} with both positive (got {window} + {h})",
            data.len()
        )));
    }
    let frame = ModelFrame::new(data, spec)?;
    let n_windows = data.len() - window - h + 1;
    let windows: Vec<WindowOutcome> = (0..n_windows)
        .into_par_iter()
        .map(|s| {
            let (rmse, error) = match evaluate_window(&frame, s, window, h) {
                Ok((_, fc)) => (fc.rmse, None),
                Err(e) => (None, Some(e.to_string())),
            };
            WindowOutcome {
                train_start: data.start_index() + s as i64,
                train_end: data.start_index() + (s + window) as i64 - 1,
                rmse,
                error,
            }
        })
        .collect();
    let per_window_rmse: Vec<Option<f64>> = windows.iter().map(|w| w.rmse).collect();
    let ok: Vec<f64> = per_window_rmse.iter().flatten().copied().collect();
    let mean_rmse = (!ok.is_empty()).then(|| ok.iter().sum::<f64>() / ok.len() as f64);
    Ok(RollingReport {
        window_size: window,
        horizon: h,
        failures: n_windows - ok.len(),
        windows,
        per_window_rmse,
        mean_rmse,
    })
}
