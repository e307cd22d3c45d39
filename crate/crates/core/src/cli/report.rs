//! Report files: CSV/JSON writers and the matching readers.
//!
//! Floats are written with 12 significant digits, in plain notation when the
//! decimal exponent lies in `[-5, 12)` and scientific notation otherwise.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::decomposition::DecomposedPair;
use crate::error::{Error, Result};
use crate::estimation::{ComparisonReport, FittedModel, Preferred};
use crate::forecasting::{ForecastResult, RollingReport};
use crate::montecarlo::McReport;
use crate::series::{Dataset, LagOrders, TimeSeries};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let rounded: f64 = sci.parse().expect("valid float");
        format!("{rounded}")
    } else {
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{exp}")
    }
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    Ok(csv::Writer::from_path(path)?)
}

/// `index, <columns...>` for a dataset; interchangeable with [`super::ingest`].
pub fn write_dataset(path: &Path, index_name: &str, data: &Dataset) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec![index_name.to_string()];
    header.extend(data.series().map(|s| s.name().to_string()));
    w.write_record(&header)?;
    for i in 0..data.len() {
        let mut row = vec![(data.start_index() + i as i64).to_string()];
        row.extend(data.series().map(|s| format_float(s.values()[i])));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `index, x, x_pos, x_neg`.
pub fn write_decomposed(path: &Path, index_name: &str, x: &TimeSeries, pair: &DecomposedPair) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record([index_name, "x", "x_pos", "x_neg"])?;
    for (i, (t, v)) in x.iter().enumerate() {
        w.write_record([
            t.to_string(),
            opt_float(v),
            format_float(pair.pos.values()[i]),
            format_float(pair.neg.values()[i]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn model_json(m: &FittedModel) -> Value {
    let named = |v: &[f64]| -> Value {
        let mut map = Map::new();
        for (n, x) in m.column_names.iter().zip(v) {
            map.insert(n.clone(), json_float(*x));
        }
        Value::Object(map)
    };
    let (q, q_pos, q_neg) = match m.spec.lags {
        LagOrders::Ardl { q } => (Some(q), None, None),
        LagOrders::Nsb { q_pos, q_neg } => (None, Some(q_pos), Some(q_neg)),
    };
    json!({
        "family": m.spec.family(),
        "spec": m.spec.to_string(),
        "p": m.spec.p,
        "q": q,
        "q_pos": q_pos,
        "q_neg": q_neg,
        "regressors": m.spec.regressors,
        "coefficients": named(&m.coefficients),
        "std_errors": named(&m.std_errors),
        "sigma2_hat": json_float(m.sigma2_hat),
        "loglik": json_float(m.loglik),
        "aic": json_float(m.aic),
        "bic": json_float(m.bic),
        "n_effective": m.n_effective,
        "first_index": m.first_index,
    })
}

fn json_float(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig(x)).map(Value::Number).unwrap_or(Value::Null)
}

/// `fit.json`: one entry per fitted model plus run metadata.
pub fn write_fit_json(
    path: &Path,
    models: &[FittedModel],
    comparison: Option<&ComparisonReport>,
    metadata: Value,
) -> Result<()> {
    let mut root = json!({
        "metadata": metadata,
        "models": models.iter().map(model_json).collect::<Vec<_>>(),
    });
    if let Some(c) = comparison {
        let lower = match c.lower_aic {
            Preferred::First => c.first_label.as_str(),
            Preferred::Second => c.second_label.as_str(),
            Preferred::Tie => "tie",
        };
        root["comparison"] = json!({ "lower_aic": lower, "n_effective": c.n_effective });
    }
    let text = serde_json::to_string_pretty(&root).map_err(|e| Error::Internal(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Parsed `fit.json` model entry.
#[derive(Debug, Clone, PartialEq)]
pub struct FitRecord {
    pub family: String,
    pub coefficients: Vec<(String, f64)>,
    pub sigma2_hat: f64,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_effective: usize,
}

pub fn read_fit_json(path: &Path) -> Result<Vec<FitRecord>> {
    let text = std::fs::read_to_string(path)?;
    let root: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let bad = || Error::Parse(format!("{} is not a fit report", path.display()));
    let num = |v: &Value, k: &str| v.get(k).and_then(Value::as_f64).ok_or_else(bad);
    root.get("models")
        .and_then(Value::as_array)
        .ok_or_else(bad)?
        .iter()
        .map(|m| {
            let coefficients = m
                .get("coefficients")
                .and_then(Value::as_object)
                .ok_or_else(bad)?
                .iter()
                .map(|(k, v)| v.as_f64().map(|x| (k.clone(), x)).ok_or_else(bad))
                .collect::<Result<_>>()?;
            Ok(FitRecord {
                family: m.get("family").and_then(Value::as_str).ok_or_else(bad)?.to_string(),
                coefficients,
                sigma2_hat: num(m, "sigma2_hat")?,
                loglik: num(m, "loglik")?,
                aic: num(m, "aic")?,
                bic: num(m, "bic")?,
                n_effective: m.get("n_effective").and_then(Value::as_u64).ok_or_else(bad)? as usize,
            })
        })
        .collect()
}

/// `term, <first>, <second>`: coefficient rows, then `aic` and `loglik`.
pub fn write_comparison(path: &Path, c: &ComparisonReport) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["term", c.first_label.as_str(), c.second_label.as_str()])?;
    for row in &c.coefficients {
        w.write_record([row.term.clone(), opt_float(row.first), opt_float(row.second)])?;
    }
    w.write_record(["aic".to_string(), format_float(c.aic.0), format_float(c.aic.1)])?;
    w.write_record(["loglik".to_string(), format_float(c.loglik.0), format_float(c.loglik.1)])?;
    w.flush()?;
    Ok(())
}

/// `index, prediction, actual, error`; actual and error are blank when unknown.
pub fn write_forecast(path: &Path, fc: &ForecastResult) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["index", "prediction", "actual", "error"])?;
    let errors = fc.errors();
    for (i, p) in fc.predictions.iter().enumerate() {
        let actual = fc.actuals.as_ref().map(|a| a[i]);
        let err = errors.as_ref().map(|e| e[i]);
        w.write_record([
            (fc.first_index + i as i64).to_string(),
            format_float(*p),
            opt_float(actual),
            opt_float(err),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `train_start, train_end, rmse, error` per window.
pub fn write_rolling(path: &Path, r: &RollingReport) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["train_start", "train_end", "rmse", "error"])?;
    for win in &r.windows {
        w.write_record([
            win.train_start.to_string(),
            win.train_end.to_string(),
            opt_float(win.rmse),
            win.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `mc_report.csv` (per-cell summary) and `mc_raw.csv` (one row per
/// family, lag and replication; blank RMSE marks a failed replication).
pub fn write_mc(report_path: &Path, raw_path: &Path, report: &McReport) -> Result<()> {
    let mut w = writer(report_path)?;
    w.write_record(["family", "lag", "mean_rmse", "std_rmse", "failures"])?;
    for c in &report.cells {
        w.write_record([
            c.family.to_string(),
            c.lag.to_string(),
            format_float(c.mean),
            format_float(c.std),
            c.failures.to_string(),
        ])?;
    }
    w.flush()?;

    let mut w = writer(raw_path)?;
    w.write_record(["family", "lag", "replication", "rmse"])?;
    for c in &report.cells {
        for (r, v) in c.rmse.iter().enumerate() {
            w.write_record([c.family.to_string(), c.lag.to_string(), r.to_string(), opt_float(*v)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// A CSV report read back as header plus string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let c = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[c].as_str()).collect())
    }

    /// Numeric column; blank cells read as `None`.
    pub fn floats(&self, name: &str) -> Result<Vec<Option<f64>>> {
        self.column(name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))?
            .into_iter()
            .map(|s| {
                if s.trim().is_empty() {
                    Ok(None)
                } else {
                    s.trim().parse().map(Some).map_err(|_| Error::Parse(format!("`{s}` is not a number")))
                }
            })
            .collect()
    }
}

pub fn read_table(path: &Path) -> Result<Table> {
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok(Table { headers, rows })
}

/// Summary row of `mc_report.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct McSummaryRow {
    pub family: String,
    pub lag: usize,
    pub mean_rmse: f64,
    pub std_rmse: f64,
    pub failures: usize,
}

pub fn read_mc_report(path: &Path) -> Result<Vec<McSummaryRow>> {
    let t = read_table(path)?;
    let int = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("`{s}` is not an integer")));
    let families = t.column("family").ok_or_else(|| Error::MissingColumn("family".into()))?;
    let lags = t.column("lag").ok_or_else(|| Error::MissingColumn("lag".into()))?;
    let failures = t.column("failures").ok_or_else(|| Error::MissingColumn("failures".into()))?;
    let means = t.floats("mean_rmse")?;
    let stds = t.floats("std_rmse")?;
    (0..t.rows.len())
        .map(|i| {
            Ok(McSummaryRow {
                family: families[i].to_string(),
                lag: int(lags[i])?,
                mean_rmse: means[i].unwrap_or(f64::NAN),
                std_rmse: stds[i].unwrap_or(f64::NAN),
                failures: int(failures[i])?,
            })
        })
        .collect()
}
