//! Shared domain types: time series, aligned datasets and model specifications.
//!
//! The time index is a plain integer (a year for annual data, `1..=T` for
//! simulated data). Series are equally spaced, so every position is
//! `start_index + offset`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named, equally spaced sequence of observations with optional missing values.
///
/// Missing positions hold `NaN` in [`values`](Self::values) and are flagged in
/// [`missing_mask`](Self::missing_mask).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    name: String,
    values: Vec<f64>,
    start_index: i64,
    missing: Vec<bool>,
}

impl TimeSeries {
    /// Builds a complete series. Every value must be finite.
    pub fn new(name: impl Into<String>, start_index: i64, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::TooShort { name, need: 1, got: 0 });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::MissingValue(name));
        }
        let missing = vec![false; values.len()];
        Ok(Self { name, values, start_index, missing })
    }

    /// Builds a series where `None` marks a missing observation.
    pub fn with_missing(
        name: impl Into<String>,
        start_index: i64,
        values: Vec<Option<f64>>,
    ) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::TooShort { name, need: 1, got: 0 });
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("series `{name}` has a non-finite value")));
        }
        let missing = values.iter().map(Option::is_none).collect();
        let values = values.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect();
        Ok(Self { name, values, start_index, missing })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start_index(&self) -> i64 {
        self.start_index
    }

    /// Index of the last observation (inclusive).
    pub fn end_index(&self) -> i64 {
        self.start_index + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn missing_mask(&self) -> &[bool] {
        &self.missing
    }

    pub fn has_missing(&self) -> bool {
        self.missing.iter().any(|&m| m)
    }

    /// The values, or an error naming the series if any are missing.
    pub fn complete_values(&self) -> Result<&[f64]> {
        if self.has_missing() {
            Err(Error::MissingValue(self.name.clone()))
        } else {
            Ok(&self.values)
        }
    }

    /// Value at a time index, `None` if out of range or missing.
    pub fn get(&self, index: i64) -> Option<f64> {
        let offset = usize::try_from(index - self.start_index).ok()?;
        match self.missing.get(offset) {
            Some(false) => Some(self.values[offset]),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Option<f64>)> + '_ {
        self.values
            .iter()
            .zip(&self.missing)
            .enumerate()
            .map(move |(i, (&v, &m))| (self.start_index + i as i64, (!m).then_some(v)))
    }

    /// Sub-series over the inclusive index range `[from, to]`.
    pub fn slice(&self, from: i64, to: i64) -> Result<Self> {
        if from < self.start_index || to > self.end_index() || from > to {
            return Err(Error::EmptyOverlap);
        }
        let a = (from - self.start_index) as usize;
        let b = (to - self.start_index) as usize + 1;
        Ok(Self {
            name: self.name.clone(),
            values: self.values[a..b].to_vec(),
            start_index: from,
            missing: self.missing[a..b].to_vec(),
        })
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Applies `f` to every observed value, keeping missing slots missing.
    pub fn map_values(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        let values = self
            .values
            .iter()
            .zip(&self.missing)
            .map(|(&v, &m)| if m { f64::NAN } else { f(v) })
            .collect();
        Self { values, ..self.clone() }
    }
}

/// A dependent series and its regressors on a common, complete index range.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dependent: TimeSeries,
    regressors: Vec<TimeSeries>,
}

impl Dataset {
    /// Wraps already-aligned, complete series.
    pub fn new(dependent: TimeSeries, regressors: Vec<TimeSeries>) -> Result<Self> {
        for s in std::iter::once(&dependent).chain(&regressors) {
            if s.start_index() != dependent.start_index() || s.len() != dependent.len() {
                return Err(Error::LengthMismatch(dependent.len(), s.len()));
            }
            if s.has_missing() {
                return Err(Error::MissingUnresolved(s.name().to_string()));
            }
        }
        Ok(Self { dependent, regressors })
    }

    pub fn dependent(&self) -> &TimeSeries {
        &self.dependent
    }

    pub fn regressors(&self) -> &[TimeSeries] {
        &self.regressors
    }

    pub fn regressor(&self, name: &str) -> Result<&TimeSeries> {
        self.regressors
            .iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::UnknownRegressor(name.to_string()))
    }

    pub fn regressor_names(&self) -> Vec<String> {
        self.regressors.iter().map(|s| s.name().to_string()).collect()
    }

    pub fn len(&self) -> usize {
        self.dependent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dependent.is_empty()
    }

    pub fn start_index(&self) -> i64 {
        self.dependent.start_index()
    }

    pub fn end_index(&self) -> i64 {
        self.dependent.end_index()
    }

    /// All series, dependent first.
    pub fn series(&self) -> impl Iterator<Item = &TimeSeries> {
        std::iter::once(&self.dependent).chain(&self.regressors)
    }

    /// The first `n` observations.
    pub fn head(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(Error::InsufficientData { rows: self.len(), cols: n });
        }
        let to = self.start_index() + n as i64 - 1;
        self.slice(self.start_index(), to)
    }

    /// Observations over the inclusive index range `[from, to]`.
    pub fn slice(&self, from: i64, to: i64) -> Result<Self> {
        Ok(Self {
            dependent: self.dependent.slice(from, to)?,
            regressors: self
                .regressors
                .iter()
                .map(|s| s.slice(from, to))
                .collect::<Result<_>>()?,
        })
    }
}

/// Trims series to their common index range. The first series becomes the
/// dependent variable; order is preserved.
pub fn align(series: &[TimeSeries]) -> Result<Dataset> {
    let first = series.first().ok_or(Error::EmptyInput)?;
    let from = series.iter().map(TimeSeries::start_index).max().unwrap_or(0);
    let to = series.iter().map(TimeSeries::end_index).min().unwrap_or(0);
    if from > to {
        return Err(Error::EmptyOverlap);
    }
    let mut trimmed = series.iter().map(|s| s.slice(from, to));
    let dependent = trimmed.next().expect("non-empty")?;
    let regressors = trimmed.collect::<Result<Vec<_>>>()?;
    debug_assert_eq!(dependent.name(), first.name());
    Dataset::new(dependent, regressors)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ardl,
    Nsb,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Ardl => "ardl",
            Family::Nsb => "nsb",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ardl" => Ok(Family::Ardl),
            "nsb" | "nsb-ardl" | "nsb_ardl" => Ok(Family::Nsb),
            other => Err(Error::InvalidSpec(format!("unknown model family `{other}`"))),
        }
    }
}

/// Distributed-lag orders; which variant is present fixes the model family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum LagOrders {
    Ardl { q: usize },
    Nsb { q_pos: usize, q_neg: usize },
}

/// Model family, lag orders and the regressors entering the equation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelSpec {
    pub p: usize,
    pub lags: LagOrders,
    pub regressors: Vec<String>,
    pub include_intercept: bool,
}

impl ModelSpec {
    /// ARDL(p, q) with the same lag order `q` for every regressor.
    pub fn ardl(p: usize, q: usize, regressors: Vec<String>) -> Result<Self> {
        Self::checked(p, LagOrders::Ardl { q }, regressors)
    }

    /// NSB-ARDL(p, q⁺, q⁻): each regressor enters through its positive and
    /// negative partial sums.
    pub fn nsb(p: usize, q_pos: usize, q_neg: usize, regressors: Vec<String>) -> Result<Self> {
        Self::checked(p, LagOrders::Nsb { q_pos, q_neg }, regressors)
    }

    /// Spec of `family` with all distributed-lag orders equal to `q`.
    pub fn symmetric(family: Family, p: usize, q: usize, regressors: Vec<String>) -> Result<Self> {
        match family {
            Family::Ardl => Self::ardl(p, q, regressors),
            Family::Nsb => Self::nsb(p, q, q, regressors),
        }
    }

    fn checked(p: usize, lags: LagOrders, regressors: Vec<String>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidSpec("autoregressive order p must be at least 1".into()));
        }
        for (i, r) in regressors.iter().enumerate() {
            if regressors[..i].contains(r) {
                return Err(Error::InvalidSpec(format!("regressor `{r}` listed twice")));
            }
        }
        Ok(Self { p, lags, regressors, include_intercept: true })
    }

    pub fn without_intercept(mut self) -> Self {
        self.include_intercept = false;
        self
    }

    pub fn family(&self) -> Family {
        match self.lags {
            LagOrders::Ardl { .. } => Family::Ardl,
            LagOrders::Nsb { .. } => Family::Nsb,
        }
    }

    /// Largest lag across the dependent and all regressor blocks.
    pub fn max_lag(&self) -> usize {
        match self.lags {
            LagOrders::Ardl { q } => self.p.max(q),
            LagOrders::Nsb { q_pos, q_neg } => self.p.max(q_pos).max(q_neg),
        }
    }

    /// Number of mean-equation coefficients (intercept included when present).
    pub fn n_coefficients(&self) -> usize {
        let m = self.regressors.len();
        let dist = match self.lags {
            LagOrders::Ardl { q } => (q + 1) * m,
            LagOrders::Nsb { q_pos, q_neg } => (q_pos + 1) * m + (q_neg + 1) * m,
        };
        usize::from(self.include_intercept) + self.p + dist
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lags {
            LagOrders::Ardl { q } => write!(f, "ARDL({}, {})", self.p, q),
            LagOrders::Nsb { q_pos, q_neg } => {
                write!(f, "NSB-ARDL({}, {}, {})", self.p, q_pos, q_neg)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(name: &str, start: i64, end: i64) -> TimeSeries {
        let values = (start..=end).map(|t| t as f64).collect();
        TimeSeries::new(name, start, values).unwrap()
    }

    #[test]
    fn align_intersects_ranges() {
        let d = align(&[ts("y", 1988, 2021), ts("x", 1990, 2021)]).unwrap();
        assert_eq!(d.start_index(), 1990);
        assert_eq!(d.end_index(), 2021);
        assert_eq!(d.len(), 32);
        assert_eq!(d.dependent().name(), "y");
        assert_eq!(d.dependent().values()[0], 1990.0);
    }

    #[test]
    fn align_identical_ranges_is_identity() {
        let y = ts("y", 1, 10);
        let x = ts("x", 1, 10);
        let d = align(&[y.clone(), x.clone()]).unwrap();
        assert_eq!(d.dependent(), &y);
        assert_eq!(d.regressors(), &[x]);
    }

    #[test]
    fn align_disjoint_ranges_fails() {
        let err = align(&[ts("y", 1980, 1990), ts("x", 2000, 2010)]).unwrap_err();
        assert_eq!(err, Error::EmptyOverlap);
    }

    #[test]
    fn align_rejects_missing_in_overlap() {
        let y = TimeSeries::with_missing("y", 1, vec![Some(1.0), None, Some(3.0)]).unwrap();
        let err = align(&[y, ts("x", 1, 3)]).unwrap_err();
        assert_eq!(err, Error::MissingUnresolved("y".into()));
    }

    #[test]
    fn align_ignores_missing_outside_overlap() {
        let y = TimeSeries::with_missing("y", 1, vec![None, Some(2.0), Some(3.0)]).unwrap();
        let d = align(&[y, ts("x", 2, 3)]).unwrap();
        assert_eq!(d.dependent().values(), &[2.0, 3.0]);
    }

    #[test]
    fn align_is_idempotent() {
        let d = align(&[ts("y", 3, 40), ts("x", 1, 30), ts("z", 5, 50)]).unwrap();
        let all: Vec<_> = d.series().cloned().collect();
        assert_eq!(align(&all).unwrap(), d);
    }

    #[test]
    fn spec_counts_and_lags() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let ardl = ModelSpec::ardl(1, 1, names.clone()).unwrap();
        assert_eq!(ardl.n_coefficients(), 1 + 1 + 2 * 3);
        let nsb = ModelSpec::nsb(1, 1, 1, names).unwrap();
        assert_eq!(nsb.n_coefficients(), 14);
        assert_eq!(nsb.family(), Family::Nsb);
        assert_eq!(ModelSpec::nsb(2, 0, 3, vec![]).unwrap().max_lag(), 3);
        assert!(ModelSpec::ardl(0, 1, vec![]).is_err());
    }

    #[test]
    fn non_finite_values_rejected() {
        assert!(TimeSeries::new("x", 0, vec![1.0, f64::NAN]).is_err());
        assert!(TimeSeries::new("x", 0, vec![]).is_err());
    }
}
