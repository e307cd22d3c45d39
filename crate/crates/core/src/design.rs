//! Regression design matrices for ARDL and NSB-ARDL specifications.
//!
//! Column layout, left to right:
//!
//! * `const` (when the spec includes an intercept)
//! * `{y}.L1 .. {y}.Lp` for the dependent series `y`
//! * ARDL: one block `{x}.L0 .. {x}.Lq` per regressor
//! * NSB: all positive blocks `{x}_pos.L0 .. {x}_pos.Lq⁺`, then all negative
//!   blocks `{x}_neg.L0 .. {x}_neg.Lq⁻`
//!
//! A [`ModelFrame`] holds the full-length series each block lags over. NSB
//! partial sums are computed once on everything the frame is given, so a
//! design over a sub-range (a training window) sees cumulative sums that do
//! not restart at the window boundary.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};

use crate::decomposition::{partial_sums, NEG_SUFFIX, POS_SUFFIX};
use crate::error::{Error, Result};
use crate::series::{Dataset, Family, LagOrders, ModelSpec, TimeSeries};

#[derive(Debug, Clone)]
struct LagBlock {
    name: String,
    values: Vec<f64>,
    max_lag: usize,
}

/// Per-spec view of a dataset: the dependent series plus every regressor
/// block the spec lags over.
#[derive(Debug, Clone)]
pub struct ModelFrame {
    spec: ModelSpec,
    start_index: i64,
    dependent_name: String,
    y: Vec<f64>,
    blocks: Vec<LagBlock>,
}

impl ModelFrame {
    pub fn new(data: &Dataset, spec: &ModelSpec) -> Result<Self> {
        let regressors = spec
            .regressors
            .iter()
            .map(|name| data.regressor(name).map(|s| s.values().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_columns(data.dependent(), &regressors, spec)
    }

    /// Frame whose regressor columns may extend past the end of the dependent
    /// series (used for conditional forecasting). `regressors` follows
    /// `spec.regressors` order.
    pub(crate) fn from_columns(
        dependent: &TimeSeries,
        regressors: &[Vec<f64>],
        spec: &ModelSpec,
    ) -> Result<Self> {
        let y = dependent.complete_values()?.to_vec();
        let mut blocks = Vec::new();
        match spec.lags {
            LagOrders::Ardl { q } => {
                for (name, x) in spec.regressors.iter().zip(regressors) {
                    blocks.push(LagBlock { name: name.clone(), values: x.clone(), max_lag: q });
                }
            }
            LagOrders::Nsb { q_pos, q_neg } => {
                let sums: Vec<_> = regressors.iter().map(|x| partial_sums(x)).collect();
                for (name, (pos, _)) in spec.regressors.iter().zip(&sums) {
                    blocks.push(LagBlock {
                        name: format!("{name}{POS_SUFFIX}"),
                        values: pos.clone(),
                        max_lag: q_pos,
                    });
                }
                for (name, (_, neg)) in spec.regressors.iter().zip(sums) {
                    blocks.push(LagBlock {
                        name: format!("{name}{NEG_SUFFIX}"),
                        values: neg,
                        max_lag: q_neg,
                    });
                }
            }
        }
        let frame = Self {
            spec: spec.clone(),
            start_index: dependent.start_index(),
            dependent_name: dependent.name().to_string(),
            y,
            blocks,
        };
        let names = frame.column_names();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidSpec(format!("duplicate design column `{n}`")));
            }
        }
        Ok(frame)
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn start_index(&self) -> i64 {
        self.start_index
    }

    /// Length of the observed dependent series.
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Number of periods for which every regressor block is available.
    pub fn regressor_len(&self) -> usize {
        self.blocks.iter().map(|b| b.values.len()).min().unwrap_or(usize::MAX)
    }

    pub fn dependent(&self) -> &[f64] {
        &self.y
    }

    pub fn n_columns(&self) -> usize {
        self.spec.n_coefficients()
    }

    pub fn column_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.n_columns());
        if self.spec.include_intercept {
            names.push("const".to_string());
        }
        for i in 1..=self.spec.p {
            names.push(format!("{}.L{i}", self.dependent_name));
        }
        for b in &self.blocks {
            for j in 0..=b.max_lag {
                names.push(format!("{}.L{j}", b.name));
            }
        }
        names
    }

    /// Writes the design row for 0-based position `t`. Dependent lags are read
    /// from `y`, which may be the observed series extended by forecasts.
    pub(crate) fn fill_row(&self, t: usize, y: &[f64], out: &mut Vec<f64>) {
        out.clear();
        if self.spec.include_intercept {
            out.push(1.0);
        }
        for i in 1..=self.spec.p {
            out.push(y[t - i]);
        }
        for b in &self.blocks {
            for j in 0..=b.max_lag {
                out.push(b.values[t - j]);
            }
        }
    }

    /// Design over target positions `rows` (0-based offsets into the frame).
    pub fn design(&self, rows: Range<usize>) -> Result<DesignMatrix> {
        let k = self.n_columns();
        if rows.start < self.spec.max_lag() {
            return Err(Error::InvalidSpec(format!(
                "first estimation row {} precedes the maximum lag {}",
                rows.start,
                self.spec.max_lag()
            )));
        }
        if rows.end > self.len() || rows.end > self.regressor_len() || rows.is_empty() {
            return Err(Error::InsufficientData { rows: rows.len(), cols: k });
        }
        let n = rows.len();
        let mut data = DMatrix::zeros(n, k);
        let mut buf = Vec::with_capacity(k);
        for (r, t) in rows.clone().enumerate() {
            self.fill_row(t, &self.y, &mut buf);
            for (c, v) in buf.iter().enumerate() {
                data[(r, c)] = *v;
            }
        }
        Ok(DesignMatrix {
            spec: self.spec.clone(),
            data,
            target: DVector::from_iterator(n, rows.clone().map(|t| self.y[t])),
            column_names: self.column_names(),
            first_index: self.start_index + rows.start as i64,
        })
    }

    /// Design over every row the spec's lags allow.
    pub fn full_design(&self) -> Result<DesignMatrix> {
        self.design(self.spec.max_lag()..self.len())
    }
}

/// Dense regression matrix `Z` and target `y`, one row per effective observation.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub spec: ModelSpec,
    pub data: DMatrix<f64>,
    pub target: DVector<f64>,
    pub column_names: Vec<String>,
    /// Time index of the first row's target.
    pub first_index: i64,
}

impl DesignMatrix {
    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.column_names.iter().position(|n| n == name)?;
        Some(self.data.column(c).iter().copied().collect())
    }
}

pub fn build_ardl(data: &Dataset, spec: &ModelSpec) -> Result<DesignMatrix> {
    if spec.family() != Family::Ardl {
        return Err(Error::InvalidSpec(format!("{spec} is not an ARDL specification")));
    }
    ModelFrame::new(data, spec)?.full_design()
}

pub fn build_nsb(data: &Dataset, spec: &ModelSpec) -> Result<DesignMatrix> {
    if spec.family() != Family::Nsb {
        return Err(Error::InvalidSpec(format!("{spec} is not an NSB-ARDL specification")));
    }
    ModelFrame::new(data, spec)?.full_design()
}

/// Builds the design for whichever family `spec` names.
pub fn build(data: &Dataset, spec: &ModelSpec) -> Result<DesignMatrix> {
    ModelFrame::new(data, spec)?.full_design()
}
