//! Estimation, forecasting and simulation for ARDL models and their
//! asymmetric partial-sum extension (NSB-ARDL).
//!
//! An NSB-ARDL model replaces each regressor `x` by its cumulative sums of
//! positive and negative changes, `x⁺` and `x⁻`, so that rises and falls in
//! `x` get separate coefficients:
//!
//! ```text
//! y_t = α + Σ_{i=1..p} φ_i y_{t−i} + Σ_{j=0..q⁺} θ⁺_j x⁺_{t−j} + Σ_{k=0..q⁻} θ⁻_k x⁻_{t−k} + ε_t
//! ```
//!
//! # Modules
//!
//! - [`series`] - time series, datasets and model specifications
//! - [`decomposition`] - partial-sum decomposition
//! - [`design`] - regression design matrices
//! - [`estimation`] - least squares, likelihood, AIC/BIC, lag search
//! - [`forecasting`] - conditional forecasts, fixed-split and rolling RMSE
//! - [`montecarlo`] - simulated DGP and replication campaigns
//! - [`cli`] - CSV ingestion, preprocessing, reports and the `asymdl` command
//!
//! # Example
//!
//! ```
//! use asymdl::{design, estimation, montecarlo, ModelSpec};
//!
//! let data = montecarlo::simulate_dgp(&montecarlo::DgpConfig::single_lag(), 1)?;
//! let spec = ModelSpec::nsb(1, 0, 0, vec!["x".into()])?;
//! let model = estimation::fit(&design::build_nsb(&data, &spec)?)?;
//! assert_eq!(model.column_names, ["const", "y.L1", "x_pos.L0", "x_neg.L0"]);
//! # Ok::<(), asymdl::Error>(())
//! ```

pub mod cli;
pub mod decomposition;
pub mod design;
pub mod error;
pub mod estimation;
pub mod forecasting;
pub mod montecarlo;
pub mod series;

pub use decomposition::{decompose, DecomposedPair};
pub use design::{build_ardl, build_nsb, DesignMatrix, ModelFrame};
pub use error::{Error, Result};
pub use estimation::{compare, fit, select_lags, select_lags_over, ComparisonReport, Criterion, FitOptions, FittedModel};
pub use forecasting::{fixed_split_eval, forecast, rmse, rolling_eval, ForecastResult, RollingReport};
pub use montecarlo::{run_campaign, simulate_dgp, DgpConfig, McConfig, McReport};
pub use series::{align, Dataset, Family, LagOrders, ModelSpec, TimeSeries};
