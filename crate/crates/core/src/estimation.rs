//! Least-squares estimation, Gaussian likelihood, information criteria and
//! lag-order search.
//!
//! Conditional on the initial lags, the Gaussian likelihood of a linear
//! dynamic regression is maximised by ordinary least squares. The solve goes
//! through a Householder QR of the column-equilibrated design; the rank test
//! uses singular values of the same matrix.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::{DesignMatrix, ModelFrame};
use crate::error::{Error, Result};
use crate::series::{Dataset, Family, ModelSpec};

pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-10;

/// Below this residual variance the log-likelihood is treated as undefined.
const MIN_VARIANCE: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Aic,
    Bic,
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aic" => Ok(Criterion::Aic),
            "bic" => Ok(Criterion::Bic),
            other => Err(Error::InvalidConfig(format!("unknown criterion `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub criterion: Criterion,
    pub max_p: usize,
    pub max_q: usize,
    pub rank_tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { criterion: Criterion::Aic, max_p: 3, max_q: 3, rank_tolerance: DEFAULT_RANK_TOLERANCE }
    }
}

impl FitOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_p == 0 {
            return Err(Error::InvalidConfig("max_p must be at least 1".into()));
        }
        if !(self.rank_tolerance > 0.0 && self.rank_tolerance < 1.0) {
            return Err(Error::InvalidConfig("rank_tolerance must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Estimated coefficients and fit diagnostics for one specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    pub spec: ModelSpec,
    pub column_names: Vec<String>,
    /// Design-matrix column order: intercept, dependent lags, regressor blocks.
    pub coefficients: Vec<f64>,
    /// Conventional OLS standard errors, scaled by `RSS / (n − k)`.
    pub std_errors: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Maximum-likelihood residual variance `RSS / n`.
    pub sigma2_hat: f64,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub n_effective: usize,
    /// Time index of the first effective observation.
    pub first_index: i64,
}

impl FittedModel {
    pub fn n_params(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        let i = self.column_names.iter().position(|n| n == name)?;
        Some(self.coefficients[i])
    }

    pub fn std_error(&self, name: &str) -> Option<f64> {
        let i = self.column_names.iter().position(|n| n == name)?;
        Some(self.std_errors[i])
    }

    pub fn criterion(&self, c: Criterion) -> f64 {
        match c {
            Criterion::Aic => self.aic,
            Criterion::Bic => self.bic,
        }
    }

    pub fn rss(&self) -> f64 {
        self.residuals.iter().map(|e| e * e).sum()
    }
}

/// Gaussian log-likelihood at the ML variance estimate.
pub fn gaussian_loglik(n: usize, sigma2_hat: f64) -> f64 {
    -(n as f64) / 2.0 * ((2.0 * PI).ln() + sigma2_hat.ln() + 1.0)
}

pub fn fit(dm: &DesignMatrix) -> Result<FittedModel> {
    fit_with_tolerance(dm, DEFAULT_RANK_TOLERANCE)
}

pub fn fit_with_tolerance(dm: &DesignMatrix, rank_tolerance: f64) -> Result<FittedModel> {
    let (n, k) = dm.data.shape();
    if n < k || n == 0 {
        return Err(Error::InsufficientData { rows: n, cols: k });
    }
    let solution = least_squares(&dm.data, &dm.target, rank_tolerance)?;
    let rss: f64 = solution.residuals.iter().map(|e| e * e).sum();
    let sigma2_hat = rss / n as f64;
    if sigma2_hat.is_nan() || sigma2_hat < MIN_VARIANCE {
        return Err(Error::DegenerateVariance);
    }
    let loglik = gaussian_loglik(n, sigma2_hat);
    let kf = k as f64;
    let s2 = if n > k { rss / (n - k) as f64 } else { f64::NAN };
    let std_errors = solution.unscaled_variances.iter().map(|v| (s2 * v).sqrt()).collect();
    Ok(FittedModel {
        spec: dm.spec.clone(),
        column_names: dm.column_names.clone(),
        coefficients: solution.coefficients.iter().copied().collect(),
        std_errors,
        residuals: solution.residuals.iter().copied().collect(),
        sigma2_hat,
        loglik,
        aic: 2.0 * kf - 2.0 * loglik,
        bic: kf * (n as f64).ln() - 2.0 * loglik,
        n_effective: n,
        first_index: dm.first_index,
    })
}

struct LsSolution {
    coefficients: DVector<f64>,
    residuals: DVector<f64>,
    /// Diagonal of `(ZᵀZ)⁻¹`.
    unscaled_variances: Vec<f64>,
}

fn least_squares(z: &DMatrix<f64>, y: &DVector<f64>, rank_tolerance: f64) -> Result<LsSolution> {
    let k = z.ncols();
    let norms: Vec<f64> = z.column_iter().map(|c| c.norm()).collect();
    let mut scaled = z.clone();
    for (j, &nj) in norms.iter().enumerate() {
        if nj == 0.0 {
            return Err(Error::SingularDesign { rank: k - 1, cols: k });
        }
        scaled.column_mut(j).unscale_mut(nj);
    }

    let sv = scaled.singular_values();
    let smax = sv.max();
    let rank = sv.iter().filter(|&&s| s > rank_tolerance * smax).count();
    if rank < k {
        return Err(Error::SingularDesign { rank, cols: k });
    }

    let qr = scaled.qr();
    let q = qr.q();
    let r = qr.r();
    let qty = q.transpose() * y;
    let scaled_coef = r
        .solve_upper_triangular(&qty)
        .ok_or(Error::SingularDesign { rank, cols: k })?;
    let coefficients =
        DVector::from_iterator(k, scaled_coef.iter().zip(&norms).map(|(b, nj)| b / nj));
    let residuals = y - z * &coefficients;

    // (ZᵀZ)⁻¹ = D⁻¹ R⁻¹ R⁻ᵀ D⁻¹ with D the column norms.
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or(Error::SingularDesign { rank, cols: k })?;
    let unscaled_variances = (0..k)
        .map(|j| r_inv.row(j).norm_squared() / (norms[j] * norms[j]))
        .collect();
    Ok(LsSolution { coefficients, residuals, unscaled_variances })
}

/// Fits every `(p, q)` on the grid `[1..=max_p] × [0..=max_q]` for `family`
/// (NSB uses `q⁺ = q⁻ = q`) over all regressors in `data`, on the sample
/// trimmed by the largest candidate lag, and returns the candidate that
/// minimises the criterion.
pub fn select_lags(data: &Dataset, family: Family, opts: &FitOptions) -> Result<(ModelSpec, FittedModel)> {
    select_lags_over(data, &[family], opts)
}

/// Lag search across several families at once. Ties on the criterion go to
/// fewer parameters, then smaller `p`, then ARDL before NSB.
pub fn select_lags_over(
    data: &Dataset,
    families: &[Family],
    opts: &FitOptions,
) -> Result<(ModelSpec, FittedModel)> {
    opts.validate()?;
    let regressors = data.regressor_names();
    let trim = opts.max_p.max(opts.max_q);
    if data.len() <= trim {
        return Err(Error::InsufficientData { rows: 0, cols: trim });
    }
    let mut candidates = Vec::new();
    for &family in families {
        for p in 1..=opts.max_p {
            for q in 0..=opts.max_q {
                candidates.push(ModelSpec::symmetric(family, p, q, regressors.clone())?);
            }
        }
    }
    let fitted: Vec<Option<FittedModel>> = candidates
        .par_iter()
        .map(|spec| {
            let frame = ModelFrame::new(data, spec).ok()?;
            let dm = frame.design(trim..frame.len()).ok()?;
            fit_with_tolerance(&dm, opts.rank_tolerance).ok()
        })
        .collect();

    fitted
        .into_iter()
        .flatten()
        .min_by(|a, b| candidate_order(a, b, opts.criterion))
        .map(|m| (m.spec.clone(), m))
        .ok_or(Error::NoFeasibleSpec)
}

fn candidate_order(a: &FittedModel, b: &FittedModel, c: Criterion) -> Ordering {
    a.criterion(c)
        .total_cmp(&b.criterion(c))
        .then(a.n_params().cmp(&b.n_params()))
        .then(a.spec.p.cmp(&b.spec.p))
        .then(a.spec.family().cmp(&b.spec.family()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preferred {
    First,
    Second,
    Tie,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub term: String,
    pub first: Option<f64>,
    pub second: Option<f64>,
}

/// Side-by-side coefficients and shared diagnostics of two models fit on the
/// same sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub first_label: String,
    pub second_label: String,
    pub coefficients: Vec<ComparisonRow>,
    pub aic: (f64, f64),
    pub loglik: (f64, f64),
    pub n_effective: usize,
    pub lower_aic: Preferred,
}

pub fn compare(a: &FittedModel, b: &FittedModel) -> Result<ComparisonReport> {
    if a.n_effective != b.n_effective || a.first_index != b.first_index {
        return Err(Error::SampleMismatch(a.n_effective, b.n_effective));
    }
    let mut terms: Vec<&String> = a.column_names.iter().collect();
    for n in &b.column_names {
        if !terms.contains(&n) {
            terms.push(n);
        }
    }
    let coefficients = terms
        .into_iter()
        .map(|t| ComparisonRow { term: t.clone(), first: a.coefficient(t), second: b.coefficient(t) })
        .collect();
    let lower_aic = match a.aic.total_cmp(&b.aic) {
        Ordering::Less => Preferred::First,
        Ordering::Greater => Preferred::Second,
        Ordering::Equal => Preferred::Tie,
    };
    Ok(ComparisonReport {
        first_label: a.spec.family().to_string(),
        second_label: b.spec.family().to_string(),
        coefficients,
        aic: (a.aic, b.aic),
        loglik: (a.loglik, b.loglik),
        n_effective: a.n_effective,
        lower_aic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::build;
    use crate::series::TimeSeries;
    use approx::assert_abs_diff_eq;

    fn dm_from(z: &[&[f64]], y: &[f64]) -> DesignMatrix {
        let n = z.len();
        let k = z[0].len();
        DesignMatrix {
            spec: ModelSpec::ardl(1, 0, vec![]).unwrap(),
            data: DMatrix::from_fn(n, k, |i, j| z[i][j]),
            target: DVector::from_column_slice(y),
            column_names: (0..k).map(|j| format!("c{j}")).collect(),
            first_index: 1,
        }
    }

    #[test]
    fn loglik_formula() {
        // n = 10, RSS = 10
        let ll = gaussian_loglik(10, 1.0);
        assert_abs_diff_eq!(ll, -5.0 * ((2.0 * PI).ln() + 1.0), epsilon = 1e-12);
        assert_abs_diff_eq!(ll, -14.1894, epsilon = 1e-4);
    }

    #[test]
    fn aic_bic_conventions() {
        let z: Vec<Vec<f64>> = (0..8).map(|i| vec![1.0, i as f64]).collect();
        let y = [0.1, 1.2, 1.9, 3.2, 3.8, 5.1, 6.0, 7.2];
        let zr: Vec<&[f64]> = z.iter().map(|r| r.as_slice()).collect();
        let m = fit(&dm_from(&zr, &y)).unwrap();
        assert_abs_diff_eq!(m.sigma2_hat, m.rss() / 8.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.aic, 4.0 - 2.0 * m.loglik, epsilon = 1e-12);
        assert_abs_diff_eq!(m.bic, 2.0 * 8f64.ln() - 2.0 * m.loglik, epsilon = 1e-12);
    }

    #[test]
    fn duplicate_column_is_singular() {
        let z: Vec<Vec<f64>> = (0..6).map(|i| vec![1.0, i as f64, i as f64]).collect();
        let zr: Vec<&[f64]> = z.iter().map(|r| r.as_slice()).collect();
        let err = fit(&dm_from(&zr, &[1.0, 2.0, 2.5, 4.0, 5.5, 6.0])).unwrap_err();
        assert!(matches!(err, Error::SingularDesign { rank: 2, cols: 3 }));
    }

    #[test]
    fn constant_regressor_with_intercept_is_singular() {
        let y = TimeSeries::new("y", 1, vec![1.0, 2.0, 1.5, 3.0, 2.0, 2.5]).unwrap();
        let x = TimeSeries::new("x", 1, vec![4.0; 6]).unwrap();
        let d = Dataset::new(y, vec![x]).unwrap();
        let dm = build(&d, &ModelSpec::ardl(1, 0, vec!["x".into()]).unwrap()).unwrap();
        assert!(matches!(fit(&dm), Err(Error::SingularDesign { .. })));
    }

    #[test]
    fn too_few_rows_and_perfect_fit() {
        let zr: Vec<&[f64]> = vec![&[1.0, 0.0], &[1.0, 1.0]];
        assert_eq!(fit(&dm_from(&zr[..1], &[1.0])), Err(Error::InsufficientData { rows: 1, cols: 2 }));
        let identity: Vec<&[f64]> = vec![&[1.0, 0.0], &[0.0, 1.0]];
        assert_eq!(fit(&dm_from(&identity, &[2.0, -1.0])), Err(Error::DegenerateVariance));
    }

    fn fitted(family: Family, aic: f64, n: usize) -> FittedModel {
        FittedModel {
            spec: ModelSpec::symmetric(family, 1, 1, vec!["x".into()]).unwrap(),
            column_names: vec!["const".into()],
            coefficients: vec![0.0],
            std_errors: vec![0.0],
            residuals: vec![0.0; n],
            sigma2_hat: 1.0,
            loglik: 0.0,
            aic,
            bic: 0.0,
            n_effective: n,
            first_index: 2,
        }
    }

    #[test]
    fn compare_flags_lower_aic() {
        let r = compare(&fitted(Family::Ardl, -14.741, 33), &fitted(Family::Nsb, -15.077, 33)).unwrap();
        assert_eq!(r.lower_aic, Preferred::Second);
        let r = compare(&fitted(Family::Ardl, 1.0, 33), &fitted(Family::Nsb, 1.0, 33)).unwrap();
        assert_eq!(r.lower_aic, Preferred::Tie);
        let err = compare(&fitted(Family::Ardl, 1.0, 33), &fitted(Family::Nsb, 1.0, 32)).unwrap_err();
        assert_eq!(err, Error::SampleMismatch(33, 32));
    }

    #[test]
    fn singleton_grid() {
        let y: Vec<f64> = (0..30).map(|t| ((t * 13 % 7) as f64).sin()).collect();
        let x: Vec<f64> = (0..30).map(|t| ((t * 5 % 11) as f64).cos()).collect();
        let d = Dataset::new(
            TimeSeries::new("y", 1, y).unwrap(),
            vec![TimeSeries::new("x", 1, x).unwrap()],
        )
        .unwrap();
        let opts = FitOptions { max_p: 1, max_q: 0, ..FitOptions::default() };
        let (spec, m) = select_lags(&d, Family::Ardl, &opts).unwrap();
        assert_eq!(spec, ModelSpec::ardl(1, 0, vec!["x".into()]).unwrap());
        assert_eq!(m.n_effective, 29);
    }
}
