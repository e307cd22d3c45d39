//! Simulated asymmetric data-generating process and the replication campaign
//! comparing ARDL and NSB-ARDL forecast accuracy.
//!
//! The regressor is a Gaussian random walk started at zero. Its partial sums
//! drive the dependent series through
//!
//! ```text
//! y_t = Σ_i φ_i y_{t−i} + β⁺ x⁺_t + β⁻ x⁻_t + ε_t
//! ```
//!
//! with zero pre-sample values and a discarded burn-in.
//!
//! Every replication `r` draws from its own ChaCha8 stream seeded with
//! `base_seed + r`, so results do not depend on thread count or scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forecasting::fixed_split_eval;
use crate::series::{Dataset, Family, ModelSpec, TimeSeries};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DgpConfig {
    pub t: usize,
    pub phi: Vec<f64>,
    pub beta_pos: f64,
    pub beta_neg: f64,
    pub noise_sd: f64,
    pub x_innovation_sd: f64,
    pub burn_in: usize,
}

impl DgpConfig {
    /// Single autoregressive lag: `0.3 y_{t−1} + 0.6 x⁺_t + 1.2 x⁻_t`.
    pub fn single_lag() -> Self {
        Self {
            t: 100,
            phi: vec![0.3],
            beta_pos: 0.6,
            beta_neg: 1.2,
            noise_sd: 1.0,
            x_innovation_sd: 1.0,
            burn_in: 50,
        }
    }

    /// Three autoregressive lags `φ = [0.3, 0.2, 0.1]` with the same
    /// asymmetric loadings; used for the lag-grid campaign.
    pub fn three_lag() -> Self {
        Self { phi: vec![0.3, 0.2, 0.1], ..Self::single_lag() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t < 20 {
            return Err(Error::InvalidConfig(format!("sample length {} is below 20", self.t)));
        }
        if self.phi.is_empty() || self.phi.len() > 3 {
            return Err(Error::InvalidConfig("phi must have between 1 and 3 entries".into()));
        }
        if self.phi.iter().map(|p| p.abs()).sum::<f64>() >= 1.0 {
            return Err(Error::InvalidConfig("sum of |phi| must be below 1".into()));
        }
        let finite = [self.beta_pos, self.beta_neg, self.noise_sd, self.x_innovation_sd]
            .iter()
            .chain(&self.phi)
            .all(|v| v.is_finite());
        if !finite || self.noise_sd < 0.0 || self.x_innovation_sd < 0.0 {
            return Err(Error::InvalidConfig("DGP parameters must be finite, standard deviations non-negative".into()));
        }
        Ok(())
    }
}

/// Draws one dataset of `cfg.t` observations of `(y, x)`, indexed `1..=t`.
pub fn simulate_dgp(cfg: &DgpConfig, seed: u64) -> Result<Dataset> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = cfg.burn_in + cfg.t;
    let lags = cfg.phi.len();
    // y[0..lags] are the zero pre-sample values.
    let mut y = vec![0.0; lags + total];
    let mut x = Vec::with_capacity(total);
    let (mut level, mut up, mut down) = (0.0f64, 0.0f64, 0.0f64);
    for t in 0..total {
        let eta: f64 = StandardNormal.sample(&mut rng);
        let eps: f64 = StandardNormal.sample(&mut rng);
        let dx = cfg.x_innovation_sd * eta;
        level += dx;
        if dx > 0.0 {
            up += dx;
        } else {
            down += dx;
        }
        let ar: f64 = cfg.phi.iter().enumerate().map(|(i, p)| p * y[lags + t - 1 - i]).sum();
        y[lags + t] = ar + cfg.beta_pos * up + cfg.beta_neg * down + cfg.noise_sd * eps;
        x.push(level);
    }
    let y = y.split_off(lags + cfg.burn_in);
    let x = x.split_off(cfg.burn_in);
    Dataset::new(TimeSeries::new("y", 1, y)?, vec![TimeSeries::new("x", 1, x)?])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub replications: usize,
    /// Sample length; overrides the DGP's own `t`.
    pub t: usize,
    pub train_n: usize,
    pub horizon: usize,
    pub lag_grid: Vec<usize>,
    pub base_seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { replications: 500, t: 100, train_n: 90, horizon: 10, lag_grid: vec![1, 2, 3], base_seed: 42 }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be at least 1".into()));
        }
        if self.horizon == 0 || self.train_n + self.horizon > self.t {
            return Err(Error::InvalidConfig(format!(
                "train_n {} + horizon {} must not exceed T = {}",
                self.train_n, self.horizon, self.t
            )));
        }
        if self.lag_grid.is_empty() || self.lag_grid.contains(&0) {
            return Err(Error::InvalidConfig("lag grid must be non-empty with lags >= 1".into()));
        }
        Ok(())
    }
}

/// Out-of-sample RMSEs of one `(family, lag)` model across replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McCell {
    pub family: Family,
    pub lag: usize,
    /// Indexed by replication; `None` where the fit or forecast failed.
    pub rmse: Vec<Option<f64>>,
    pub mean: f64,
    pub std: f64,
    pub failures: usize,
}

impl McCell {
    fn new(family: Family, lag: usize, rmse: Vec<Option<f64>>) -> Self {
        let ok: Vec<f64> = rmse.iter().flatten().copied().collect();
        let (mean, std) = mean_std(&ok);
        let failures = rmse.len() - ok.len();
        Self { family, lag, rmse, mean, std, failures }
    }

    pub fn successes(&self) -> impl Iterator<Item = f64> + '_ {
        self.rmse.iter().flatten().copied()
    }
}

/// Sample mean and standard deviation (divisor `n − 1`; zero when `n < 2`).
pub fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = v.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub dgp: DgpConfig,
    pub config: McConfig,
    /// Ordered by lag-grid position, ARDL before NSB within each lag.
    pub cells: Vec<McCell>,
}

impl McReport {
    pub fn cell(&self, family: Family, lag: usize) -> Option<&McCell> {
        self.cells.iter().find(|c| c.family == family && c.lag == lag)
    }
}

/// Runs the campaign on the current rayon pool.
pub fn run_campaign(dgp: &DgpConfig, mc: &McConfig) -> Result<McReport> {
    dgp.validate()?;
    mc.validate()?;
    let dgp = DgpConfig { t: mc.t, ..dgp.clone() };
    dgp.validate()?;
    let models: Vec<(Family, usize)> = mc
        .lag_grid
        .iter()
        .flat_map(|&l| [(Family::Ardl, l), (Family::Nsb, l)])
        .collect();

    let results: Vec<Vec<Option<f64>>> = (0..mc.replications)
        .into_par_iter()
        .map(|r| {
            let seed = mc.base_seed.wrapping_add(r as u64);
            let Ok(data) = simulate_dgp(&dgp, seed) else {
                return vec![None; models.len()];
            };
            models
                .iter()
                .map(|&(family, lag)| {
                    let spec = ModelSpec::symmetric(family, lag, lag, vec!["x".into()]).ok()?;
                    let (_, fc) = fixed_split_eval(&data, &spec, mc.train_n, mc.horizon).ok()?;
                    fc.rmse
                })
                .collect()
        })
        .collect();

    let cells = models
        .iter()
        .enumerate()
        .map(|(i, &(family, lag))| McCell::new(family, lag, results.iter().map(|r| r[i]).collect()))
        .collect();
    Ok(McReport { dgp, config: mc.clone(), cells })
}

/// Runs the campaign on a dedicated pool of `threads` workers (`0` = rayon's
/// default).
pub fn run_campaign_with_threads(dgp: &DgpConfig, mc: &McConfig, threads: usize) -> Result<McReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| run_campaign(dgp, mc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let cfg = DgpConfig::single_lag();
        let a = simulate_dgp(&cfg, 7).unwrap();
        let b = simulate_dgp(&cfg, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
        assert_eq!(a.start_index(), 1);
        assert_ne!(a, simulate_dgp(&cfg, 8).unwrap());
    }

    #[test]
    fn zero_input_fixed_point() {
        let cfg = DgpConfig { noise_sd: 0.0, x_innovation_sd: 0.0, ..DgpConfig::single_lag() };
        let d = simulate_dgp(&cfg, 1).unwrap();
        assert!(d.dependent().values().iter().all(|&v| v == 0.0));
        assert!(d.regressors()[0].values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn noiseless_path_follows_recursion() {
        let cfg = DgpConfig { noise_sd: 0.0, burn_in: 0, ..DgpConfig::three_lag() };
        let d = simulate_dgp(&cfg, 3).unwrap();
        let x = d.regressors()[0].values();
        let y = d.dependent().values();
        let mut prev = 0.0;
        let (mut up, mut down) = (0.0, 0.0);
        for t in 0..x.len() {
            let dx: f64 = x[t] - prev;
            prev = x[t];
            up += dx.max(0.0);
            down += dx.min(0.0);
            let lag = |i: usize| if t >= i { y[t - i] } else { 0.0 };
            let expect = 0.3 * lag(1) + 0.2 * lag(2) + 0.1 * lag(3) + 0.6 * up + 1.2 * down;
            assert!((y[t] - expect).abs() < 1e-9 * (1.0 + expect.abs()), "t = {t}");
        }
    }

    #[test]
    fn config_validation() {
        assert!(DgpConfig { t: 10, ..DgpConfig::single_lag() }.validate().is_err());
        assert!(DgpConfig { phi: vec![0.6, 0.5], ..DgpConfig::single_lag() }.validate().is_err());
        assert!(McConfig { train_n: 95, ..McConfig::default() }.validate().is_err());
        assert!(McConfig { replications: 0, ..McConfig::default() }.validate().is_err());
    }

    #[test]
    fn campaign_shape_and_summary() {
        let mc = McConfig { replications: 12, ..McConfig::default() };
        let report = run_campaign(&DgpConfig::three_lag(), &mc).unwrap();
        assert_eq!(report.cells.len(), 6);
        for c in &report.cells {
            assert_eq!(c.rmse.len(), 12);
            let ok: Vec<f64> = c.successes().collect();
            let (m, s) = mean_std(&ok);
            assert_eq!((c.mean, c.std), (m, s));
        }
        let single = run_campaign(&DgpConfig::three_lag(), &McConfig { replications: 1, ..mc }).unwrap();
        assert!(single.cells.iter().all(|c| c.std == 0.0));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let mc = McConfig { replications: 16, lag_grid: vec![1, 2], ..McConfig::default() };
        let a = run_campaign_with_threads(&DgpConfig::three_lag(), &mc, 1).unwrap();
        let b = run_campaign_with_threads(&DgpConfig::three_lag(), &mc, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mean_std_oracle() {
        let (m, s) = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(m, 5.0);
        assert!((s - (32.0f64 / 7.0).sqrt()).abs() < 1e-15);
    }
}
