//! Run configuration: a flat `key = value` text file, overridable from the
//! command line.
//!
//! ```text
//! # comments start with '#'
//! input = data/demo.csv
//! index = year
//! dependent = co2
//! regressors = energy, gdp, density
//! transform = log, standardize
//! transform.density = log
//! family = both
//! p = 1
//! q = 1
//! ```

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::estimation::{Criterion, FitOptions};
use crate::montecarlo::{DgpConfig, McConfig};
use crate::series::Family;

use super::data::Transform;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyChoice {
    One(Family),
    Both,
}

impl FamilyChoice {
    pub fn families(self) -> Vec<Family> {
        match self {
            FamilyChoice::One(f) => vec![f],
            FamilyChoice::Both => vec![Family::Ardl, Family::Nsb],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Fit,
    FixedSplit,
    Rolling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    /// Future regressor values for out-of-sample forecasting.
    pub future: Option<PathBuf>,
    pub out: PathBuf,
    pub index: Option<String>,
    pub dependent: Option<String>,
    pub regressors: Option<Vec<String>>,
    /// Column for the `decompose` command.
    pub column: Option<String>,
    /// Transforms applied to every value column without its own entry.
    pub transform: Vec<Transform>,
    pub column_transforms: Vec<(String, Vec<Transform>)>,

    pub family: FamilyChoice,
    pub p: usize,
    pub q: usize,
    pub q_pos: Option<usize>,
    pub q_neg: Option<usize>,
    pub select: bool,
    pub fit_options: FitOptions,

    pub mode: EvalMode,
    pub train_n: Option<usize>,
    pub window: usize,
    /// Forecast horizon; each command has its own default when unset.
    pub horizon: Option<usize>,

    pub seed: u64,
    pub dgp: DgpConfig,
    pub mc: McConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            future: None,
            out: PathBuf::from("."),
            index: None,
            dependent: None,
            regressors: None,
            column: None,
            transform: Vec::new(),
            column_transforms: Vec::new(),
            family: FamilyChoice::Both,
            p: 1,
            q: 1,
            q_pos: None,
            q_neg: None,
            select: false,
            fit_options: FitOptions::default(),
            mode: EvalMode::Rolling,
            train_n: None,
            window: 22,
            horizon: None,
            seed: McConfig::default().base_seed,
            dgp: DgpConfig::three_lag(),
            mc: McConfig::default(),
        }
    }
}

fn list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse `{s}`"))))
        .collect()
}

fn scalar<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse `{value}`")))
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "" | "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::InvalidConfig(format!("{key}: expected a boolean, got `{value}`"))),
    }
}

impl RunConfig {
    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
        text.lines()
            .enumerate()
            .filter_map(|(i, line)| {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    return None;
                }
                Some(match line.split_once('=') {
                    Some((k, v)) => Ok((k.trim().to_string(), v.trim().to_string())),
                    None => Err(Error::InvalidConfig(format!("line {}: expected `key = value`", i + 1))),
                })
            })
            .collect()
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (k, v) in Self::parse_pairs(text)? {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key_norm = key.trim().to_ascii_lowercase().replace('-', "_");
        if key_norm.starts_with("transform.") {
            // column names keep their original spelling
            let col = key.trim()["transform.".len()..].to_string();
            let t = list(key, value)?;
            self.column_transforms.retain(|(c, _)| *c != col);
            self.column_transforms.push((col, t));
            return Ok(());
        }
        match key_norm.as_str() {
            "input" => self.input = Some(PathBuf::from(value)),
            "future" => self.future = Some(PathBuf::from(value)),
            "out" | "output_dir" => self.out = PathBuf::from(value),
            "index" => self.index = Some(value.to_string()),
            "dependent" => self.dependent = Some(value.to_string()),
            "regressors" => self.regressors = Some(list(key, value)?),
            "column" => self.column = Some(value.to_string()),
            "transform" => self.transform = list(key, value)?,
            "family" => {
                self.family = if value.trim().eq_ignore_ascii_case("both") {
                    FamilyChoice::Both
                } else {
                    FamilyChoice::One(value.parse()?)
                }
            }
            "p" => self.p = scalar(key, value)?,
            "q" => self.q = scalar(key, value)?,
            "qpos" | "q_pos" => self.q_pos = Some(scalar(key, value)?),
            "qneg" | "q_neg" => self.q_neg = Some(scalar(key, value)?),
            "select" => self.select = boolean(key, value)?,
            "max_p" => self.fit_options.max_p = scalar(key, value)?,
            "max_q" => self.fit_options.max_q = scalar(key, value)?,
            "criterion" => self.fit_options.criterion = value.parse::<Criterion>()?,
            "rank_tolerance" => self.fit_options.rank_tolerance = scalar(key, value)?,
            "mode" => {
                self.mode = match value.trim().to_ascii_lowercase().replace('-', "_").as_str() {
                    "fit" => EvalMode::Fit,
                    "fixed_split" | "fixed" | "split" => EvalMode::FixedSplit,
                    "rolling" => EvalMode::Rolling,
                    other => return Err(Error::InvalidConfig(format!("unknown mode `{other}`"))),
                }
            }
            "train_n" => {
                let n = scalar(key, value)?;
                self.train_n = Some(n);
                self.mc.train_n = n;
            }
            "window" => self.window = scalar(key, value)?,
            "horizon" | "h" => {
                let h = scalar(key, value)?;
                self.horizon = Some(h);
                self.mc.horizon = h;
            }
            "seed" | "base_seed" => {
                self.seed = scalar(key, value)?;
                self.mc.base_seed = self.seed;
            }
            "replications" => self.mc.replications = scalar(key, value)?,
            "t" | "sample_length" => {
                self.mc.t = scalar(key, value)?;
                self.dgp.t = self.mc.t;
            }
            "lags" | "lag_grid" => self.mc.lag_grid = list(key, value)?,
            "phi" => self.dgp.phi = list(key, value)?,
            "beta_pos" => self.dgp.beta_pos = scalar(key, value)?,
            "beta_neg" => self.dgp.beta_neg = scalar(key, value)?,
            "noise_sd" => self.dgp.noise_sd = scalar(key, value)?,
            "x_innovation_sd" => self.dgp.x_innovation_sd = scalar(key, value)?,
            "burn_in" => self.dgp.burn_in = scalar(key, value)?,
            _ => return Err(Error::InvalidConfig(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    /// Transforms requested for a value column.
    pub fn transforms_for(&self, column: &str) -> Vec<Transform> {
        self.column_transforms
            .iter()
            .find(|(c, _)| c == column)
            .map(|(_, t)| t.clone())
            .unwrap_or_else(|| self.transform.clone())
    }
}
