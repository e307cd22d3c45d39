//! Command-line frontend.
//!
//! Commands: `decompose`, `fit`, `forecast`, `evaluate`, `simulate`, `mc`.
//! Every flag maps onto a [`RunConfig`] key; `--config FILE` loads a flat
//! `key = value` file first and flags override it.
//!
//! Exit codes: 2 input/parse, 3 specification, 4 numerical, 5 internal.
//! `ASYMDL_THREADS` caps worker threads (`0` or unset = automatic).

pub mod config;
pub mod data;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::decomposition::decompose;
use crate::design::ModelFrame;
use crate::error::{Error, Result};
use crate::estimation::{compare, fit, select_lags, FittedModel};
use crate::forecasting::{fixed_split_eval, forecast, rolling_eval};
use crate::montecarlo::{run_campaign, simulate_dgp, DgpConfig, McConfig};
use crate::series::{Dataset, Family, ModelSpec, TimeSeries};

pub use config::{EvalMode, FamilyChoice, RunConfig};
pub use data::{ingest, preprocess, ColumnSpec, ColumnTransform, RawDataset, Role, Transform};

pub const THREADS_ENV: &str = "ASYMDL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "asymdl", version, about = "ARDL and NSB-ARDL estimation, forecasting and simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the cumulative positive/negative decomposition of one column.
    Decompose(Flags),
    /// Fit ARDL and/or NSB-ARDL models and compare them.
    Fit(Flags),
    /// Forecast held-out periods, or future periods given `--future`.
    Forecast(Flags),
    /// Fixed-split or rolling-window out-of-sample evaluation.
    Evaluate(Flags),
    /// Write one simulated dataset.
    Simulate(Flags),
    /// Run the Monte Carlo forecast comparison.
    Mc(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Decompose,
    Fit,
    Forecast,
    Evaluate,
    Simulate,
    Mc,
}

impl Command {
    pub fn split(&self) -> (CommandKind, &Flags) {
        match self {
            Command::Decompose(f) => (CommandKind::Decompose, f),
            Command::Fit(f) => (CommandKind::Fit, f),
            Command::Forecast(f) => (CommandKind::Forecast, f),
            Command::Evaluate(f) => (CommandKind::Evaluate, f),
            Command::Simulate(f) => (CommandKind::Simulate, f),
            Command::Mc(f) => (CommandKind::Mc, f),
        }
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct Flags {
    /// Flat key = value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<String>,
    /// CSV with future regressor values (forecast)
    #[arg(long)]
    pub future: Option<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// ardl, nsb or both
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub qpos: Option<String>,
    #[arg(long)]
    pub qneg: Option<String>,
    /// Choose lag orders by information criterion
    #[arg(long)]
    pub select: bool,
    #[arg(long)]
    pub max_p: Option<String>,
    #[arg(long)]
    pub max_q: Option<String>,
    /// aic or bic
    #[arg(long)]
    pub criterion: Option<String>,
    #[arg(long)]
    pub index: Option<String>,
    #[arg(long)]
    pub dependent: Option<String>,
    /// Comma-separated regressor columns
    #[arg(long)]
    pub regressors: Option<String>,
    /// Comma-separated transforms for all value columns (log, standardize)
    #[arg(long)]
    pub transform: Option<String>,
    /// Column to decompose
    #[arg(long)]
    pub column: Option<String>,
    /// fit, fixed_split or rolling
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub train_n: Option<String>,
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub horizon: Option<String>,
    #[arg(long)]
    pub replications: Option<String>,
    /// Comma-separated lag grid for `mc`
    #[arg(long)]
    pub lags: Option<String>,
    /// Any configuration key, as KEY=VALUE (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl Flags {
    /// Defaults, then the config file, then explicit flags.
    pub fn to_config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_text(&std::fs::read_to_string(path)?)?;
        }
        let pairs = [
            ("input", &self.input),
            ("future", &self.future),
            ("out", &self.out),
            ("seed", &self.seed),
            ("family", &self.family),
            ("p", &self.p),
            ("q", &self.q),
            ("qpos", &self.qpos),
            ("qneg", &self.qneg),
            ("max_p", &self.max_p),
            ("max_q", &self.max_q),
            ("criterion", &self.criterion),
            ("index", &self.index),
            ("dependent", &self.dependent),
            ("regressors", &self.regressors),
            ("transform", &self.transform),
            ("column", &self.column),
            ("mode", &self.mode),
            ("train_n", &self.train_n),
            ("window", &self.window),
            ("horizon", &self.horizon),
            ("replications", &self.replications),
            ("lags", &self.lags),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if self.select {
            cfg.select = true;
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }
}

/// Worker count from `ASYMDL_THREADS`; `0` means automatic.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("{THREADS_ENV} must be a non-negative integer"))),
        _ => Ok(0),
    }
}

/// Runs a command on a pool of `threads` workers and returns the files written.
pub fn run_with_threads(kind: CommandKind, cfg: &RunConfig, threads: usize) -> Result<Vec<PathBuf>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| run(kind, cfg))
}

/// Runs a command on the current thread pool and returns the files written.
pub fn run(kind: CommandKind, cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(&cfg.out)?;
    match kind {
        CommandKind::Decompose => cmd_decompose(cfg),
        CommandKind::Fit => cmd_fit(cfg),
        CommandKind::Forecast => cmd_forecast(cfg),
        CommandKind::Evaluate => cmd_evaluate(cfg),
        CommandKind::Simulate => cmd_simulate(cfg),
        CommandKind::Mc => cmd_mc(cfg),
    }
}

/// Entry point for the `asymdl` binary.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let (kind, flags) = cli.command.split();
    let outcome = flags
        .to_config()
        .and_then(|cfg| Ok((cfg, threads_from_env()?)))
        .and_then(|(cfg, threads)| run_with_threads(kind, &cfg, threads));
    match outcome {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// A preprocessed dataset plus what was done to each column.
struct Loaded {
    index_name: String,
    data: Dataset,
    transforms: Vec<ColumnTransform>,
}

fn input_text(cfg: &RunConfig) -> Result<(PathBuf, String)> {
    let path = cfg.input.clone().ok_or_else(|| Error::InvalidConfig("no input file given".into()))?;
    let text = std::fs::read_to_string(&path)?;
    Ok((path, text))
}

fn load(cfg: &RunConfig, text: &str, value_columns: Option<Vec<String>>) -> Result<Loaded> {
    let headers = data::read_headers(text)?;
    let index = cfg.index.clone().or_else(|| headers.first().cloned()).ok_or(Error::EmptyInput)?;
    let (dependent, regressors) = match value_columns {
        Some(cols) => (cols[0].clone(), cols[1..].to_vec()),
        None => {
            let dependent = cfg
                .dependent
                .clone()
                .or_else(|| headers.iter().find(|h| **h != index).cloned())
                .ok_or_else(|| Error::Parse("file has no value columns".into()))?;
            let regressors = cfg.regressors.clone().unwrap_or_else(|| {
                headers.iter().filter(|h| **h != index && **h != dependent).cloned().collect()
            });
            (dependent, regressors)
        }
    };
    let mut specs = vec![
        ColumnSpec::new(&index, Role::Index, vec![]),
        ColumnSpec::new(&dependent, Role::Dependent, cfg.transforms_for(&dependent)),
    ];
    specs.extend(regressors.iter().map(|r| ColumnSpec::new(r, Role::Regressor, cfg.transforms_for(r))));
    let raw = data::ingest_str(text, &specs)?;
    let (data, transforms) = preprocess(&raw, &specs)?;
    Ok(Loaded { index_name: index, data, transforms })
}

fn model_specs(cfg: &RunConfig, regressors: &[String]) -> Result<Vec<ModelSpec>> {
    cfg.family
        .families()
        .into_iter()
        .map(|f| match f {
            Family::Ardl => ModelSpec::ardl(cfg.p, cfg.q, regressors.to_vec()),
            Family::Nsb => ModelSpec::nsb(
                cfg.p,
                cfg.q_pos.unwrap_or(cfg.q),
                cfg.q_neg.unwrap_or(cfg.q),
                regressors.to_vec(),
            ),
        })
        .collect()
}

/// Fits the configured models on a common sample: either fixed orders or an
/// information-criterion search per family.
fn fit_models(cfg: &RunConfig, data: &Dataset) -> Result<Vec<FittedModel>> {
    if cfg.select {
        return cfg
            .family
            .families()
            .into_iter()
            .map(|f| select_lags(data, f, &cfg.fit_options).map(|(_, m)| m))
            .collect();
    }
    let specs = model_specs(cfg, &data.regressor_names())?;
    let trim = specs.iter().map(ModelSpec::max_lag).max().unwrap_or(1);
    specs
        .iter()
        .map(|spec| {
            let frame = ModelFrame::new(data, spec)?;
            fit(&frame.design(trim..frame.len())?)
        })
        .collect()
}

fn chosen_specs(cfg: &RunConfig, data: &Dataset) -> Result<Vec<ModelSpec>> {
    if cfg.select {
        Ok(fit_models(cfg, data)?.into_iter().map(|m| m.spec).collect())
    } else {
        model_specs(cfg, &data.regressor_names())
    }
}

fn metadata(command: &str, cfg: &RunConfig, loaded: Option<&Loaded>) -> Value {
    let mut meta = json!({
        "tool": "asymdl",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
    });
    if let Some(input) = &cfg.input {
        meta["input"] = json!(input.display().to_string());
    }
    if let Some(l) = loaded {
        meta["sample"] = json!({ "start": l.data.start_index(), "end": l.data.end_index() });
        meta["preprocessing"] = serde_json::to_value(&l.transforms).unwrap_or(Value::Null);
        if l.transforms.iter().any(|t| t.mean.is_some()) {
            meta["standardization_caveat"] = json!(
                "standardized with full-sample moments; out-of-sample periods contribute to the mean and standard deviation"
            );
        }
    }
    meta
}

fn family_file(out: &Path, stem: &str, family: Family, several: bool) -> PathBuf {
    if several {
        out.join(format!("{stem}_{family}.csv"))
    } else {
        out.join(format!("{stem}.csv"))
    }
}

fn cmd_decompose(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let (_, text) = input_text(cfg)?;
    let headers = data::read_headers(&text)?;
    let index = cfg.index.clone().or_else(|| headers.first().cloned()).ok_or(Error::EmptyInput)?;
    let column = cfg
        .column
        .clone()
        .or_else(|| cfg.regressors.as_ref().and_then(|r| r.first().cloned()))
        .or_else(|| headers.iter().find(|h| **h != index).cloned())
        .ok_or_else(|| Error::Parse("file has no value columns".into()))?;
    let loaded = load(cfg, &text, Some(vec![column]))?;
    let x = loaded.data.dependent();
    let pair = decompose(x)?;
    let path = cfg.out.join("decomposed.csv");
    report::write_decomposed(&path, &loaded.index_name, x, &pair)?;
    Ok(vec![path])
}

fn cmd_fit(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let (_, text) = input_text(cfg)?;
    let loaded = load(cfg, &text, None)?;
    let models = fit_models(cfg, &loaded.data)?;
    write_fit_outputs(cfg, "fit", &loaded, &models)
}

fn write_fit_outputs(cfg: &RunConfig, command: &str, loaded: &Loaded, models: &[FittedModel]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let comparison = match models {
        [a, b] => Some(compare(a, b)?),
        _ => None,
    };
    let fit_path = cfg.out.join("fit.json");
    report::write_fit_json(&fit_path, models, comparison.as_ref(), metadata(command, cfg, Some(loaded)))?;
    written.push(fit_path);
    if let Some(c) = &comparison {
        let path = cfg.out.join("comparison.csv");
        report::write_comparison(&path, c)?;
        written.push(path);
    }
    Ok(written)
}

fn cmd_forecast(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    match &cfg.future {
        Some(future) => forecast_future(cfg, future),
        None => holdout(cfg, "forecast"),
    }
}

fn forecast_future(cfg: &RunConfig, future_path: &Path) -> Result<Vec<PathBuf>> {
    let (_, text) = input_text(cfg)?;
    let loaded = load(cfg, &text, None)?;
    let regressors = loaded.data.regressor_names();
    let future_text = std::fs::read_to_string(future_path)?;
    let names: Vec<&str> = regressors.iter().map(String::as_str).collect();
    let future: Vec<TimeSeries> = data::read_columns(&future_text, &loaded.index_name, &names)?
        .into_iter()
        .map(|s| {
            let info = loaded
                .transforms
                .iter()
                .find(|t| t.name == s.name())
                .ok_or_else(|| Error::Internal(format!("no transform record for `{}`", s.name())))?;
            let values = s
                .iter()
                .map(|(_, v)| v.map(|x| info.apply(x)).transpose())
                .collect::<Result<Vec<_>>>()?;
            TimeSeries::with_missing(s.name(), s.start_index(), values)
        })
        .collect::<Result<_>>()?;
    let available = future
        .iter()
        .map(|s| (s.end_index() - loaded.data.end_index()).max(0) as usize)
        .min()
        .unwrap_or(0);
    let h = cfg.horizon.unwrap_or(available);

    let models = fit_models(cfg, &loaded.data)?;
    let mut written = write_fit_outputs(cfg, "forecast", &loaded, &models)?;
    for m in &models {
        let fc = forecast(m, &loaded.data, &future, h)?;
        let path = family_file(&cfg.out, "forecast", m.spec.family(), models.len() > 1);
        report::write_forecast(&path, &fc)?;
        written.push(path);
    }
    Ok(written)
}

fn holdout(cfg: &RunConfig, command: &str) -> Result<Vec<PathBuf>> {
    let (_, text) = input_text(cfg)?;
    let loaded = load(cfg, &text, None)?;
    let h = cfg.horizon.unwrap_or(5);
    let train_n = match cfg.train_n {
        Some(n) => n,
        None => loaded.data.len().checked_sub(h).ok_or(Error::InsufficientData {
            rows: loaded.data.len(),
            cols: h,
        })?,
    };
    let specs = chosen_specs(cfg, &loaded.data)?;
    let mut models = Vec::new();
    let mut forecasts = Vec::new();
    for spec in &specs {
        let (m, fc) = fixed_split_eval(&loaded.data, spec, train_n, h)?;
        models.push(m);
        forecasts.push(fc);
    }
    // models of different families may trim differently; compare only on a common sample
    let mut written = if models.len() == 2 && models[0].n_effective != models[1].n_effective {
        let path = cfg.out.join("fit.json");
        report::write_fit_json(&path, &models, None, metadata(command, cfg, Some(&loaded)))?;
        vec![path]
    } else {
        write_fit_outputs(cfg, command, &loaded, &models)?
    };
    for (m, fc) in models.iter().zip(&forecasts) {
        let path = family_file(&cfg.out, "forecast", m.spec.family(), models.len() > 1);
        report::write_forecast(&path, fc)?;
        written.push(path);
    }
    Ok(written)
}

fn cmd_evaluate(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    match cfg.mode {
        EvalMode::Fit => cmd_fit(cfg),
        EvalMode::FixedSplit => holdout(cfg, "evaluate"),
        EvalMode::Rolling => {
            let (_, text) = input_text(cfg)?;
            let loaded = load(cfg, &text, None)?;
            let h = cfg.horizon.unwrap_or(5);
            let specs = chosen_specs(cfg, &loaded.data)?;
            let mut written = Vec::new();
            let mut summary = Vec::new();
            for spec in &specs {
                let r = rolling_eval(&loaded.data, spec, cfg.window, h)?;
                let path = family_file(&cfg.out, "rolling", spec.family(), specs.len() > 1);
                report::write_rolling(&path, &r)?;
                written.push(path);
                summary.push(json!({
                    "family": spec.family(),
                    "spec": spec.to_string(),
                    "window": r.window_size,
                    "horizon": r.horizon,
                    "windows": r.windows.len(),
                    "failures": r.failures,
                    "mean_rmse": r.mean_rmse.map(report::round_sig),
                }));
            }
            let path = cfg.out.join("rolling.json");
            let root = json!({ "metadata": metadata("evaluate", cfg, Some(&loaded)), "models": summary });
            let text = serde_json::to_string_pretty(&root).map_err(|e| Error::Internal(e.to_string()))?;
            std::fs::write(&path, text + "\n")?;
            written.push(path);
            Ok(written)
        }
    }
}

fn dgp_from(cfg: &RunConfig) -> DgpConfig {
    DgpConfig { t: cfg.mc.t, ..cfg.dgp.clone() }
}

fn cmd_simulate(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let data = simulate_dgp(&dgp_from(cfg), cfg.seed)?;
    let path = cfg.out.join("simulated.csv");
    report::write_dataset(&path, "t", &data)?;
    Ok(vec![path])
}

fn cmd_mc(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let mc = McConfig { base_seed: cfg.seed, ..cfg.mc.clone() };
    let report = run_campaign(&dgp_from(cfg), &mc)?;
    let summary = cfg.out.join("mc_report.csv");
    let raw = cfg.out.join("mc_raw.csv");
    report::write_mc(&summary, &raw, &report)?;
    Ok(vec![summary, raw])
}
