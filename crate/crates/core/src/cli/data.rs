//! CSV ingestion and the interpolate → log → standardize pipeline.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{Dataset, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Dependent,
    Regressor,
    Index,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    None,
    Log,
    Standardize,
}

impl std::str::FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "" => Ok(Transform::None),
            "log" | "ln" => Ok(Transform::Log),
            "standardize" | "zscore" | "z" => Ok(Transform::Standardize),
            other => Err(Error::InvalidConfig(format!("unknown transform `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnSpec {
    pub name: String,
    pub role: Role,
    pub transforms: Vec<Transform>,
}

impl ColumnSpec {
    pub fn new(name: impl Into<String>, role: Role, transforms: Vec<Transform>) -> Self {
        Self { name: name.into(), role, transforms }
    }

    fn wants(&self, t: Transform) -> bool {
        self.transforms.contains(&t)
    }
}

fn check_specs(specs: &[ColumnSpec]) -> Result<()> {
    let count = |r: Role| specs.iter().filter(|s| s.role == r).count();
    if count(Role::Index) != 1 || count(Role::Dependent) != 1 {
        return Err(Error::InvalidConfig("need exactly one index and one dependent column".into()));
    }
    for s in specs {
        let log = s.transforms.iter().position(|&t| t == Transform::Log);
        let z = s.transforms.iter().position(|&t| t == Transform::Standardize);
        if let (Some(l), Some(z)) = (log, z) {
            if z < l {
                return Err(Error::InvalidConfig(format!(
                    "column `{}`: log must precede standardize",
                    s.name
                )));
            }
        }
    }
    Ok(())
}

/// Series read from a file, possibly with gaps; dependent first.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub index_name: String,
    pub dependent: TimeSeries,
    pub regressors: Vec<TimeSeries>,
}

impl RawDataset {
    pub fn series(&self) -> impl Iterator<Item = &TimeSeries> {
        std::iter::once(&self.dependent).chain(&self.regressors)
    }
}

/// Reads a comma-separated file with one header row. Empty cells and skipped
/// index values become missing observations.
pub fn ingest(path: &Path, specs: &[ColumnSpec]) -> Result<RawDataset> {
    check_specs(specs)?;
    let text = std::fs::read_to_string(path)?;
    ingest_str(&text, specs)
}

pub fn ingest_str(text: &str, specs: &[ColumnSpec]) -> Result<RawDataset> {
    check_specs(specs)?;
    let index_spec = specs.iter().find(|s| s.role == Role::Index).expect("checked");
    let names: Vec<&str> = specs
        .iter()
        .filter(|s| s.role == Role::Dependent)
        .chain(specs.iter().filter(|s| s.role == Role::Regressor))
        .map(|s| s.name.as_str())
        .collect();
    let mut series = read_columns(text, &index_spec.name, &names)?.into_iter();
    let dependent = series.next().expect("one dependent column");
    Ok(RawDataset { index_name: index_spec.name.clone(), dependent, regressors: series.collect() })
}

/// Header names of a CSV text.
pub fn read_headers(text: &str) -> Result<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    Ok(reader.headers()?.iter().map(str::to_string).collect())
}

/// Reads the named value columns against an integer index column.
pub fn read_columns(text: &str, index_name: &str, names: &[&str]) -> Result<Vec<TimeSeries>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let position = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let index_col = position(index_name)?;
    let value_cols = names.iter().map(|s| position(s)).collect::<Result<Vec<_>>>()?;

    let mut index: Vec<i64> = Vec::new();
    let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::new(); value_cols.len()];
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let line = row + 2;
        let cell = |c: usize| {
            record.get(c).ok_or_else(|| Error::Parse(format!("line {line}: too few fields")))
        };
        let raw_index = cell(index_col)?;
        let t: i64 = raw_index
            .parse()
            .map_err(|_| Error::Parse(format!("line {line}: index `{raw_index}` is not an integer")))?;
        if let Some(&prev) = index.last() {
            if t <= prev {
                return Err(Error::NonMonotonicIndex { row: line });
            }
            for gap in prev + 1..t {
                index.push(gap);
                columns.iter_mut().for_each(|c| c.push(None));
            }
        }
        index.push(t);
        for (col, &c) in columns.iter_mut().zip(&value_cols) {
            let s = cell(c)?;
            let v = if s.is_empty() {
                None
            } else {
                let v: f64 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {line}: `{s}` is not numeric")))?;
                v.is_finite().then_some(v)
            };
            col.push(v);
        }
    }
    if index.is_empty() {
        return Err(Error::Parse("file has a header but no data rows".into()));
    }
    let start = index[0];
    names
        .iter()
        .zip(columns)
        .map(|(name, v)| TimeSeries::with_missing(*name, start, v))
        .collect()
}

/// What preprocessing did to one column; reused to transform future values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnTransform {
    pub name: String,
    pub interpolated: usize,
    pub log: bool,
    /// Full-sample moments when the column was standardized.
    pub mean: Option<f64>,
    pub sd: Option<f64>,
}

impl ColumnTransform {
    /// Applies the log and standardization steps (not interpolation) to a
    /// value on the raw scale.
    pub fn apply(&self, v: f64) -> Result<f64> {
        let mut v = v;
        if self.log {
            if v <= 0.0 {
                return Err(Error::NonPositiveForLog(self.name.clone()));
            }
            v = v.ln();
        }
        if let (Some(m), Some(s)) = (self.mean, self.sd) {
            v = (v - m) / s;
        }
        Ok(v)
    }
}

/// Linear interpolation of interior gaps.
pub fn interpolate(s: &TimeSeries) -> Result<(TimeSeries, usize)> {
    let mask = s.missing_mask();
    if mask.first() == Some(&true) || mask.last() == Some(&true) {
        return Err(Error::BoundaryMissing(s.name().to_string()));
    }
    let v = s.values();
    let mut out = v.to_vec();
    let mut filled = 0;
    let mut last_obs = 0;
    for i in 1..v.len() {
        if mask[i] {
            continue;
        }
        let gap = i - last_obs;
        for (j, o) in out.iter_mut().enumerate().take(i).skip(last_obs + 1) {
            let w = (j - last_obs) as f64 / gap as f64;
            *o = v[last_obs] + w * (v[i] - v[last_obs]);
            filled += 1;
        }
        last_obs = i;
    }
    Ok((TimeSeries::new(s.name(), s.start_index(), out)?, filled))
}

/// Divides by the population standard deviation (divisor `n`).
pub fn standardize(s: &TimeSeries) -> Result<(TimeSeries, f64, f64)> {
    let v = s.complete_values()?;
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let sd = (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n).sqrt();
    if sd.is_nan() || sd <= 1e-14 * mean.abs() {
        return Err(Error::ZeroVariance(s.name().to_string()));
    }
    Ok((s.map_values(|x| (x - mean) / sd), mean, sd))
}

pub fn log_transform(s: &TimeSeries) -> Result<TimeSeries> {
    if s.iter().any(|(_, v)| v.is_some_and(|x| x <= 0.0)) {
        return Err(Error::NonPositiveForLog(s.name().to_string()));
    }
    Ok(s.map_values(f64::ln))
}

fn preprocess_series(s: &TimeSeries, spec: Option<&ColumnSpec>) -> Result<(TimeSeries, ColumnTransform)> {
    let (mut s, interpolated) = if s.has_missing() { interpolate(s)? } else { (s.clone(), 0) };
    let mut info = ColumnTransform { name: s.name().to_string(), interpolated, log: false, mean: None, sd: None };
    if spec.is_some_and(|c| c.wants(Transform::Log)) {
        s = log_transform(&s)?;
        info.log = true;
    }
    if spec.is_some_and(|c| c.wants(Transform::Standardize)) {
        let (z, mean, sd) = standardize(&s)?;
        s = z;
        info.mean = Some(mean);
        info.sd = Some(sd);
    }
    Ok((s, info))
}

/// Interpolates interior gaps, then logs and standardizes each column as its
/// spec requests. Columns are processed independently.
pub fn preprocess(raw: &RawDataset, specs: &[ColumnSpec]) -> Result<(Dataset, Vec<ColumnTransform>)> {
    let spec_for = |name: &str| specs.iter().find(|c| c.name == name);
    let mut infos = Vec::new();
    let mut out = Vec::new();
    for s in raw.series() {
        let (p, info) = preprocess_series(s, spec_for(s.name()))?;
        out.push(p);
        infos.push(info);
    }
    let mut it = out.into_iter();
    let dependent = it.next().expect("dependent present");
    Ok((Dataset::new(dependent, it.collect())?, infos))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn specs(transforms: Vec<Transform>) -> Vec<ColumnSpec> {
        vec![
            ColumnSpec::new("year", Role::Index, vec![]),
            ColumnSpec::new("co2", Role::Dependent, transforms.clone()),
            ColumnSpec::new("energy", Role::Regressor, transforms),
        ]
    }

    #[test]
    fn reads_rows_and_gaps() {
        let text = "year,co2,energy,other\n1990,1.0,2.0,x\n1991,,3.0,y\n1993,4,5,z\n";
        let raw = ingest_str(text, &specs(vec![])).unwrap();
        assert_eq!(raw.dependent.len(), 4);
        assert_eq!(raw.dependent.start_index(), 1990);
        assert_eq!(raw.dependent.missing_mask(), &[false, true, true, false]);
        assert_eq!(raw.regressors[0].get(1991), Some(3.0));
        assert_eq!(raw.regressors[0].get(1992), None);
    }

    #[test]
    fn ingest_errors() {
        let s = specs(vec![]);
        assert!(matches!(ingest_str("year,co2,energy\n", &s), Err(Error::Parse(_))));
        assert_eq!(
            ingest_str("year,co2,energy\n1990,1,1\n1989,1,1\n", &s),
            Err(Error::NonMonotonicIndex { row: 3 })
        );
        assert!(matches!(ingest_str("year,co2,energy\n1990,abc,1\n", &s), Err(Error::Parse(_))));
        assert_eq!(ingest_str("year,co2\n1990,1\n", &s), Err(Error::MissingColumn("energy".into())));
        assert!(matches!(ingest_str("year,co2,energy\n1990,1\n", &s), Err(Error::Parse(_))));
    }

    #[test]
    fn interpolation_log_standardize() {
        let s = TimeSeries::with_missing("a", 1, vec![Some(1.0), None, Some(3.0)]).unwrap();
        let (i, n) = interpolate(&s).unwrap();
        assert_eq!(i.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(n, 1);

        let s = TimeSeries::with_missing("a", 1, vec![Some(1.0), None, None, Some(7.0)]).unwrap();
        assert_eq!(interpolate(&s).unwrap().0.values(), &[1.0, 3.0, 5.0, 7.0]);

        let l = log_transform(&TimeSeries::new("a", 1, vec![1.0, std::f64::consts::E]).unwrap()).unwrap();
        assert_eq!(l.values()[0], 0.0);
        assert!((l.values()[1] - 1.0).abs() < 1e-15);

        let (z, m, sd) = standardize(&TimeSeries::new("a", 1, vec![1.0, 2.0, 3.0, 4.0]).unwrap()).unwrap();
        assert_eq!(m, 2.5);
        assert!((sd - 1.25f64.sqrt()).abs() < 1e-15);
        let zm: f64 = z.values().iter().sum::<f64>() / 4.0;
        assert!(zm.abs() < 1e-15);
    }

    #[test]
    fn preprocessing_errors() {
        let constant = TimeSeries::new("c", 1, vec![2.0; 5]).unwrap();
        assert_eq!(standardize(&constant).unwrap_err(), Error::ZeroVariance("c".into()));
        let neg = TimeSeries::new("n", 1, vec![1.0, 0.0]).unwrap();
        assert_eq!(log_transform(&neg).unwrap_err(), Error::NonPositiveForLog("n".into()));
        let edge = TimeSeries::with_missing("e", 1, vec![None, Some(1.0)]).unwrap();
        assert_eq!(interpolate(&edge).unwrap_err(), Error::BoundaryMissing("e".into()));
        let bad_order = vec![
            ColumnSpec::new("year", Role::Index, vec![]),
            ColumnSpec::new("co2", Role::Dependent, vec![Transform::Standardize, Transform::Log]),
        ];
        assert!(matches!(ingest_str("year,co2\n1,1\n", &bad_order), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn preprocessing_is_column_local() {
        let text = "year,co2,energy\n1,1.0,5\n2,2.0,7\n3,,6\n4,8.0,9\n";
        let mut s = specs(vec![]);
        s[1].transforms = vec![Transform::Log, Transform::Standardize];
        let raw = ingest_str(text, &s).unwrap();
        let (d, info) = preprocess(&raw, &s).unwrap();
        assert_eq!(d.regressors()[0].values(), &[5.0, 7.0, 6.0, 9.0]);
        assert_eq!(info[0].interpolated, 1);
        assert!(info[0].log);
        let back = info[0].apply(5.0).unwrap();
        assert!((back - d.dependent().values()[2]).abs() < 1e-12);
    }
}
