//! Cumulative positive/negative partial-sum decomposition of a regressor.
//!
//! For a series `x` of length `T` the positive component accumulates the
//! upward moves and the negative component the downward moves:
//!
//! ```text
//! pos[t] = Σ_{j=2..t} max(x[j] − x[j−1], 0)
//! neg[t] = Σ_{j=2..t} min(x[j] − x[j−1], 0)
//! ```
//!
//! Both start at zero, so `pos[t] + neg[t] = x[t] − x[1]` at every index.

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Suffixes appended to the regressor name for the two components.
pub const POS_SUFFIX: &str = "_pos";
pub const NEG_SUFFIX: &str = "_neg";

#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedPair {
    pub pos: TimeSeries,
    pub neg: TimeSeries,
}

/// Raw partial sums of a slice. Callers guarantee `x.len() >= 1`.
pub fn partial_sums(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut pos = Vec::with_capacity(x.len());
    let mut neg = Vec::with_capacity(x.len());
    let (mut up, mut down) = (0.0, 0.0);
    if !x.is_empty() {
        pos.push(0.0);
        neg.push(0.0);
    }
    for w in x.windows(2) {
        let d = w[1] - w[0];
        if d > 0.0 {
            up += d;
        } else {
            down += d;
        }
        pos.push(up);
        neg.push(down);
    }
    (pos, neg)
}

pub fn decompose(x: &TimeSeries) -> Result<DecomposedPair> {
    if x.len() < 2 {
        return Err(Error::TooShort { name: x.name().to_string(), need: 2, got: x.len() });
    }
    let values = x.complete_values()?;
    let (pos, neg) = partial_sums(values);
    Ok(DecomposedPair {
        pos: TimeSeries::new(format!("{}{POS_SUFFIX}", x.name()), x.start_index(), pos)?,
        neg: TimeSeries::new(format!("{}{NEG_SUFFIX}", x.name()), x.start_index(), neg)?,
    })
}
