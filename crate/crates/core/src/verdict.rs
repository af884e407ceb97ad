//! Records produced by the inequality checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numeric::ratio;

/// One inequality evaluation `lhs <= C * rhs_core`.
///
/// When the constant `C` is known the record carries a hard verdict in
/// `passed`; otherwise it stores the observed ratio `lhs / rhs_core`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub inequality_id: String,
    pub lhs: f64,
    pub rhs_core: f64,
    pub explicit_constant: Option<f64>,
    pub empirical_ratio: Option<f64>,
    pub passed: Option<bool>,
    /// Both sides vanish.
    pub degenerate: bool,
    pub grid_spacing: f64,
    pub params: BTreeMap<String, f64>,
}

impl VerdictRecord {
    /// Hard check `lhs <= constant * rhs_core + tolerance`.
    pub fn explicit(
        id: impl Into<String>,
        lhs: f64,
        rhs_core: f64,
        constant: f64,
        tolerance: f64,
        grid_spacing: f64,
    ) -> Self {
        let passed = lhs <= constant * rhs_core + tolerance;
        let mut params = BTreeMap::new();
        params.insert("tolerance".to_owned(), tolerance);
        Self {
            inequality_id: id.into(),
            lhs,
            rhs_core,
            explicit_constant: Some(constant),
            empirical_ratio: None,
            passed: Some(passed),
            degenerate: lhs == 0.0 && rhs_core == 0.0,
            grid_spacing,
            params,
        }
    }

    /// Ratio study for an inequality whose constant is not specified.
    pub fn empirical(id: impl Into<String>, lhs: f64, rhs_core: f64, grid_spacing: f64) -> Self {
        Self {
            inequality_id: id.into(),
            lhs,
            rhs_core,
            explicit_constant: None,
            empirical_ratio: Some(ratio(lhs, rhs_core)),
            passed: None,
            degenerate: lhs == 0.0 && rhs_core == 0.0,
            grid_spacing,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_owned(), value);
        self
    }

    /// `lhs - C * rhs_core` for explicit records.
    pub fn margin(&self) -> Option<f64> {
        self.explicit_constant.map(|c| c * self.rhs_core - self.lhs)
    }

    /// False only for an explicit check that failed.
    pub fn ok(&self) -> bool {
        self.passed.unwrap_or(true)
    }
}

/// Records of one inequality at successively halved grid spacings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementTrace {
    pub records: Vec<VerdictRecord>,
    /// Largest relative change of the empirical ratio between consecutive levels.
    pub stability: f64,
}

impl RefinementTrace {
    pub fn new(records: Vec<VerdictRecord>) -> Result<Self> {
        if records.is_empty() {
            return domain("refinement trace needs at least one level");
        }
        let first = &records[0];
        for pair in records.windows(2) {
            if pair[1].inequality_id != first.inequality_id {
                return domain("refinement levels check different inequalities");
            }
            if pair[1].grid_spacing >= pair[0].grid_spacing {
                return domain("refinement spacings must strictly decrease");
            }
        }
        let stability = relative_drift(records.iter().map(|r| r.empirical_ratio.unwrap_or(0.0)));
        Ok(Self { records, stability })
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.empirical_ratio.unwrap_or(0.0)).collect()
    }
}

/// Largest `|b - a| / |a|` over consecutive entries; zero-to-zero steps count
/// as no change.
pub fn relative_drift(values: impl IntoIterator<Item = f64>) -> f64 {
    let values: Vec<f64> = values.into_iter().collect();
    values
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            if a == b {
                0.0
            } else if a == 0.0 {
                f64::INFINITY
            } else {
                ((b - a) / a).abs()
            }
        })
        .fold(0.0, f64::max)
}
