//! Sweep reports and their JSON / CSV serializations.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::model::Geometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One evaluated sample. `residual` is absent when the sample could not be
/// evaluated at all (e.g. the candidate map raised a domain error).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sample_index: u64,
    pub geometry: Geometry,
    pub n: usize,
    pub residual: Option<f64>,
    pub pass: bool,
}

impl SampleRecord {
    pub fn new(
        sample_index: u64,
        geometry: Geometry,
        n: usize,
        residual: Option<f64>,
        pass: bool,
    ) -> Self {
        SampleRecord {
            sample_index,
            geometry,
            n,
            residual,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub sample_index: u64,
    pub geometry: Geometry,
    pub n: usize,
    /// Point coordinates in the CLI input convention.
    pub inputs: Vec<Vec<f64>>,
    pub expected: Option<f64>,
    pub actual: Option<f64>,
    pub residual: Option<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub suite: String,
    pub seed: u64,
    pub tolerance: f64,
    pub samples_run: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub verdict: Verdict,
    pub failures: Vec<FailureRecord>,
    pub records: Vec<SampleRecord>,
}

impl SweepReport {
    /// Aggregates per-sample outcomes given in index order.
    pub fn from_outcomes(
        suite: &str,
        tolerance: f64,
        outcomes: Vec<(SampleRecord, Option<FailureRecord>)>,
    ) -> Self {
        let mut records = Vec::with_capacity(outcomes.len());
        let mut failures = Vec::new();
        for (record, failure) in outcomes {
            records.push(record);
            failures.extend(failure);
        }
        failures.sort_by_key(|f| f.sample_index);

        let residuals: Vec<f64> = records.iter().filter_map(|r| r.residual).collect();
        let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
        let mean_residual = if residuals.is_empty() {
            0.0
        } else {
            residuals.iter().sum::<f64>() / residuals.len() as f64
        };
        let verdict = if failures.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        SweepReport {
            suite: suite.to_string(),
            seed: 0,
            tolerance,
            samples_run: records.len(),
            max_residual,
            mean_residual,
            verdict,
            failures,
            records,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// One row per sample: `suite,geometry,n,sample_index,residual,pass`.
    /// Missing residuals are written as empty fields.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,geometry,n,sample_index,residual,pass\n");
        for r in &self.records {
            let residual = r.residual.map(|x| format!("{x:e}")).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{}",
                self.suite, r.geometry, r.n, r.sample_index, residual, r.pass
            )
            .expect("write to string");
        }
        out
    }
}
