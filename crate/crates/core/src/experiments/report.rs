use serde::{Deserialize, Serialize};

use crate::config::Controller;
use crate::error::{Error, Result};

/// Tracking accuracy of one controller at one reference velocity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaeEntry {
    pub model: Controller,
    /// Peak reference velocity, rad/s.
    pub velocity: f64,
    pub mae: f64,
    pub max_error: f64,
    /// Mean |error| while the reference is at rest.
    pub standstill_error: f64,
    /// Above the peak velocity seen during training.
    pub extrapolation: bool,
    /// Persisted measured window, relative to the output directory.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace_file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaeReport {
    pub experiment: String,
    pub training_max_velocity: f64,
    pub entries: Vec<MaeEntry>,
}

/// One row of the long-format plot table.
#[derive(Debug, Clone, PartialEq)]
pub struct LongRow {
    pub experiment: String,
    pub model: String,
    pub velocity: f64,
    pub metric: &'static str,
    pub value: f64,
}

pub const LONG_HEADER: [&str; 5] = ["experiment", "model", "velocity", "metric", "value"];

impl MaeReport {
    pub fn get(&self, model: Controller, velocity: f64) -> Option<&MaeEntry> {
        self.entries.iter().find(|e| e.model == model && e.velocity == velocity)
    }

    pub fn velocities(&self) -> Vec<f64> {
        let mut v: Vec<f64> = Vec::new();
        for e in &self.entries {
            if !v.contains(&e.velocity) {
                v.push(e.velocity);
            }
        }
        v
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "model",
            "velocity",
            "mae",
            "max_error",
            "standstill_error",
            "extrapolation",
            "trace_file",
        ])?;
        for e in &self.entries {
            w.write_record([
                e.model.as_str().to_string(),
                e.velocity.to_string(),
                e.mae.to_string(),
                e.max_error.to_string(),
                e.standstill_error.to_string(),
                e.extrapolation.to_string(),
                e.trace_file.clone().unwrap_or_default(),
            ])?;
        }
        into_string(w)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn long_rows(&self) -> Vec<LongRow> {
        let mut rows = Vec::with_capacity(3 * self.entries.len());
        for e in &self.entries {
            for (metric, value) in [
                ("mae", e.mae),
                ("max_error", e.max_error),
                ("standstill_error", e.standstill_error),
            ] {
                rows.push(LongRow {
                    experiment: self.experiment.clone(),
                    model: e.model.as_str().to_string(),
                    velocity: e.velocity,
                    metric,
                    value,
                });
            }
        }
        rows
    }

    pub fn to_long_csv(&self) -> Result<String> {
        long_csv(&self.long_rows())
    }
}

pub fn long_csv(rows: &[LongRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(LONG_HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment.clone(),
            r.model.clone(),
            r.velocity.to_string(),
            r.metric.to_string(),
            r.value.to_string(),
        ])?;
    }
    into_string(w)
}

pub(crate) fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))?;
    String::from_utf8(bytes).map_err(|e| Error::Shape(e.to_string()))
}
