//! Machine-readable run output: a JSON report and histogram CSVs.
//!
//! The JSON layout is described in `docs/report-schema.md`. Thresholds are
//! written as shortest round-trip decimals so a reader recovers the exact
//! `f64`; each one is accompanied by its integer rounding (halves up).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::histogram::Histogram;
use crate::image::GrayImage;
use crate::threshold::{IterationStep, Method, ThresholdResult};

/// Tag recording how the starting threshold was obtained.
pub const ESTIMATE_SOURCE: &str = "global_mean";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error("a report needs at least one method result")]
    NoResults,
    #[error("{method} result was passed in the {slot} slot")]
    WrongSlot { method: Method, slot: Method },
}

/// One method's result together with the files it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodRun {
    pub result: ThresholdResult,
    pub output_path: String,
    pub histogram_output_path: Option<String>,
}

/// Everything recorded about one CLI invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    input_path: String,
    width: usize,
    height: usize,
    histogram_input_path: Option<String>,
    mean: Option<MethodRun>,
    iterative: Option<MethodRun>,
}

impl RunReport {
    pub fn new(
        input_path: impl Into<String>,
        image: &GrayImage,
        histogram_input_path: Option<String>,
        mean: Option<MethodRun>,
        iterative: Option<MethodRun>,
    ) -> Result<Self, ReportError> {
        if mean.is_none() && iterative.is_none() {
            return Err(ReportError::NoResults);
        }
        for (run, slot) in [(&mean, Method::Mean), (&iterative, Method::Iterative)] {
            if let Some(run) = run {
                if run.result.method != slot {
                    return Err(ReportError::WrongSlot {
                        method: run.result.method,
                        slot,
                    });
                }
            }
        }
        Ok(Self {
            input_path: input_path.into(),
            width: image.width(),
            height: image.height(),
            histogram_input_path,
            mean,
            iterative,
        })
    }

    pub fn input_path(&self) -> &str {
        &self.input_path
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn mean(&self) -> Option<&MethodRun> {
        self.mean.as_ref()
    }

    pub fn iterative(&self) -> Option<&MethodRun> {
        self.iterative.as_ref()
    }

    pub fn to_document(&self) -> ReportDocument {
        ReportDocument {
            input_path: self.input_path.clone(),
            image: Dimensions {
                width: self.width,
                height: self.height,
            },
            estimate_source: ESTIMATE_SOURCE.to_string(),
            histogram_input_path: self.histogram_input_path.clone(),
            methods: Methods {
                mean: self.mean.as_ref().map(MethodSection::from_run),
                iterative: self.iterative.as_ref().map(MethodSection::from_run),
            },
        }
    }
}

/// Serialized form of [`RunReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub input_path: String,
    pub image: Dimensions,
    pub estimate_source: String,
    pub histogram_input_path: Option<String>,
    pub methods: Methods,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimensions {
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Methods {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<MethodSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterative: Option<MethodSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSection {
    pub method: String,
    pub output_path: String,
    pub histogram_output_path: Option<String>,
    pub estimate: f64,
    pub estimate_rounded: u8,
    pub optimum: f64,
    pub rounded: u8,
    pub converged: bool,
    pub degenerate: bool,
    pub iterations: Vec<StepRecord>,
}

impl MethodSection {
    fn from_run(run: &MethodRun) -> Self {
        let r = &run.result;
        Self {
            method: r.method.name().to_string(),
            output_path: run.output_path.clone(),
            histogram_output_path: run.histogram_output_path.clone(),
            estimate: r.estimate.value(),
            estimate_rounded: r.estimate.rounded(),
            optimum: r.optimum.value(),
            rounded: r.optimum.rounded(),
            converged: r.converged,
            degenerate: r.degenerate,
            iterations: r.iterations.iter().map(StepRecord::from).collect(),
        }
    }
}

/// One iteration; empty classes are `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub estimate: f64,
    pub m1: Option<f64>,
    pub m2: Option<f64>,
    pub total_mean: Option<f64>,
}

impl From<&IterationStep> for StepRecord {
    fn from(step: &IterationStep) -> Self {
        Self {
            estimate: step.estimate.value(),
            m1: step.m1.as_ref().map(|l| l.value()),
            m2: step.m2.as_ref().map(|l| l.value()),
            total_mean: step.total_mean.as_ref().map(|l| l.value()),
        }
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn emit_report(report: &RunReport) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&report.to_document())
        .expect("report document always serializes");
    out.push(b'\n');
    out
}

/// `value,count` header followed by one row per level, 0 through 255.
pub fn emit_histogram_csv(hist: &Histogram) -> Vec<u8> {
    let mut out = String::with_capacity(16 + 256 * 8);
    out.push_str("value,count\n");
    for (v, c) in hist.counts().iter().enumerate() {
        let _ = writeln!(out, "{v},{c}");
    }
    out.into_bytes()
}
