//! End-to-end studies: data collection, model identification, tracking
//! comparisons, the velocity sweep and the cosine extrapolation demo.
//!
//! The `*_to` functions run a study and persist its outputs plus a manifest
//! into a directory; they are what the command-line tool calls.

mod artifacts;
mod collection;
mod cosine;
mod evaluation;
mod metrics;
mod models;
mod report;

use std::path::Path;

pub use artifacts::{ArtifactRecord, ArtifactWriter, Manifest};
pub use collection::{collection_profile, run_collection};
pub use cosine::{run_cosine_demo, run_cosine_extrapolation, CosineInput, CosineReport, ExtrapolationResult, SweepPoint};
pub use evaluation::{evaluate_controller, evaluation_profile, run_comparison, run_velocity_sweep};
pub use metrics::{mae, max_abs_error, standstill_error};
pub use models::{fit_physical_model, identify_models, loss_csv, ModelSet};
pub use report::{long_csv, LongRow, MaeEntry, MaeReport, LONG_HEADER};

use crate::config::{Controller, ExperimentConfig};
use crate::error::{Error, Result};
use crate::inverse_model::{InverseModel, PhysicalFit};
use crate::motor_sim::SimTrace;

pub const TRACE_FILE: &str = "trace.csv";

fn model_file(c: Controller) -> String {
    format!("{}.json", c.as_str())
}

fn trace_bytes(trace: &SimTrace) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    trace.write_csv(&mut buf)?;
    Ok(buf)
}

/// Records the training trace into `dir/trace.csv`.
pub fn collect_to(cfg: &ExperimentConfig, dir: &Path) -> Result<(SimTrace, Manifest)> {
    let trace = run_collection(cfg)?;
    let mut w = ArtifactWriter::new(dir, "collect", cfg)?;
    w.write(TRACE_FILE, &trace_bytes(&trace)?)?;
    w.set_sample_count(trace.len());
    Ok((trace, w.finish()?))
}

/// Fits the physical model on a recorded trace into `dir/physical.json`.
pub fn fit_to(cfg: &ExperimentConfig, trace_path: &Path, dir: &Path) -> Result<(PhysicalFit, Manifest)> {
    cfg.validate()?;
    let trace = SimTrace::load(trace_path)?;
    let (model, fit) = fit_physical_model(cfg, &trace)?;
    let mut w = ArtifactWriter::new(dir, "fit", cfg)?;
    w.record_input(trace_path)?;
    w.write(&model_file(Controller::Physical), model.to_json()?.as_bytes())?;
    w.set_sample_count(trace.len());
    Ok((fit, w.finish()?))
}

/// Trains a network model (`pgnn` or `blackbox`) on a recorded trace. The
/// physical part of a PGNN is fitted inline and saved as well.
pub fn train_to(
    cfg: &ExperimentConfig,
    trace_path: &Path,
    kind: Controller,
    dir: &Path,
) -> Result<(ModelSet, Manifest)> {
    cfg.validate()?;
    if !matches!(kind, Controller::Pgnn | Controller::Blackbox) {
        return Err(Error::invalid("kind", "must be pgnn or blackbox"));
    }
    let trace = SimTrace::load(trace_path)?;
    let mut set = ModelSet::default();
    let wanted: &[Controller] = if kind == Controller::Pgnn { &[Controller::Physical, kind] } else { &[kind] };
    identify_models(cfg, &trace, wanted, &mut set)?;
    let mut w = ArtifactWriter::new(dir, &format!("train-{}", kind.as_str()), cfg)?;
    w.record_input(trace_path)?;
    for (c, m) in &set.models {
        w.write(&model_file(*c), m.to_json()?.as_bytes())?;
    }
    if let Some(h) = set.histories.get(&kind) {
        w.write(&format!("{}_loss.csv", kind.as_str()), loss_csv(h)?.as_bytes())?;
    }
    w.set_sample_count(trace.len());
    Ok((set, w.finish()?))
}

/// Models for the roster: loaded from `models_dir/<kind>.json` where
/// present, otherwise identified from `trace` (collected if `None`).
pub fn prepare_models(
    cfg: &ExperimentConfig,
    models_dir: Option<&Path>,
    trace: Option<&SimTrace>,
) -> Result<ModelSet> {
    let mut set = ModelSet::default();
    if let Some(dir) = models_dir {
        for &c in &cfg.evaluation.roster {
            if c == Controller::None {
                continue;
            }
            let path = dir.join(model_file(c));
            if path.exists() {
                let model = InverseModel::load(&path)?;
                if *model.regressor() != cfg.regressor_spec() {
                    return Err(Error::Config(format!(
                        "{} was identified with a different regressor than the config describes",
                        path.display()
                    )));
                }
                set.insert(c, model);
            }
        }
    }
    let missing = cfg
        .evaluation
        .roster
        .iter()
        .any(|&c| c != Controller::None && set.get(c).is_none());
    if missing {
        let collected;
        let trace = match trace {
            Some(t) => t,
            None => {
                collected = run_collection(cfg)?;
                &collected
            }
        };
        identify_models(cfg, trace, &cfg.evaluation.roster, &mut set)?;
    }
    Ok(set)
}

fn write_report(w: &mut ArtifactWriter, stem: &str, report: &MaeReport) -> Result<()> {
    w.write(&format!("{stem}.csv"), report.to_csv()?.as_bytes())?;
    w.write(&format!("{stem}.json"), report.to_json()?.as_bytes())?;
    w.write(&format!("{stem}_long.csv"), report.to_long_csv()?.as_bytes())?;
    Ok(())
}

fn velocity_tag(v: f64) -> String {
    v.to_string().replace('.', "p")
}

/// Comparison run with reports and the measured window of every controller.
pub fn compare_to(cfg: &ExperimentConfig, models: &ModelSet, dir: &Path) -> Result<(MaeReport, Manifest)> {
    let (mut report, traces) = run_comparison(cfg, models)?;
    let mut w = ArtifactWriter::new(dir, "compare", cfg)?;
    for (e, t) in report.entries.iter_mut().zip(&traces) {
        let name = format!("comparison_{}.csv", e.model.as_str());
        w.write(&name, &trace_bytes(t)?)?;
        e.trace_file = Some(name);
    }
    write_report(&mut w, "comparison", &report)?;
    Ok((report, w.finish()?))
}

/// Velocity sweep with reports; measured windows only if configured.
pub fn sweep_to(cfg: &ExperimentConfig, models: &ModelSet, jobs: usize, dir: &Path) -> Result<(MaeReport, Manifest)> {
    let (mut report, traces) = run_velocity_sweep(cfg, models, jobs)?;
    let mut w = ArtifactWriter::new(dir, "sweep", cfg)?;
    if cfg.evaluation.save_sweep_traces {
        for (e, t) in report.entries.iter_mut().zip(&traces) {
            let name = format!("sweep_{}_v{}.csv", e.model.as_str(), velocity_tag(e.velocity));
            w.write(&name, &trace_bytes(t)?)?;
            e.trace_file = Some(name);
        }
    }
    write_report(&mut w, "sweep", &report)?;
    Ok((report, w.finish()?))
}

/// Closed-loop run of one controller at one velocity: the measured window
/// and its metrics.
pub fn simulate_to(
    cfg: &ExperimentConfig,
    controller: Controller,
    models: &ModelSet,
    velocity: f64,
    dir: &Path,
) -> Result<(MaeEntry, Manifest)> {
    cfg.validate()?;
    if !(velocity.is_finite() && velocity > 0.0) {
        return Err(Error::invalid("velocity", "must be strictly positive"));
    }
    let (mut entry, trace) = evaluate_controller(cfg, controller, models.require(controller)?, velocity)?;
    let mut w = ArtifactWriter::new(dir, "simulate", cfg)?;
    let name = format!("simulate_{}_v{}.csv", controller.as_str(), velocity_tag(velocity));
    w.write(&name, &trace_bytes(&trace)?)?;
    entry.trace_file = Some(name);
    let mut json = serde_json::to_string_pretty(&entry)?;
    json.push('\n');
    w.write("simulate.json", json.as_bytes())?;
    w.set_sample_count(trace.len());
    Ok((entry, w.finish()?))
}

pub fn cosine_to(cfg: &ExperimentConfig, dir: &Path) -> Result<(CosineReport, Manifest)> {
    cfg.validate()?;
    let report = run_cosine_demo(&cfg.cosine, cfg.seed)?;
    let mut w = ArtifactWriter::new(dir, "demo-cosine", cfg)?;
    w.write("cosine.json", report.to_json()?.as_bytes())?;
    w.write("cosine.csv", report.to_csv()?.as_bytes())?;
    w.write("cosine_curves.csv", report.curves_csv()?.as_bytes())?;
    Ok((report, w.finish()?))
}
