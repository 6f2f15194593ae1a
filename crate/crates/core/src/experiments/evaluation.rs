use crate::config::{Controller, ExperimentConfig};
use crate::error::Result;
use crate::feedforward::FeedforwardEvaluator;
use crate::inverse_model::InverseModel;
use crate::motor_sim::{closed_loop_simulate, SimTrace};
use crate::trajectory::{back_and_forth, ReferenceProfile};

use super::metrics::{mae, max_abs_error, standstill_error};
use super::models::ModelSet;
use super::report::{MaeEntry, MaeReport};

/// Evaluation reference at peak velocity `velocity`: one warm-up
/// back-and-forth cycle followed by the measured cycle. Returns the profile
/// and the index of the measured cycle's first sample.
pub fn evaluation_profile(cfg: &ExperimentConfig, velocity: f64) -> Result<(ReferenceProfile, usize)> {
    let e = &cfg.evaluation;
    let limits = e.limits(velocity);
    let ts = cfg.sample_time();
    let warmup = back_and_forth(e.rotations, &limits, ts, e.dwell, 1)?;
    let full = back_and_forth(e.rotations, &limits, ts, e.dwell, 2)?;
    Ok((full, warmup.len()))
}

/// Closed-loop run of one controller; returns the measured window and its
/// metrics.
pub fn evaluate_controller(
    cfg: &ExperimentConfig,
    controller: Controller,
    model: Option<&InverseModel>,
    velocity: f64,
) -> Result<(MaeEntry, SimTrace)> {
    let (profile, start) = evaluation_profile(cfg, velocity)?;
    let trace = match model {
        Some(m) => {
            let mut ff = FeedforwardEvaluator::new(m, &profile);
            closed_loop_simulate(&profile, Some(&mut ff), &cfg.motor, &cfg.gains, cfg.sim_options())?
        }
        None => closed_loop_simulate(&profile, None, &cfg.motor, &cfg.gains, cfg.sim_options())?,
    };
    let window = trace.window(start..trace.len());
    let entry = MaeEntry {
        model: controller,
        velocity,
        mae: mae(&window.y_star, &window.y)?,
        max_error: max_abs_error(&window.y_star, &window.y)?,
        standstill_error: standstill_error(&window.y_star, &window.y)?,
        extrapolation: velocity > cfg.training_max_velocity(),
        trace_file: None,
    };
    Ok((entry, window))
}

fn evaluate_roster(
    cfg: &ExperimentConfig,
    models: &ModelSet,
    velocity: f64,
) -> Result<Vec<(MaeEntry, SimTrace)>> {
    cfg.evaluation
        .roster
        .iter()
        .map(|&c| evaluate_controller(cfg, c, models.require(c)?, velocity))
        .collect()
}

/// Every roster controller on the comparison velocity.
pub fn run_comparison(cfg: &ExperimentConfig, models: &ModelSet) -> Result<(MaeReport, Vec<SimTrace>)> {
    cfg.validate()?;
    let results = evaluate_roster(cfg, models, cfg.evaluation.comparison_velocity)?;
    let (entries, traces) = results.into_iter().unzip();
    Ok((
        MaeReport {
            experiment: "comparison".into(),
            training_max_velocity: cfg.training_max_velocity(),
            entries,
        },
        traces,
    ))
}

/// Every roster controller at every sweep velocity. Velocities are
/// independent jobs run on up to `jobs` threads; the report keeps the
/// configured order regardless of scheduling.
pub fn run_velocity_sweep(
    cfg: &ExperimentConfig,
    models: &ModelSet,
    jobs: usize,
) -> Result<(MaeReport, Vec<SimTrace>)> {
    cfg.validate()?;
    let velocities = &cfg.evaluation.velocities;
    let per_velocity = map_jobs(velocities, jobs, |v| evaluate_roster(cfg, models, v))?;
    let mut entries = Vec::new();
    let mut traces = Vec::new();
    for results in per_velocity {
        for (e, t) in results {
            entries.push(e);
            traces.push(t);
        }
    }
    Ok((
        MaeReport {
            experiment: "sweep".into(),
            training_max_velocity: cfg.training_max_velocity(),
            entries,
        },
        traces,
    ))
}

#[cfg(feature = "parallel")]
fn map_jobs<T: Send>(
    items: &[f64],
    jobs: usize,
    f: impl Fn(f64) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    use rayon::prelude::*;
    if jobs <= 1 {
        return items.iter().map(|&v| f(v)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| crate::error::Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(|&v| f(v)).collect())
}

#[cfg(not(feature = "parallel"))]
fn map_jobs<T>(items: &[f64], _jobs: usize, f: impl Fn(f64) -> Result<T>) -> Result<Vec<T>> {
    items.iter().map(|&v| f(v)).collect()
}
