use crate::config::{CollectionFeedforward, ExperimentConfig};
use crate::error::Result;
use crate::feedforward::FeedforwardEvaluator;
use crate::inverse_model::InverseModel;
use crate::motor_sim::{closed_loop_simulate, SimTrace};
use crate::trajectory::{back_and_forth, cycle_duration, ReferenceProfile};

/// Back-and-forth reference for data collection, cut to exactly
/// `round(duration / T_s)` samples.
pub fn collection_profile(cfg: &ExperimentConfig) -> Result<ReferenceProfile> {
    let c = &cfg.collection;
    let ts = cfg.sample_time();
    let cycle = cycle_duration(c.rotations, &c.limits, c.dwell)?;
    let reps = ((c.duration - c.dwell).max(0.0) / cycle).ceil() as usize + 1;
    let profile = back_and_forth(c.rotations, &c.limits, ts, c.dwell, reps)?;
    Ok(profile.truncated(cfg.collection_samples().max(1)))
}

/// Records the closed-loop training trace.
pub fn run_collection(cfg: &ExperimentConfig) -> Result<SimTrace> {
    cfg.validate()?;
    let profile = collection_profile(cfg)?;
    match cfg.collection.feedforward {
        CollectionFeedforward::None => {
            closed_loop_simulate(&profile, None, &cfg.motor, &cfg.gains, cfg.sim_options())
        }
        CollectionFeedforward::Physical => {
            let model = InverseModel::physical(cfg.regressor_spec(), cfg.nominal_physical())?;
            let mut ff = FeedforwardEvaluator::new(&model, &profile);
            closed_loop_simulate(&profile, Some(&mut ff), &cfg.motor, &cfg.gains, cfg.sim_options())
        }
    }
}
