use std::collections::BTreeMap;

use crate::config::{Controller, ExperimentConfig};
use crate::error::{Error, Result};
use crate::inverse_model::{
    build_regressors, fit_physical, train_blackbox, train_residual, InputTransform, InverseModel, PgnnModel,
    PhysicalFit,
};
use crate::motor_sim::SimTrace;

/// Inverse models available to the evaluation runs.
#[derive(Debug, Clone, Default)]
pub struct ModelSet {
    pub models: BTreeMap<Controller, InverseModel>,
    /// Training-loss history per network model.
    pub histories: BTreeMap<Controller, Vec<f64>>,
    pub physical_fit: Option<PhysicalFit>,
}

impl ModelSet {
    pub fn get(&self, c: Controller) -> Option<&InverseModel> {
        self.models.get(&c)
    }

    pub fn insert(&mut self, c: Controller, model: InverseModel) {
        self.models.insert(c, model);
    }

    /// The model for `c`, `None` for the feedback-only controller.
    pub fn require(&self, c: Controller) -> Result<Option<&InverseModel>> {
        match c {
            Controller::None => Ok(None),
            _ => self
                .models
                .get(&c)
                .map(Some)
                .ok_or_else(|| Error::Config(format!("no `{}` model available", c.as_str()))),
        }
    }
}

/// Fits the physical model on all regressor pairs of `trace`.
pub fn fit_physical_model(cfg: &ExperimentConfig, trace: &SimTrace) -> Result<(InverseModel, PhysicalFit)> {
    let spec = cfg.regressor_spec();
    let pairs = build_regressors(trace, &spec)?;
    let fit = fit_physical(&pairs)?;
    Ok((InverseModel::physical(spec, fit.params)?, fit))
}

/// Identifies every model of `wanted` that is not already in `set`. Networks
/// are trained on every `stride`-th pair.
pub fn identify_models(
    cfg: &ExperimentConfig,
    trace: &SimTrace,
    wanted: &[Controller],
    set: &mut ModelSet,
) -> Result<()> {
    let spec = cfg.regressor_spec();
    let missing: Vec<Controller> = wanted
        .iter()
        .copied()
        .filter(|c| *c != Controller::None && !set.models.contains_key(c))
        .collect();
    if missing.is_empty() {
        return Ok(());
    }
    let pairs = build_regressors(trace, &spec)?;
    let needs_physical = missing.contains(&Controller::Physical) || missing.contains(&Controller::Pgnn);
    let physical = if needs_physical {
        let fit = fit_physical(&pairs)?;
        set.physical_fit = Some(fit);
        Some(fit.params)
    } else {
        None
    };
    let sub = pairs.subsample(cfg.identification.stride);
    let train = cfg.train_config();
    for c in missing {
        match c {
            Controller::None => {}
            Controller::Physical => {
                let p = physical.expect("fitted above");
                set.insert(c, InverseModel::physical(spec, p)?);
            }
            Controller::Pgnn => {
                let p = physical.expect("fitted above");
                let net = train_residual(&sub, &p, &train)?;
                set.histories.insert(c, net.history.clone());
                let model = PgnnModel::new(spec, p, net.into_block(InputTransform::PhysicsGuided))?;
                set.insert(c, InverseModel::Pgnn(model));
            }
            Controller::Blackbox => {
                let net = train_blackbox(&sub, &train)?;
                set.histories.insert(c, net.history.clone());
                set.insert(c, InverseModel::black_box(spec, net.into_block(InputTransform::Identity))?);
            }
        }
    }
    Ok(())
}

/// Loss history as `epoch,loss` CSV.
pub fn loss_csv(history: &[f64]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["epoch", "loss"])?;
    for (e, l) in history.iter().enumerate() {
        w.write_record([e.to_string(), l.to_string()])?;
    }
    super::report::into_string(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::run_collection;
    use crate::motor_sim::MotorParams;

    fn quick() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.motor = MotorParams::ideal();
        cfg.collection.duration = 3.0;
        cfg.training.epochs = 20;
        cfg.training.hidden = 4;
        cfg.identification.stride = 50;
        cfg
    }

    #[test]
    fn trains_only_what_is_missing() {
        let cfg = quick();
        let trace = run_collection(&cfg).unwrap();
        let mut set = ModelSet::default();
        identify_models(&cfg, &trace, &[Controller::None, Controller::Physical], &mut set).unwrap();
        assert_eq!(set.models.len(), 1);
        assert!(set.histories.is_empty());
        let physical = set.get(Controller::Physical).unwrap().clone();
        identify_models(&cfg, &trace, &[Controller::Physical, Controller::Pgnn, Controller::Blackbox], &mut set).unwrap();
        assert_eq!(set.models.len(), 3);
        assert_eq!(set.get(Controller::Physical), Some(&physical));
        assert_eq!(set.histories[&Controller::Pgnn].len(), 21);
    }

    #[test]
    fn missing_model_is_a_config_error() {
        assert!(ModelSet::default().require(Controller::Pgnn).is_err());
        assert!(ModelSet::default().require(Controller::None).unwrap().is_none());
    }

    #[test]
    fn loss_csv_shape() {
        assert_eq!(loss_csv(&[1.0, 0.5]).unwrap(), "epoch,loss\n0,1\n1,0.5\n");
    }
}
