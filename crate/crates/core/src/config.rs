//! Experiment configuration file (TOML, schema version 1).
//!
//! Every section is optional and falls back to the defaults below; unknown
//! keys are rejected. All randomness is derived from the single top-level
//! `seed`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::inverse_model::{PhysicalParams, RegressorSpec, TrainConfig};
use crate::motor_sim::{ControllerGains, MotorParams, SimOptions};
use crate::trajectory::MotionLimits;

pub const SCHEMA_VERSION: u32 = 1;

/// Feedforward variants compared in the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Controller {
    None,
    Physical,
    Blackbox,
    Pgnn,
}

impl Controller {
    pub fn as_str(self) -> &'static str {
        match self {
            Controller::None => "none",
            Controller::Physical => "physical",
            Controller::Blackbox => "blackbox",
            Controller::Pgnn => "pgnn",
        }
    }
}

/// Feedforward active while recording training data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CollectionFeedforward {
    #[default]
    None,
    /// Physical model with the configured (nominal) J and f_v.
    Physical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    /// RK4 steps per controller period.
    pub substeps: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig { substeps: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CollectionConfig {
    /// Stroke amplitude in full turns; the motor moves between ±rotations.
    pub rotations: f64,
    pub limits: MotionLimits,
    /// Rest after every stroke, s.
    pub dwell: f64,
    /// Length of the recorded trace, s.
    pub duration: f64,
    pub feedforward: CollectionFeedforward,
}

impl Default for CollectionConfig {
    fn default() -> Self {
        CollectionConfig {
            rotations: 3.0,
            limits: MotionLimits::default(),
            dwell: 0.2,
            duration: 20.0,
            feedforward: CollectionFeedforward::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IdentificationConfig {
    pub n_a: usize,
    pub n_b: usize,
    pub n_k: usize,
    /// Every `stride`-th regressor pair is used for network training; the
    /// physical fit always uses all pairs.
    pub stride: usize,
}

impl Default for IdentificationConfig {
    fn default() -> Self {
        IdentificationConfig {
            n_a: 4,
            n_b: 0,
            n_k: 1,
            stride: 10,
        }
    }
}

/// Network training settings; the seed comes from the top level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainingConfig {
    pub hidden: usize,
    pub learning_rate: f64,
    pub final_lr_fraction: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub regularization: f64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        let t = TrainConfig::default();
        TrainingConfig {
            hidden: t.hidden,
            learning_rate: t.learning_rate,
            final_lr_fraction: t.final_lr_fraction,
            beta1: t.beta1,
            beta2: t.beta2,
            epsilon: t.epsilon,
            epochs: t.epochs,
            batch_size: t.batch_size,
            regularization: t.regularization,
        }
    }
}

impl TrainingConfig {
    pub fn to_train_config(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            hidden: self.hidden,
            learning_rate: self.learning_rate,
            final_lr_fraction: self.final_lr_fraction,
            beta1: self.beta1,
            beta2: self.beta2,
            epsilon: self.epsilon,
            epochs: self.epochs,
            batch_size: self.batch_size,
            seed,
            regularization: self.regularization,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvaluationConfig {
    /// Peak velocities of the sweep, rad/s, strictly increasing.
    pub velocities: Vec<f64>,
    pub roster: Vec<Controller>,
    /// Peak velocity of the comparison run, rad/s.
    pub comparison_velocity: f64,
    pub rotations: f64,
    pub dwell: f64,
    pub max_acceleration: f64,
    pub max_jerk: f64,
    /// Persist the measured window of every sweep run (large at low speed).
    pub save_sweep_traces: bool,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig {
            velocities: vec![2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0],
            roster: vec![Controller::None, Controller::Physical, Controller::Blackbox, Controller::Pgnn],
            comparison_velocity: 15.0,
            rotations: 3.0,
            dwell: 0.2,
            max_acceleration: 80.0,
            max_jerk: 1000.0,
            save_sweep_traces: false,
        }
    }
}

impl EvaluationConfig {
    pub fn limits(&self, velocity: f64) -> MotionLimits {
        MotionLimits {
            v_max: velocity,
            a_max: self.max_acceleration,
            j_max: self.max_jerk,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CosineConfig {
    /// Hidden widths of the neuron-count sweep.
    pub n1_list: Vec<usize>,
    /// Hidden width of the extrapolation comparison.
    pub n1: usize,
    /// Training points per period.
    pub samples: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub final_lr_fraction: f64,
    /// Upper bound on the transformed network's error on [2π, 6π].
    pub extrapolation_tolerance: f64,
    /// Lower bound on the raw network's error on [2π, 6π].
    pub raw_error_floor: f64,
    /// RMS error on the training range that counts as "accurate".
    pub accuracy: f64,
}

impl Default for CosineConfig {
    fn default() -> Self {
        CosineConfig {
            n1_list: vec![1, 2, 4, 8, 16],
            n1: 2,
            samples: 200,
            epochs: 40_000,
            learning_rate: 0.02,
            final_lr_fraction: 0.01,
            extrapolation_tolerance: 0.05,
            raw_error_floor: 0.5,
            accuracy: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub motor: MotorParams,
    #[serde(default)]
    pub gains: ControllerGains,
    #[serde(default)]
    pub simulation: SimulationConfig,
    #[serde(default)]
    pub collection: CollectionConfig,
    #[serde(default)]
    pub identification: IdentificationConfig,
    #[serde(default)]
    pub training: TrainingConfig,
    #[serde(default)]
    pub evaluation: EvaluationConfig,
    #[serde(default)]
    pub cosine: CosineConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            seed: 0,
            output_dir: None,
            motor: MotorParams::default(),
            gains: ControllerGains::default(),
            simulation: SimulationConfig::default(),
            collection: CollectionConfig::default(),
            identification: IdentificationConfig::default(),
            training: TrainingConfig::default(),
            evaluation: EvaluationConfig::default(),
            cosine: CosineConfig::default(),
        }
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(key, format!("must be strictly positive, got {v}")))
    }
}

fn non_negative(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(key, format!("must be non-negative, got {v}")))
    }
}

impl ExperimentConfig {
    /// Parses and validates a TOML document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// SHA-256 (hex) of the canonical serialization.
    pub fn hash(&self) -> Result<String> {
        Ok(sha256_hex(self.to_toml()?.as_bytes()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::invalid(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        self.motor.validate()?;
        self.gains.validate()?;
        if self.simulation.substeps == 0 {
            return Err(Error::invalid("simulation.substeps", "must be at least 1"));
        }

        let c = &self.collection;
        positive("collection.rotations", c.rotations)?;
        positive("collection.duration", c.duration)?;
        non_negative("collection.dwell", c.dwell)?;
        c.limits
            .validate()
            .map_err(|e| Error::invalid("collection.limits", e.to_string()))?;

        self.regressor_spec().validate()?;
        if self.identification.stride == 0 {
            return Err(Error::invalid("identification.stride", "must be at least 1"));
        }
        self.train_config().validate()?;

        let e = &self.evaluation;
        if e.velocities.is_empty() {
            return Err(Error::invalid("evaluation.velocities", "must not be empty"));
        }
        for v in &e.velocities {
            positive("evaluation.velocities", *v)?;
        }
        if e.velocities.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("evaluation.velocities", "must be strictly increasing"));
        }
        if e.roster.is_empty() {
            return Err(Error::invalid("evaluation.roster", "must name at least one controller"));
        }
        let mut seen = e.roster.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != e.roster.len() {
            return Err(Error::invalid("evaluation.roster", "contains duplicates"));
        }
        positive("evaluation.comparison_velocity", e.comparison_velocity)?;
        positive("evaluation.rotations", e.rotations)?;
        non_negative("evaluation.dwell", e.dwell)?;
        positive("evaluation.max_acceleration", e.max_acceleration)?;
        positive("evaluation.max_jerk", e.max_jerk)?;
        let needs_window = e
            .roster
            .iter()
            .any(|c| matches!(c, Controller::Physical | Controller::Pgnn));
        if needs_window && !self.regressor_spec().has_centered_window() {
            return Err(Error::invalid(
                "identification",
                "physical and pgnn models need n_a >= 4 and n_k >= 1",
            ));
        }

        let k = &self.cosine;
        if k.n1_list.is_empty() || k.n1_list.contains(&0) {
            return Err(Error::invalid("cosine.n1_list", "must be non-empty with entries >= 1"));
        }
        if k.n1 == 0 {
            return Err(Error::invalid("cosine.n1", "must be at least 1"));
        }
        if k.samples < 2 {
            return Err(Error::invalid("cosine.samples", "must be at least 2"));
        }
        if k.epochs == 0 {
            return Err(Error::invalid("cosine.epochs", "must be at least 1"));
        }
        positive("cosine.learning_rate", k.learning_rate)?;
        positive("cosine.final_lr_fraction", k.final_lr_fraction)?;
        positive("cosine.extrapolation_tolerance", k.extrapolation_tolerance)?;
        positive("cosine.raw_error_floor", k.raw_error_floor)?;
        positive("cosine.accuracy", k.accuracy)?;
        Ok(())
    }

    pub fn sample_time(&self) -> f64 {
        self.gains.sample_time
    }

    pub fn regressor_spec(&self) -> RegressorSpec {
        let i = &self.identification;
        RegressorSpec {
            n_a: i.n_a,
            n_b: i.n_b,
            n_k: i.n_k,
            sample_time: self.gains.sample_time,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        self.training.to_train_config(self.seed)
    }

    pub fn sim_options(&self) -> SimOptions {
        SimOptions {
            substeps: self.simulation.substeps,
            initial: None,
        }
    }

    /// Nominal physical model built from the configured plant constants.
    pub fn nominal_physical(&self) -> PhysicalParams {
        PhysicalParams {
            inertia: self.motor.inertia,
            viscous: self.motor.viscous_friction,
        }
    }

    /// Number of samples in the recorded training trace.
    pub fn collection_samples(&self) -> usize {
        (self.collection.duration / self.gains.sample_time).round() as usize
    }

    /// Peak velocity seen during training; sweep points above it extrapolate.
    pub fn training_max_velocity(&self) -> f64 {
        self.collection.limits.v_max
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        let _ = write!(s, "{b:02x}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_gives_defaults() {
        let cfg = ExperimentConfig::from_toml_str("schema_version = 1\n").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
    }

    #[test]
    fn toml_roundtrip() {
        let cfg = ExperimentConfig {
            seed: 42,
            output_dir: Some("out".into()),
            ..ExperimentConfig::default()
        };
        let back = ExperimentConfig::from_toml_str(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = ExperimentConfig::from_toml_str("schema_version = 1\n[motor]\ninertai = 1.0\n").unwrap_err();
        assert!(err.to_string().contains("inertai"), "{err}");
    }

    #[test]
    fn missing_schema_version_is_rejected() {
        let err = ExperimentConfig::from_toml_str("seed = 1\n").unwrap_err();
        assert!(err.to_string().contains("schema_version"), "{err}");
    }

    #[test]
    fn nonpositive_inertia_names_the_key() {
        let err = ExperimentConfig::from_toml_str("schema_version = 1\n[motor]\ninertia = 0.0\n").unwrap_err();
        assert!(err.to_string().contains("inertia"), "{err}");
    }

    #[test]
    fn velocities_must_be_sorted_and_positive() {
        for v in ["[5.0, 2.5]", "[0.0, 1.0]", "[1.0, 1.0]", "[]"] {
            let text = format!("schema_version = 1\n[evaluation]\nvelocities = {v}\n");
            let err = ExperimentConfig::from_toml_str(&text).unwrap_err();
            assert!(err.to_string().contains("velocities"), "{err}");
        }
    }

    #[test]
    fn training_seed_key_is_not_accepted() {
        assert!(ExperimentConfig::from_toml_str("schema_version = 1\n[training]\nseed = 3\n").is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::default();
        let b = ExperimentConfig { seed: 1, ..a.clone() };
        assert_eq!(a.hash().unwrap(), a.clone().hash().unwrap());
        assert_ne!(a.hash().unwrap(), b.hash().unwrap());
        assert_eq!(a.hash().unwrap().len(), 64);
    }

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn default_collection_is_twenty_seconds() {
        assert_eq!(ExperimentConfig::default().collection_samples(), 200_000);
    }
}
