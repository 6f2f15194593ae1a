//! Inverse-dynamics model classes and their identification.
//!
//! * physical: `û = θ_J δ²y + θ_fv δy`, fitted by linear least squares;
//! * black box: a tanh network on the raw regressor;
//! * PGNN: the physical model plus a network trained on its residual, fed
//!   with `[δ²y, δy, mod(y, 2π)]` so that whole-turn shifts of the
//!   position leave the prediction unchanged.

mod model;
mod nn;
mod physical;
mod regressor;
mod serialize;
mod train;
mod transform;

pub use model::{InverseModel, ModelKind, NnBlock, PgnnModel};
pub use nn::{param_count, NNGradient, NNParams};
pub use physical::{fit_physical, PhysicalFit, PhysicalParams, GRAM_TOLERANCE};
pub use regressor::{build_regressors, build_regressors_from, delta, delta2, RegressorSpec, Regressors};
pub use serialize::MODEL_FORMAT_VERSION;
pub use train::{fit_network, train_blackbox, train_residual, Adam, FittedNetwork, TrainConfig};
pub use transform::{input_transform, max_abs_scales, wrap_angle, InputTransform};
