//! Gradient-based training of the network part.
//!
//! Training is deterministic for a fixed seed: batch gradients are summed
//! over fixed-size chunks in index order, so the result does not depend on
//! how many worker threads evaluated the chunks.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::model::NnBlock;
use super::nn::NNParams;
use super::physical::PhysicalParams;
use super::regressor::Regressors;
use super::transform::{max_abs_scales, InputTransform};
use crate::error::{Error, Result};

const CHUNK: usize = 2048;

/// A loss larger than this multiple of the starting loss (the loss of the
/// zero-output network) counts as divergence.
const BLOWUP_FACTOR: f64 = 1e4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainConfig {
    /// Hidden-layer width n₁.
    pub hidden: usize,
    pub learning_rate: f64,
    /// Learning rate at the last epoch as a fraction of the initial one
    /// (exponential decay in between).
    pub final_lr_fraction: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub epochs: usize,
    /// Samples per update; 0 means full batch.
    pub batch_size: usize,
    pub seed: u64,
    /// λ in the penalty ‖λ·θ_NN‖².
    pub regularization: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            hidden: 16,
            learning_rate: 1e-2,
            final_lr_fraction: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            epochs: 2000,
            batch_size: 0,
            seed: 0,
            regularization: 0.0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::invalid("training.learning_rate", "must be strictly positive"));
        }
        if !(self.final_lr_fraction.is_finite() && self.final_lr_fraction > 0.0) {
            return Err(Error::invalid("training.final_lr_fraction", "must be strictly positive"));
        }
        if self.epochs == 0 {
            return Err(Error::invalid("training.epochs", "must be at least 1"));
        }
        if self.hidden == 0 {
            return Err(Error::invalid("training.hidden", "must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::invalid("training.beta1/beta2", "must lie in [0, 1)"));
        }
        if !(self.epsilon > 0.0) || !(self.regularization >= 0.0) {
            return Err(Error::invalid("training.epsilon/regularization", "out of range"));
        }
        Ok(())
    }

    fn learning_rate_at(&self, epoch: usize) -> f64 {
        if self.epochs <= 1 {
            return self.learning_rate;
        }
        let frac = epoch as f64 / (self.epochs - 1) as f64;
        self.learning_rate * self.final_lr_fraction.powf(frac)
    }
}

/// Adaptive-moment gradient descent over a flat parameter vector.
#[derive(Debug, Clone)]
pub struct Adam {
    pub learning_rate: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub fn new(n: usize, learning_rate: f64, beta1: f64, beta2: f64, epsilon: f64) -> Self {
        Adam {
            learning_rate,
            beta1,
            beta2,
            epsilon,
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    pub fn step(&mut self, theta: &mut [f64], grad: &[f64]) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for (((p, g), m), v) in theta.iter_mut().zip(grad).zip(&mut self.m).zip(&mut self.v) {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            *p -= self.learning_rate * (*m / c1) / ((*v / c2).sqrt() + self.epsilon);
        }
    }
}

/// A trained network with its input/output scaling and the loss history.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedNetwork {
    pub params: NNParams,
    pub feature_scales: Vec<f64>,
    pub output_scale: f64,
    /// `history[0]` is the loss before training, `history[e]` the loss after
    /// epoch `e`.
    pub history: Vec<f64>,
    /// Index into `history` of the returned parameters.
    pub best_epoch: usize,
}

impl FittedNetwork {
    pub fn best_loss(&self) -> f64 {
        self.history[self.best_epoch]
    }

    pub fn into_block(self, transform: InputTransform) -> NnBlock {
        NnBlock {
            transform,
            feature_scales: self.feature_scales,
            output_scale: self.output_scale,
            params: self.params,
        }
    }

    /// Prediction on an unscaled feature vector.
    pub fn predict(&self, x: &[f64]) -> f64 {
        let scaled: Vec<f64> = x.iter().zip(&self.feature_scales).map(|(v, s)| v / s).collect();
        self.output_scale * self.params.forward(&scaled)
    }
}

struct Problem<'a> {
    /// scaled features, row-major
    x: &'a [f64],
    dim: usize,
    targets: &'a [f64],
    output_scale: f64,
    reg2: f64,
}

impl Problem<'_> {
    /// Sum of squared errors and gradient of the summed loss over `idx`.
    fn chunk(&self, nn: &NNParams, idx: &[usize]) -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; nn.as_slice().len()];
        let mut sse = 0.0;
        let s = self.output_scale;
        let mut h = vec![0.0; nn.n_hidden()];
        for &i in idx {
            let x = &self.x[i * self.dim..(i + 1) * self.dim];
            let e = s * nn.forward_cached(x, &mut h) - self.targets[i];
            sse += e * e;
            nn.backprop_cached(x, &h, 2.0 * e * s, &mut grad);
        }
        (sse, grad)
    }

    /// Mean loss (with penalty) and its gradient over the samples in `idx`.
    fn loss_and_grad(&self, nn: &NNParams, idx: &[usize]) -> (f64, Vec<f64>) {
        let parts = map_chunks(idx, |c| self.chunk(nn, c));
        let n = idx.len().max(1) as f64;
        let mut grad = vec![0.0; nn.as_slice().len()];
        let mut sse = 0.0;
        for (s, g) in parts {
            sse += s;
            for (a, b) in grad.iter_mut().zip(&g) {
                *a += b;
            }
        }
        let mut penalty = 0.0;
        for (g, p) in grad.iter_mut().zip(nn.as_slice()) {
            *g = *g / n + 2.0 * self.reg2 * p;
            penalty += p * p;
        }
        (sse / n + self.reg2 * penalty, grad)
    }

    fn loss(&self, nn: &NNParams, idx: &[usize]) -> f64 {
        let sse: f64 = map_chunks(idx, |c| {
            c.iter()
                .map(|&i| {
                    let x = &self.x[i * self.dim..(i + 1) * self.dim];
                    let e = self.output_scale * nn.forward(x) - self.targets[i];
                    e * e
                })
                .sum::<f64>()
        })
        .into_iter()
        .sum();
        let penalty: f64 = nn.as_slice().iter().map(|p| p * p).sum();
        sse / idx.len().max(1) as f64 + self.reg2 * penalty
    }
}

#[cfg(feature = "parallel")]
fn map_chunks<T: Send>(idx: &[usize], f: impl Fn(&[usize]) -> T + Sync) -> Vec<T> {
    use rayon::prelude::*;
    if idx.len() <= CHUNK {
        return vec![f(idx)];
    }
    idx.par_chunks(CHUNK).map(|c| f(c)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_chunks<T>(idx: &[usize], f: impl Fn(&[usize]) -> T) -> Vec<T> {
    idx.chunks(CHUNK).map(f).collect()
}

/// Trains a fresh network on unscaled features `x` (row-major, `dim`
/// columns) against `targets`. Features are divided by their max-abs
/// value and the output is multiplied by the targets' max-abs value.
pub fn fit_network(x: &[f64], dim: usize, targets: &[f64], cfg: &TrainConfig) -> Result<FittedNetwork> {
    cfg.validate()?;
    if targets.is_empty() || dim == 0 {
        return Err(Error::EmptyTrace);
    }
    if x.len() != dim * targets.len() {
        return Err(Error::LengthMismatch {
            what: "features and targets",
            left: x.len() / dim,
            right: targets.len(),
        });
    }
    let feature_scales = max_abs_scales(x, dim);
    let scaled: Vec<f64> = x
        .chunks_exact(dim)
        .flat_map(|row| row.iter().zip(&feature_scales).map(|(v, s)| v / s))
        .collect();
    let output_scale = {
        let m = targets.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        if m > 0.0 && m.is_finite() {
            m
        } else {
            1.0
        }
    };
    let problem = Problem {
        x: &scaled,
        dim,
        targets,
        output_scale,
        reg2: cfg.regularization * cfg.regularization,
    };

    let mut nn = NNParams::init(dim, cfg.hidden, cfg.seed);
    let mut adam = Adam::new(nn.as_slice().len(), cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon);
    let all: Vec<usize> = (0..targets.len()).collect();
    let full_batch = cfg.batch_size == 0 || cfg.batch_size >= targets.len();
    let mut order = all.clone();
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_5eed_5eed_5eed);

    let mut history = Vec::with_capacity(cfg.epochs + 1);
    let mut best = (f64::INFINITY, 0usize, nn.clone());
    let mut record = |loss: f64, nn: &NNParams, history: &mut Vec<f64>| -> Result<()> {
        let epoch = history.len();
        let reference = history.first().copied().unwrap_or(loss);
        if !loss.is_finite() || loss > BLOWUP_FACTOR * reference.max(f64::MIN_POSITIVE) {
            return Err(Error::DivergedLoss { epoch });
        }
        history.push(loss);
        if loss < best.0 {
            best = (loss, epoch, nn.clone());
        }
        Ok(())
    };

    for epoch in 0..cfg.epochs {
        adam.learning_rate = cfg.learning_rate_at(epoch);
        if full_batch {
            let (loss, grad) = problem.loss_and_grad(&nn, &all);
            record(loss, &nn, &mut history)?;
            adam.step(nn.as_mut_slice(), &grad);
        } else {
            if epoch == 0 {
                record(problem.loss(&nn, &all), &nn, &mut history)?;
            }
            order.shuffle(&mut shuffle_rng);
            for batch in order.chunks(cfg.batch_size) {
                let (_, grad) = problem.loss_and_grad(&nn, batch);
                adam.step(nn.as_mut_slice(), &grad);
            }
            if epoch + 1 < cfg.epochs {
                record(problem.loss(&nn, &all), &nn, &mut history)?;
            }
        }
    }
    record(problem.loss(&nn, &all), &nn, &mut history)?;

    let (_, best_epoch, params) = best;
    Ok(FittedNetwork {
        params,
        feature_scales,
        output_scale,
        history,
        best_epoch,
    })
}

fn transformed_features(pairs: &Regressors, transform: InputTransform) -> Result<(Vec<f64>, usize)> {
    let spec = pairs.spec;
    transform.check(&spec)?;
    let dim = transform.output_dim(&spec);
    let mut x = vec![0.0; pairs.len() * dim];
    for (i, (phi, _)) in pairs.iter().enumerate() {
        transform.apply_into(&spec, phi, &mut x[i * dim..(i + 1) * dim])?;
    }
    Ok((x, dim))
}

/// Network on the residual of a frozen physical model, using the
/// physics-guided input transform.
pub fn train_residual(pairs: &Regressors, physical: &PhysicalParams, cfg: &TrainConfig) -> Result<FittedNetwork> {
    if pairs.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let spec = pairs.spec;
    let (x, dim) = transformed_features(pairs, InputTransform::PhysicsGuided)?;
    let residual = pairs
        .iter()
        .map(|(phi, u)| Ok(u - physical.predict(&spec, phi)?))
        .collect::<Result<Vec<f64>>>()?;
    fit_network(&x, dim, &residual, cfg)
}

/// Network on the raw regressor with no physical part.
pub fn train_blackbox(pairs: &Regressors, cfg: &TrainConfig) -> Result<FittedNetwork> {
    if pairs.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let (x, dim) = transformed_features(pairs, InputTransform::Identity)?;
    fit_network(&x, dim, pairs.targets(), cfg)
}
