//! Extrapolation of `u = cos(y)` with and without the angle-wrapping input
//! transform.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::config::CosineConfig;
use crate::error::Result;
use crate::inverse_model::{fit_network, wrap_angle, FittedNetwork, TrainConfig};

use super::report::into_string;

/// Points of the evaluation grid on [0, 6π].
const GRID: usize = 3001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CosineInput {
    /// The network sees `y`.
    Raw,
    /// The network sees `mod(y, 2π)`.
    Mod,
}

impl CosineInput {
    pub fn as_str(self) -> &'static str {
        match self {
            CosineInput::Raw => "raw",
            CosineInput::Mod => "mod",
        }
    }

    fn feature(self, y: f64) -> f64 {
        match self {
            CosineInput::Raw => y,
            CosineInput::Mod => wrap_angle(y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationResult {
    pub input: CosineInput,
    pub n1: usize,
    /// Max |error| on the training period [0, 2π).
    pub in_range_max_error: f64,
    /// Max |error| on [2π, 6π].
    pub extrapolation_max_error: f64,
    pub final_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub input: CosineInput,
    pub n1: usize,
    /// RMS error on the full training range [0, 6π].
    pub rms_error: f64,
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosineReport {
    pub seed: u64,
    pub accuracy: f64,
    pub extrapolation: Vec<ExtrapolationResult>,
    pub sweep: Vec<SweepPoint>,
    /// Smallest swept width reaching `accuracy`, per input; `None` if no
    /// width in the sweep does.
    pub raw_neurons_needed: Option<usize>,
    pub mod_neurons_needed: Option<usize>,
    /// Evaluation grid for plotting: `[y, cos y, raw net, mod net]` rows.
    #[serde(skip)]
    pub curves: Vec<[f64; 4]>,
}

impl CosineReport {
    pub fn extrapolation_of(&self, input: CosineInput) -> &ExtrapolationResult {
        self.extrapolation
            .iter()
            .find(|r| r.input == input)
            .expect("both inputs are always reported")
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Long-format table: `section,input,n1,metric,value`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["section", "input", "n1", "metric", "value"])?;
        for r in &self.extrapolation {
            for (metric, v) in [
                ("in_range_max_error", r.in_range_max_error),
                ("extrapolation_max_error", r.extrapolation_max_error),
                ("final_loss", r.final_loss),
            ] {
                w.write_record(["extrapolation", r.input.as_str(), &r.n1.to_string(), metric, &v.to_string()])?;
            }
        }
        for p in &self.sweep {
            for (metric, v) in [("rms_error", p.rms_error), ("max_error", p.max_error)] {
                w.write_record(["sweep", p.input.as_str(), &p.n1.to_string(), metric, &v.to_string()])?;
            }
        }
        into_string(w)
    }

    pub fn curves_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["y", "target", "raw", "mod"])?;
        for row in &self.curves {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        into_string(w)
    }
}

fn train(input: CosineInput, ys: &[f64], n1: usize, cfg: &CosineConfig, seed: u64) -> Result<FittedNetwork> {
    let x: Vec<f64> = ys.iter().map(|&y| input.feature(y)).collect();
    let t: Vec<f64> = ys.iter().map(|y| y.cos()).collect();
    let train_cfg = TrainConfig {
        hidden: n1,
        learning_rate: cfg.learning_rate,
        final_lr_fraction: cfg.final_lr_fraction,
        epochs: cfg.epochs,
        seed,
        ..TrainConfig::default()
    };
    fit_network(&x, 1, &t, &train_cfg)
}

fn predict(net: &FittedNetwork, input: CosineInput, y: f64) -> f64 {
    net.predict(&[input.feature(y)])
}

fn grid(periods: f64, n: usize, closed: bool) -> Vec<f64> {
    let denom = if closed { (n - 1) as f64 } else { n as f64 };
    (0..n).map(|i| periods * TAU * i as f64 / denom).collect()
}

/// Networks of width `cfg.n1` trained on one period, raw and wrapped input,
/// scored on [0, 6π]. Returns the scores and `[y, cos y, raw, mod]` curves.
pub fn run_cosine_extrapolation(cfg: &CosineConfig, seed: u64) -> Result<(Vec<ExtrapolationResult>, Vec<[f64; 4]>)> {
    let eval = grid(3.0, GRID, true);
    let one_period = grid(1.0, cfg.samples, false);

    let mut extrapolation = Vec::new();
    let mut nets = Vec::new();
    for input in [CosineInput::Raw, CosineInput::Mod] {
        let net = train(input, &one_period, cfg.n1, cfg, seed)?;
        let err = |y: f64| (predict(&net, input, y) - y.cos()).abs();
        let max_over = |keep: &dyn Fn(f64) -> bool| eval.iter().filter(|&&y| keep(y)).map(|&y| err(y)).fold(0.0, f64::max);
        extrapolation.push(ExtrapolationResult {
            input,
            n1: cfg.n1,
            in_range_max_error: max_over(&|y| y < TAU),
            extrapolation_max_error: max_over(&|y| y >= TAU),
            final_loss: net.best_loss(),
        });
        nets.push(net);
    }
    let curves = eval
        .iter()
        .map(|&y| [y, y.cos(), predict(&nets[0], CosineInput::Raw, y), predict(&nets[1], CosineInput::Mod, y)])
        .collect();
    Ok((extrapolation, curves))
}

pub fn run_cosine_demo(cfg: &CosineConfig, seed: u64) -> Result<CosineReport> {
    let (extrapolation, curves) = run_cosine_extrapolation(cfg, seed)?;
    let full_range = grid(3.0, 3 * cfg.samples, false);
    let mut sweep = Vec::new();
    for input in [CosineInput::Raw, CosineInput::Mod] {
        for &n1 in &cfg.n1_list {
            let net = train(input, &full_range, n1, cfg, seed)?;
            let errs: Vec<f64> = full_range.iter().map(|&y| predict(&net, input, y) - y.cos()).collect();
            sweep.push(SweepPoint {
                input,
                n1,
                rms_error: (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt(),
                max_error: errs.iter().fold(0.0, |m, e| m.max(e.abs())),
            });
        }
    }
    let needed = |input: CosineInput| {
        sweep
            .iter()
            .filter(|p| p.input == input && p.rms_error <= cfg.accuracy)
            .map(|p| p.n1)
            .min()
    };
    Ok(CosineReport {
        seed,
        accuracy: cfg.accuracy,
        raw_neurons_needed: needed(CosineInput::Raw),
        mod_neurons_needed: needed(CosineInput::Mod),
        extrapolation,
        sweep,
        curves,
    })
}
