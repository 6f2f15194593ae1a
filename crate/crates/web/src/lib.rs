//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three operations are exposed: sampling a jerk-limited move, running a
//! closed-loop back-and-forth stroke with a chosen feedforward (after
//! identifying the models in the page), and the cosine extrapolation demo.
//! The `*_impl` functions carry the logic and are what the native tests call;
//! the exported wrappers only convert errors.

use hsm_pgnn::config::{Controller, ExperimentConfig};
use hsm_pgnn::experiments::{evaluate_controller, identify_models, run_collection, run_cosine_extrapolation, ModelSet};
use hsm_pgnn::motor_sim::ParasiticParams;
use hsm_pgnn::trajectory::{MotionLimits, ThirdOrderMove};
use wasm_bindgen::prelude::*;

/// Upper bound on the number of points handed to the page per curve.
pub const PLOT_POINTS: usize = 1500;

fn decimate(v: &[f64], step: usize) -> Vec<f64> {
    v.iter().step_by(step).copied().collect()
}

fn plot_step(n: usize) -> usize {
    n.div_ceil(PLOT_POINTS).max(1)
}

#[wasm_bindgen]
pub struct Motion {
    t: Vec<f64>,
    position: Vec<f64>,
    velocity: Vec<f64>,
    acceleration: Vec<f64>,
    duration: f64,
    peak_velocity: f64,
    peak_acceleration: f64,
}

#[wasm_bindgen]
impl Motion {
    #[wasm_bindgen(getter)]
    pub fn t(&self) -> Vec<f64> {
        self.t.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn position(&self) -> Vec<f64> {
        self.position.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn velocity(&self) -> Vec<f64> {
        self.velocity.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn acceleration(&self) -> Vec<f64> {
        self.acceleration.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn duration(&self) -> f64 {
        self.duration
    }
    #[wasm_bindgen(getter)]
    pub fn peak_velocity(&self) -> f64 {
        self.peak_velocity
    }
    #[wasm_bindgen(getter)]
    pub fn peak_acceleration(&self) -> f64 {
        self.peak_acceleration
    }
}

pub fn jerk_limited_move_impl(distance: f64, v_max: f64, a_max: f64, j_max: f64) -> Result<Motion, String> {
    let limits = MotionLimits::new(v_max, a_max, j_max).map_err(|e| e.to_string())?;
    let mv = ThirdOrderMove::new(0.0, distance, &limits).map_err(|e| e.to_string())?;
    let duration = mv.duration();
    let n = PLOT_POINTS;
    let mut m = Motion {
        t: Vec::with_capacity(n),
        position: Vec::with_capacity(n),
        velocity: Vec::with_capacity(n),
        acceleration: Vec::with_capacity(n),
        duration,
        peak_velocity: mv.peak_velocity(),
        peak_acceleration: mv.peak_acceleration(),
    };
    for i in 0..n {
        let t = duration * i as f64 / (n - 1) as f64;
        let (p, v, a) = mv.state(t);
        m.t.push(t);
        m.position.push(p);
        m.velocity.push(v);
        m.acceleration.push(a);
    }
    Ok(m)
}

/// Samples a jerk-limited point-to-point move from 0 to `distance` rad.
#[wasm_bindgen]
pub fn jerk_limited_move(distance: f64, v_max: f64, a_max: f64, j_max: f64) -> Result<Motion, JsError> {
    jerk_limited_move_impl(distance, v_max, a_max, j_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub struct Stroke {
    t: Vec<f64>,
    reference: Vec<f64>,
    error: Vec<f64>,
    feedforward: Vec<f64>,
    mae: f64,
    max_error: f64,
    standstill_error: f64,
}

#[wasm_bindgen]
impl Stroke {
    #[wasm_bindgen(getter)]
    pub fn t(&self) -> Vec<f64> {
        self.t.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn reference(&self) -> Vec<f64> {
        self.reference.clone()
    }
    /// Tracking error y* − y.
    #[wasm_bindgen(getter)]
    pub fn error(&self) -> Vec<f64> {
        self.error.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn feedforward(&self) -> Vec<f64> {
        self.feedforward.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn mae(&self) -> f64 {
        self.mae
    }
    #[wasm_bindgen(getter)]
    pub fn max_error(&self) -> f64 {
        self.max_error
    }
    #[wasm_bindgen(getter)]
    pub fn standstill_error(&self) -> f64 {
        self.standstill_error
    }
}

/// Simulated plant plus the models identified on it.
#[wasm_bindgen]
pub struct Lab {
    cfg: ExperimentConfig,
    models: ModelSet,
}

impl Lab {
    pub fn with_parasitics(parasitic: bool) -> Lab {
        let mut cfg = ExperimentConfig::default();
        if !parasitic {
            cfg.motor.parasitic = ParasiticParams::none();
        }
        // short enough to stay interactive
        cfg.collection.duration = 6.0;
        cfg.training.epochs = 400;
        cfg.evaluation.rotations = 1.0;
        Lab { cfg, models: ModelSet::default() }
    }

    pub fn identify_impl(&mut self, seconds: f64, epochs: usize) -> Result<String, String> {
        self.cfg.collection.duration = seconds;
        self.cfg.training.epochs = epochs;
        self.cfg.validate().map_err(|e| e.to_string())?;
        let trace = run_collection(&self.cfg).map_err(|e| e.to_string())?;
        let mut models = ModelSet::default();
        identify_models(&self.cfg, &trace, &[Controller::Physical, Controller::Pgnn], &mut models)
            .map_err(|e| e.to_string())?;
        let fit = models.physical_fit.expect("physical model identified");
        let loss = models.histories.get(&Controller::Pgnn).map(|h| (h[0], h.iter().copied().fold(f64::INFINITY, f64::min)));
        self.models = models;
        let mut s = format!(
            "{} samples; J = {:.4e} kg m^2 (true {:.4e}), f_v = {:.4e} N m s/rad (true {:.4e})",
            trace.len(),
            fit.params.inertia,
            self.cfg.motor.inertia,
            fit.params.viscous,
            self.cfg.motor.viscous_friction
        );
        if let Some((first, best)) = loss {
            s.push_str(&format!("; residual loss {first:.3e} -> {best:.3e}"));
        }
        Ok(s)
    }

    pub fn stroke_impl(&self, controller: &str, velocity: f64) -> Result<Stroke, String> {
        let c = match controller {
            "none" => Controller::None,
            "physical" => Controller::Physical,
            "pgnn" => Controller::Pgnn,
            other => return Err(format!("unknown controller `{other}`")),
        };
        if c != Controller::None && self.models.get(c).is_none() {
            return Err("identify the models first".into());
        }
        if !(velocity > 0.0 && velocity <= 40.0) {
            return Err("velocity must lie in (0, 40] rad/s".into());
        }
        let model = if c == Controller::None { None } else { self.models.get(c) };
        let (e, w) = evaluate_controller(&self.cfg, c, model, velocity).map_err(|e| e.to_string())?;
        let step = plot_step(w.len());
        let t0 = w.t.first().copied().unwrap_or(0.0);
        let err: Vec<f64> = w.y_star.iter().zip(&w.y).map(|(r, y)| r - y).collect();
        Ok(Stroke {
            t: w.t.iter().step_by(step).map(|t| t - t0).collect(),
            reference: decimate(&w.y_star, step),
            error: decimate(&err, step),
            feedforward: decimate(&w.u_ff, step),
            mae: e.mae,
            max_error: e.max_error,
            standstill_error: e.standstill_error,
        })
    }
}

#[wasm_bindgen]
impl Lab {
    #[wasm_bindgen(constructor)]
    pub fn new(parasitic: bool) -> Lab {
        Lab::with_parasitics(parasitic)
    }

    /// Records `seconds` of closed-loop data and identifies the physical
    /// model and the PGNN on it. Returns a one-line summary.
    pub fn identify(&mut self, seconds: f64, epochs: usize) -> Result<String, JsError> {
        self.identify_impl(seconds, epochs).map_err(|e| JsError::new(&e))
    }

    /// Measured back-and-forth stroke (after one warm-up stroke) with the
    /// given feedforward: `none`, `physical` or `pgnn`.
    pub fn stroke(&self, controller: &str, velocity: f64) -> Result<Stroke, JsError> {
        self.stroke_impl(controller, velocity).map_err(|e| JsError::new(&e))
    }
}

#[wasm_bindgen]
pub struct Cosine {
    y: Vec<f64>,
    target: Vec<f64>,
    raw: Vec<f64>,
    wrapped: Vec<f64>,
    raw_extrapolation_error: f64,
    mod_extrapolation_error: f64,
}

#[wasm_bindgen]
impl Cosine {
    #[wasm_bindgen(getter)]
    pub fn y(&self) -> Vec<f64> {
        self.y.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn target(&self) -> Vec<f64> {
        self.target.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn raw(&self) -> Vec<f64> {
        self.raw.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn wrapped(&self) -> Vec<f64> {
        self.wrapped.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn raw_extrapolation_error(&self) -> f64 {
        self.raw_extrapolation_error
    }
    #[wasm_bindgen(getter)]
    pub fn mod_extrapolation_error(&self) -> f64 {
        self.mod_extrapolation_error
    }
}

pub fn cosine_demo_impl(n1: usize, epochs: usize, seed: u64) -> Result<Cosine, String> {
    let mut cfg = ExperimentConfig::default();
    cfg.cosine.n1 = n1;
    cfg.cosine.epochs = epochs;
    cfg.validate().map_err(|e| e.to_string())?;
    let (scores, curves) = run_cosine_extrapolation(&cfg.cosine, seed).map_err(|e| e.to_string())?;
    let step = plot_step(curves.len());
    let column = |i: usize| curves.iter().step_by(step).map(|c| c[i]).collect::<Vec<f64>>();
    Ok(Cosine {
        y: column(0),
        target: column(1),
        raw: column(2),
        wrapped: column(3),
        raw_extrapolation_error: scores[0].extrapolation_max_error,
        mod_extrapolation_error: scores[1].extrapolation_max_error,
    })
}

/// Trains raw-input and wrapped-input networks of width `n1` on one cosine
/// period and evaluates them over three periods.
#[wasm_bindgen]
pub fn cosine_demo(n1: usize, epochs: usize, seed: u64) -> Result<Cosine, JsError> {
    cosine_demo_impl(n1, epochs, seed).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_step_bounds_points() {
        assert_eq!(plot_step(10), 1);
        assert_eq!(plot_step(PLOT_POINTS), 1);
        assert_eq!(plot_step(PLOT_POINTS + 1), 2);
        assert!(100_000usize.div_ceil(plot_step(100_000)) <= PLOT_POINTS);
    }

    #[test]
    fn decimate_keeps_first_sample() {
        assert_eq!(decimate(&[1.0, 2.0, 3.0, 4.0, 5.0], 2), vec![1.0, 3.0, 5.0]);
    }
}
