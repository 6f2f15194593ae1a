//! Independent oracles shared by the integration tests and the acceptance
//! harness.
#![allow(dead_code)]

use std::f64::consts::TAU;

use hsm_pgnn::inverse_model::{InverseModel, NNParams, RegressorSpec};
use hsm_pgnn::motor_sim::{dq_transform, inverse_dq_transform, rk4_step, MotorParams, MotorState, ParasiticParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TS: f64 = 1e-4;

/// Worst-case (norm preservation, round trip) errors of the dq transform over
/// `n` random states.
pub fn dq_invariant_errors(n: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut norm_err, mut trip_err) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let y = rng.random_range(-200.0..200.0);
        let a = rng.random_range(-10.0..10.0);
        let b = rng.random_range(-10.0..10.0);
        let teeth = rng.random_range(1..=200u32);
        let (d, q) = dq_transform(y, a, b, teeth);
        norm_err = norm_err.max(((a * a + b * b) - (d * d + q * q)).abs());
        let (a2, b2) = inverse_dq_transform(y, d, q, teeth);
        trip_err = trip_err.max((a - a2).abs()).max((b - b2).abs());
    }
    (norm_err, trip_err)
}

/// Coil-only plant (k_m = 0): each phase is a first-order RL circuit.
pub fn decoupled_params() -> MotorParams {
    MotorParams {
        motor_constant: 0.0,
        parasitic: ParasiticParams::none(),
        ..MotorParams::default()
    }
}

/// Least-squares slope of log(global error) against log(step) for RK4 on
/// the coil decay, against `i(t) = v/R + (i₀ − v/R) e^{−Rt/L}`.
pub fn rk4_convergence_exponent() -> f64 {
    let p = decoupled_params();
    let (va, vb) = (1.2, -0.7);
    let s0 = MotorState { y: 0.3, omega: 0.0, i_a: 0.25, i_b: -0.1 };
    let horizon = 2e-3;
    let exact = |i0: f64, v: f64| v / p.resistance + (i0 - v / p.resistance) * (-p.resistance * horizon / p.inductance).exp();
    let (ea, eb) = (exact(s0.i_a, va), exact(s0.i_b, vb));
    let mut pts = Vec::new();
    for n in [2usize, 4, 8, 16, 32] {
        let dt = horizon / n as f64;
        let mut s = s0;
        for _ in 0..n {
            s = rk4_step(&s, va, vb, dt, &p);
        }
        let err = (s.i_a - ea).abs().max((s.i_b - eb).abs());
        pts.push((dt.ln(), err.ln()));
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Relative error with a floor on the denominator so that near-zero
/// derivatives are compared absolutely.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-3)
}

/// Max relative error between backprop and central differences over
/// `draws` random networks and inputs, for both parameter and input
/// gradients.
pub fn gradient_check(draws: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let n_in = rng.random_range(1..=6);
        let n_h = rng.random_range(1..=12);
        let mut nn = NNParams::zeros(n_in, n_h);
        for t in nn.as_mut_slice() {
            *t = rng.random_range(-1.5..1.5);
        }
        let x: Vec<f64> = (0..n_in).map(|_| rng.random_range(-2.0..2.0)).collect();
        let upstream = rng.random_range(-3.0..3.0);
        let g = nn.gradient(&x, upstream);
        for i in 0..nn.as_slice().len() {
            let mut plus = nn.clone();
            plus.as_mut_slice()[i] += h;
            let mut minus = nn.clone();
            minus.as_mut_slice()[i] -= h;
            let fd = upstream * (plus.forward(&x) - minus.forward(&x)) / (2.0 * h);
            worst = worst.max(rel_err(g.params[i], fd));
        }
        for i in 0..n_in {
            let mut xp = x.clone();
            xp[i] += h;
            let mut xm = x.clone();
            xm[i] -= h;
            let fd = upstream * (nn.forward(&xp) - nn.forward(&xm)) / (2.0 * h);
            worst = worst.max(rel_err(g.input[i], fd));
        }
    }
    worst
}

/// Random regressor resembling sampled motion: position, velocity and
/// acceleration drawn over the operating range, outputs from a quadratic
/// in time.
pub fn random_motion_phi(rng: &mut ChaCha8Rng, spec: &RegressorSpec) -> Vec<f64> {
    let y0 = rng.random_range(-3.0 * TAU..3.0 * TAU);
    let v = rng.random_range(-20.0..20.0);
    let a = rng.random_range(-100.0..100.0);
    let mut phi = vec![0.0; spec.len()];
    for (i, slot) in phi[..spec.output_len()].iter_mut().enumerate() {
        // entry i is y(k + n_k + 1 − i)
        let t = (spec.n_k as f64 + 1.0 - i as f64) * spec.sample_time;
        *slot = y0 + v * t + 0.5 * a * t * t;
    }
    for slot in phi[spec.output_len()..].iter_mut() {
        *slot = rng.random_range(-0.1..0.1);
    }
    phi
}

/// Max over random φ and n ∈ {−3..3} of |û(φ) − û(φ + 2πn·mask)| / (1 + |û(φ)|).
pub fn rotational_reproducibility(model: &InverseModel, draws: usize, seed: u64) -> f64 {
    let spec = *model.regressor();
    let mask = spec.position_mask();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let phi = random_motion_phi(&mut rng, &spec);
        let u = model.predict(&phi).unwrap();
        for n in -3i32..=3 {
            let shifted: Vec<f64> = phi.iter().zip(&mask).map(|(p, m)| p + TAU * n as f64 * m).collect();
            let us = model.predict(&shifted).unwrap();
            worst = worst.max((u - us).abs() / (1.0 + u.abs()));
        }
    }
    worst
}

pub struct PlantedResidual {
    /// RMS of û_pgnn − u over all pairs.
    pub rms_error: f64,
    /// RMS of the planted term.
    pub rms_residual: f64,
    pub model: InverseModel,
}

/// Targets `u = θ_J δ²y + θ_fv δy + amplitude·sin(mod(y(k), 2π))` on the
/// positions of a back-and-forth reference; the PGNN is identified on them
/// and scored against `u`.
pub fn planted_residual(amplitude: f64, cfg: &hsm_pgnn::inverse_model::TrainConfig, stride: usize) -> PlantedResidual {
    use hsm_pgnn::inverse_model::{
        build_regressors_from, fit_physical, delta, delta2, train_residual, wrap_angle, InputTransform, PgnnModel,
    };
    use hsm_pgnn::trajectory::{back_and_forth, MotionLimits};

    let (theta_j, theta_fv) = (5.7e-5, 1.0e-2);
    let spec = RegressorSpec::centered(TS);
    let profile = back_and_forth(3.0, &MotionLimits::default(), TS, 0.2, 2).unwrap();
    let y = profile.positions();
    let mut pairs = build_regressors_from(y, &vec![0.0; y.len()], &spec).unwrap();
    let mut planted = Vec::with_capacity(pairs.len());
    for i in 0..pairs.len() {
        let w = spec.centered_window(pairs.phi(i)).unwrap();
        let r = amplitude * wrap_angle(w[2]).sin();
        planted.push(r);
        pairs.targets_mut()[i] = theta_j * delta2(&w, TS) + theta_fv * delta(&w, TS) + r;
    }
    let physical = fit_physical(&pairs).unwrap().params;
    let net = train_residual(&pairs.subsample(stride), &physical, cfg).unwrap();
    let model = InverseModel::Pgnn(
        PgnnModel::new(spec, physical, net.into_block(InputTransform::PhysicsGuided)).unwrap(),
    );
    let n = pairs.len() as f64;
    let mut se = 0.0;
    for (phi, u) in pairs.iter() {
        let e = model.predict(phi).unwrap() - u;
        se += e * e;
    }
    let rms_residual = (planted.iter().map(|r| r * r).sum::<f64>() / n).sqrt();
    PlantedResidual { rms_error: (se / n).sqrt(), rms_residual, model }
}
