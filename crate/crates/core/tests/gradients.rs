mod common;

use hsm_pgnn::inverse_model::{
    build_regressors_from, delta, delta2, fit_physical, Adam, RegressorSpec,
};

#[test]
fn backprop_matches_central_differences() {
    let worst = common::gradient_check(100, 7);
    assert!(worst < 1e-6, "{worst}");
}

/// Fitting the physical model is a convex quadratic problem; the optimizer
/// used for the networks must land on the closed-form minimizer.
#[test]
fn physical_fit_is_the_optimizer_minimum() {
    let ts = 1e-3;
    let spec = RegressorSpec::centered(ts);
    let y: Vec<f64> = (0..3000)
        .map(|k| {
            let t = k as f64 * ts;
            2.0 * (1.3 * t).sin() + 0.3 * (7.0 * t).cos()
        })
        .collect();
    let mut pairs = build_regressors_from(&y, &vec![0.0; y.len()], &spec).unwrap();
    let mut feats = Vec::new();
    for i in 0..pairs.len() {
        let w = spec.centered_window(pairs.phi(i)).unwrap();
        let (a, v) = (delta2(&w, ts), delta(&w, ts));
        // deterministic non-model component so the optimum has residuals
        pairs.targets_mut()[i] = 0.4 * a - 0.25 * v + 0.05 * (i as f64 * 0.37).sin();
        feats.push((a, v));
    }
    let fit = fit_physical(&pairs).unwrap().params;

    // gradient descent on the normalised quadratic
    let sa = feats.iter().fold(0.0f64, |m, f| m.max(f.0.abs()));
    let sv = feats.iter().fold(0.0f64, |m, f| m.max(f.1.abs()));
    let n = feats.len() as f64;
    let mut theta = [0.0, 0.0];
    let mut adam = Adam::new(2, 0.05, 0.9, 0.999, 1e-12);
    for epoch in 0..20_000 {
        adam.learning_rate = 0.05 * (1e-4f64).powf(epoch as f64 / 20_000.0);
        let mut g = [0.0, 0.0];
        for ((a, v), u) in feats.iter().zip(pairs.targets()) {
            let e = theta[0] * a / sa + theta[1] * v / sv - u;
            g[0] += 2.0 * e * a / sa / n;
            g[1] += 2.0 * e * v / sv / n;
        }
        adam.step(&mut theta, &g);
    }
    let (j, fv) = (theta[0] / sa, theta[1] / sv);
    assert!((j - fit.inertia).abs() <= 1e-6 * fit.inertia.abs(), "{j} vs {}", fit.inertia);
    assert!((fv - fit.viscous).abs() <= 1e-6 * fit.viscous.abs(), "{fv} vs {}", fit.viscous);
}
