use serde::{Deserialize, Serialize};

use super::regressor::{delta, delta2, RegressorSpec, Regressors};
use crate::error::{Error, Result};

/// Coefficients of the physics-based inverse model
/// `û = θ_J δ²y(k) + θ_fv δy(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    /// Multiplies the discrete acceleration; identifies the inertia.
    pub inertia: f64,
    /// Multiplies the discrete velocity; identifies viscous friction.
    pub viscous: f64,
}

impl PhysicalParams {
    #[inline]
    pub fn predict_window(&self, window: &[f64; 5], sample_time: f64) -> f64 {
        self.inertia * delta2(window, sample_time) + self.viscous * delta(window, sample_time)
    }

    pub fn predict(&self, spec: &RegressorSpec, phi: &[f64]) -> Result<f64> {
        Ok(self.predict_window(&spec.centered_window(phi)?, spec.sample_time))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalFit {
    pub params: PhysicalParams,
    /// Root-mean-square of `u − û` over the fitted pairs.
    pub residual_rms: f64,
}

impl PhysicalFit {
    /// An identified inertia that is not positive points at unexciting or
    /// corrupted data; the fit is still returned.
    pub fn is_plausible(&self) -> bool {
        self.params.inertia > 0.0
    }
}

/// Relative tolerance on the determinant of the 2×2 Gram matrix.
pub const GRAM_TOLERANCE: f64 = 1e-12;

/// A difference column whose RMS stays within this many units of rounding
/// of the positions carries no information and counts as zero.
const ROUNDING_MARGIN: f64 = 64.0;

/// Least-squares fit of `θ_phy` through the normal equations.
pub fn fit_physical(pairs: &Regressors) -> Result<PhysicalFit> {
    let spec = pairs.spec;
    let ts = spec.sample_time;
    if pairs.is_empty() {
        return Err(Error::RankDeficient { det: 0.0 });
    }
    let (mut g11, mut g12, mut g22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut y_max = 0.0f64;
    for (phi, u) in pairs.iter() {
        let w = spec.centered_window(phi)?;
        y_max = w.iter().fold(y_max, |m, y| m.max(y.abs()));
        let (a, v) = (delta2(&w, ts), delta(&w, ts));
        g11 += a * a;
        g12 += a * v;
        g22 += v * v;
        r1 += a * u;
        r2 += v * u;
    }
    let det = g11 * g22 - g12 * g12;
    let n = pairs.len() as f64;
    let floor = ROUNDING_MARGIN * f64::EPSILON * y_max;
    let resolved = (g11 / n).sqrt() > floor / (ts * ts) && (g22 / n).sqrt() > floor / ts;
    if !resolved || det <= GRAM_TOLERANCE * g11 * g22 {
        return Err(Error::RankDeficient { det });
    }
    // symmetric positive definite 2×2: LDLᵀ
    let l21 = g12 / g11;
    let d2 = g22 - l21 * g12;
    let z2 = r2 - l21 * r1;
    let viscous = z2 / d2;
    let inertia = (r1 - g12 * viscous) / g11;
    let params = PhysicalParams { inertia, viscous };

    let sse: f64 = pairs
        .iter()
        .map(|(phi, u)| {
            let w = spec.centered_window(phi).expect("checked above");
            let e = u - params.predict_window(&w, ts);
            e * e
        })
        .sum();
    Ok(PhysicalFit {
        params,
        residual_rms: (sse / pairs.len() as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse_model::regressor::build_regressors_from;

    const TS: f64 = 1e-3;

    fn synth(theta: PhysicalParams, n: usize) -> Regressors {
        let y: Vec<f64> = (0..n)
            .map(|k| {
                let t = k as f64 * TS;
                (3.0 * t).sin() + 0.5 * (11.0 * t).cos() + 0.2 * t
            })
            .collect();
        let spec = RegressorSpec::centered(TS);
        let mut r = build_regressors_from(&y, &vec![0.0; n], &spec).unwrap();
        for i in 0..r.len() {
            let u = theta.predict(&spec, r.phi(i)).unwrap();
            r.targets_mut()[i] = u;
        }
        r
    }

    #[test]
    fn exact_linear_recovery() {
        let truth = PhysicalParams { inertia: 3.0, viscous: 0.5 };
        let fit = fit_physical(&synth(truth, 4000)).unwrap();
        assert!((fit.params.inertia - 3.0).abs() < 1e-10);
        assert!((fit.params.viscous - 0.5).abs() < 1e-10);
        assert!(fit.residual_rms < 1e-10);
        assert!(fit.is_plausible());
    }

    #[test]
    fn standstill_is_rank_deficient() {
        let y = vec![1.234; 500];
        let u = vec![0.01; 500];
        let r = build_regressors_from(&y, &u, &RegressorSpec::centered(TS)).unwrap();
        assert!(matches!(fit_physical(&r), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn constant_velocity_only_is_rank_deficient() {
        // δ²y ≡ 0: inertia is not identifiable
        let y: Vec<f64> = (0..500).map(|k| 2.0 * k as f64 * TS).collect();
        let r = build_regressors_from(&y, &y, &RegressorSpec::centered(TS)).unwrap();
        assert!(matches!(fit_physical(&r), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn translation_invariant() {
        let spec = RegressorSpec::centered(TS);
        let p = PhysicalParams { inertia: 2.0, viscous: -0.3 };
        let phi = [0.5, 0.25, 0.125, 0.0, -0.25];
        let shifted: Vec<f64> = phi.iter().map(|v| v + 64.0).collect();
        assert_eq!(p.predict(&spec, &phi).unwrap(), p.predict(&spec, &shifted).unwrap());
    }
}
