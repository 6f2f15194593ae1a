use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::regressor::{delta, delta2, RegressorSpec};
use crate::error::{Error, Result};

/// How a regressor is turned into network inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputTransform {
    /// Raw regressor entries.
    Identity,
    /// `[δ²y(k), δy(k), mod(y(k), 2π)]`.
    PhysicsGuided,
}

impl InputTransform {
    pub fn output_dim(&self, spec: &RegressorSpec) -> usize {
        match self {
            InputTransform::Identity => spec.len(),
            InputTransform::PhysicsGuided => 3,
        }
    }

    pub fn check(&self, spec: &RegressorSpec) -> Result<()> {
        match self {
            InputTransform::Identity => Ok(()),
            InputTransform::PhysicsGuided if spec.has_centered_window() && spec.n_b == 0 => Ok(()),
            InputTransform::PhysicsGuided => Err(Error::Shape(format!(
                "physics-guided transform needs n_b = 0 and a window covering y(k-2)..y(k+2), got n_a={}, n_b={}, n_k={}",
                spec.n_a, spec.n_b, spec.n_k
            ))),
        }
    }

    /// Writes the transformed regressor into `out` (length [`Self::output_dim`]).
    pub fn apply_into(&self, spec: &RegressorSpec, phi: &[f64], out: &mut [f64]) -> Result<()> {
        match self {
            InputTransform::Identity => {
                if phi.len() != out.len() {
                    return Err(Error::Shape(format!("regressor has length {}, expected {}", phi.len(), out.len())));
                }
                out.copy_from_slice(phi);
            }
            InputTransform::PhysicsGuided => {
                let w = spec.centered_window(phi)?;
                out[0] = delta2(&w, spec.sample_time);
                out[1] = delta(&w, spec.sample_time);
                out[2] = wrap_angle(w[2]);
            }
        }
        Ok(())
    }

    pub fn apply(&self, spec: &RegressorSpec, phi: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.output_dim(spec)];
        self.apply_into(spec, phi, &mut out)?;
        Ok(out)
    }
}

/// Floored modulo into `[0, 2π)`, also for negative angles.
#[inline]
pub fn wrap_angle(y: f64) -> f64 {
    let r = y.rem_euclid(TAU);
    // rem_euclid rounds tiny negative inputs up to exactly 2π
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// The physics-guided transform of a centered regressor.
pub fn input_transform(spec: &RegressorSpec, phi: &[f64]) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    InputTransform::PhysicsGuided.apply_into(spec, phi, &mut out)?;
    Ok(out)
}

/// Per-feature divisor: the largest magnitude seen in the training inputs,
/// or 1 for features that are identically zero.
pub fn max_abs_scales(features: &[f64], dim: usize) -> Vec<f64> {
    let mut s = vec![0.0f64; dim];
    for row in features.chunks_exact(dim) {
        for (m, v) in s.iter_mut().zip(row) {
            *m = m.max(v.abs());
        }
    }
    for m in &mut s {
        if !(*m > 0.0 && m.is_finite()) {
            *m = 1.0;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec() -> RegressorSpec {
        RegressorSpec::centered(1e-4)
    }

    #[test]
    fn constant_window_above_one_turn() {
        let y = TAU + 0.3;
        let t = input_transform(&spec(), &[y; 5]).unwrap();
        assert_eq!(t[0], 0.0);
        assert_eq!(t[1], 0.0);
        assert!((t[2] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn negative_angle_wraps_up() {
        let t = input_transform(&spec(), &[-0.1; 5]).unwrap();
        assert!((t[2] - (TAU - 0.1)).abs() < 1e-15);
        assert_eq!(wrap_angle(-1e-18), 0.0);
        assert!(wrap_angle(-1e-18) < TAU);
    }

    #[test]
    fn wrong_shape_rejected() {
        let s = RegressorSpec { n_a: 2, ..spec() };
        assert!(InputTransform::PhysicsGuided.check(&s).is_err());
        assert!(input_transform(&s, &[0.0; 3]).is_err());
    }

    #[test]
    fn scales_ignore_zero_columns() {
        let f = [1.0, 0.0, -3.0, 0.0, 2.0, 0.0];
        assert_eq!(max_abs_scales(&f, 2), vec![3.0, 1.0]);
    }

    proptest! {
        #[test]
        fn wrap_in_range(y in -1e4..1e4f64) {
            let w = wrap_angle(y);
            prop_assert!((0.0..TAU).contains(&w));
        }

        #[test]
        fn whole_turn_shift_invariance(
            base in -20.0..20.0f64,
            v in -20.0..20.0f64,
            a in -100.0..100.0f64,
            n in -3i32..=3,
        ) {
            let ts = 1e-4;
            let phi: Vec<f64> = (0..5)
                .map(|i| {
                    let t = (2 - i) as f64 * ts;
                    base + v * t + 0.5 * a * t * t
                })
                .collect();
            let shifted: Vec<f64> = phi.iter().map(|y| y + TAU * n as f64).collect();
            let s = RegressorSpec::centered(ts);
            let t0 = input_transform(&s, &phi).unwrap();
            let t1 = input_transform(&s, &shifted).unwrap();
            prop_assert!((t0[1] - t1[1]).abs() < 1e-9 * (1.0 + t0[1].abs()));
            // δ² divides rounding of y + 2πn by 4T_s²
            let ymax = shifted.iter().chain(&phi).fold(0.0f64, |m, y| m.max(y.abs()));
            let bound = 8.0 * f64::EPSILON * ymax / (4.0 * ts * ts);
            prop_assert!((t0[0] - t1[0]).abs() <= bound);
            let d = (t0[2] - t1[2]).abs();
            prop_assert!(d < 1e-9 || (TAU - d) < 1e-9);
        }
    }
}
