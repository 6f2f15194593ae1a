//! Inverse models evaluated along a reference as a causal feedforward law.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::inverse_model::InverseModel;
use crate::trajectory::ReferenceProfile;

/// Computes `u_ff(k) = û(θ, φ_ff(k))` where `φ_ff(k)` holds reference samples
/// up to `k + n_k + 1` and, for `n_b > 1`, the evaluator's own past outputs.
#[derive(Debug, Clone)]
pub struct FeedforwardEvaluator<'a> {
    model: &'a InverseModel,
    profile: &'a ReferenceProfile,
    /// most recent first
    past: VecDeque<f64>,
    phi: Vec<f64>,
    max_index_read: Option<usize>,
}

impl<'a> FeedforwardEvaluator<'a> {
    pub fn new(model: &'a InverseModel, profile: &'a ReferenceProfile) -> Self {
        let spec = model.regressor();
        FeedforwardEvaluator {
            model,
            profile,
            past: VecDeque::from(vec![0.0; spec.input_len()]),
            phi: vec![0.0; spec.len()],
            max_index_read: None,
        }
    }

    pub fn model(&self) -> &InverseModel {
        self.model
    }

    pub fn profile(&self) -> &ReferenceProfile {
        self.profile
    }

    /// Highest reference index read so far.
    pub fn max_index_read(&self) -> Option<usize> {
        self.max_index_read
    }

    /// Number of buffered past feedforward values.
    pub fn buffer_len(&self) -> usize {
        self.past.len()
    }

    pub fn ff_step(&mut self, k: usize) -> Result<f64> {
        let spec = *self.model.regressor();
        let ahead = spec.lookahead();
        if ahead > self.profile.max_lookahead() {
            return Err(Error::LookaheadUnavailable {
                requested: ahead,
                available: self.profile.max_lookahead(),
            });
        }
        for i in 0..=spec.n_a {
            let idx = k as isize + ahead as isize - i as isize;
            self.phi[i] = self.profile.at(idx);
        }
        for (slot, u) in self.phi[spec.output_len()..].iter_mut().zip(&self.past) {
            *slot = *u;
        }
        let read = k + ahead;
        self.max_index_read = Some(self.max_index_read.map_or(read, |m| m.max(read)));

        let u = self.model.predict(&self.phi)?;
        if !self.past.is_empty() {
            self.past.pop_back();
            self.past.push_front(u);
        }
        Ok(u)
    }

    /// `u_ff` for every sample of the profile.
    pub fn ff_trace(&mut self) -> Result<Vec<f64>> {
        (0..self.profile.len()).map(|k| self.ff_step(k)).collect()
    }
}

/// Convenience wrapper: feedforward of `model` over `profile`.
pub fn ff_trace(model: &InverseModel, profile: &ReferenceProfile) -> Result<Vec<f64>> {
    FeedforwardEvaluator::new(model, profile).ff_trace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse_model::{NNParams, NnBlock, PhysicalParams, RegressorSpec, InputTransform};

    const TS: f64 = 1e-4;

    fn physical() -> InverseModel {
        InverseModel::physical(
            RegressorSpec::centered(TS),
            PhysicalParams { inertia: 5.7e-5, viscous: 0.02 },
        )
        .unwrap()
    }

    #[test]
    fn constant_reference_gives_zero() {
        let p = ReferenceProfile::new(vec![2.0; 50], TS).unwrap();
        assert!(ff_trace(&physical(), &p).unwrap().iter().all(|&u| u == 0.0));
    }

    #[test]
    fn constant_velocity_gives_viscous_term() {
        let v = 4.0;
        let p = ReferenceProfile::new((0..100).map(|k| v * k as f64 * TS).collect(), TS).unwrap();
        let u = ff_trace(&physical(), &p).unwrap();
        // interior samples only; the held ends look like standstill
        for &x in &u[2..97] {
            assert!((x - 0.02 * v).abs() < 1e-9, "{x}");
        }
    }

    #[test]
    fn reads_at_most_two_samples_ahead() {
        let p = ReferenceProfile::new((0..30).map(|k| (k as f64).sqrt()).collect(), TS).unwrap();
        let m = physical();
        let mut ev = FeedforwardEvaluator::new(&m, &p);
        for k in 0..30 {
            ev.ff_step(k).unwrap();
            assert_eq!(ev.max_index_read(), Some(k + 2));
        }
        assert_eq!(ev.buffer_len(), 0);
    }

    #[test]
    fn insufficient_lookahead_is_an_error() {
        let p = ReferenceProfile::new(vec![0.0; 10], TS).unwrap().with_max_lookahead(1);
        let m = physical();
        assert!(matches!(
            FeedforwardEvaluator::new(&m, &p).ff_step(0),
            Err(Error::LookaheadUnavailable { requested: 2, available: 1 })
        ));
    }

    #[test]
    fn input_history_is_fed_back() {
        // n_b = 3: φ = [y(k+1), y(k), u_ff(k−1), u_ff(k−2)]
        let spec = RegressorSpec { n_a: 1, n_b: 3, n_k: 0, sample_time: TS };
        // network that returns 1 + u_ff(k−1): w picks the third input
        let params = NNParams::from_parts(&[0.0, 0.0, 1.0, 0.0], &[0.0], &[1.0], 0.0).unwrap();
        let nn = NnBlock {
            transform: InputTransform::Identity,
            feature_scales: vec![1.0; 4],
            output_scale: 1.0,
            params,
        };
        let m = InverseModel::black_box(spec, nn).unwrap();
        let p = ReferenceProfile::new(vec![0.0; 5], TS).unwrap();
        let mut ev = FeedforwardEvaluator::new(&m, &p);
        assert_eq!(ev.buffer_len(), 2);
        let u0 = ev.ff_step(0).unwrap();
        let u1 = ev.ff_step(1).unwrap();
        assert_eq!(u0, 0.0);
        assert_eq!(u1, u0.tanh());
    }
}
