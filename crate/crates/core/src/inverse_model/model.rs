use super::nn::NNParams;
use super::physical::PhysicalParams;
use super::regressor::RegressorSpec;
use super::transform::InputTransform;
use crate::error::{Error, Result};

/// A network together with the map from regressor to its inputs:
/// `out = output_scale · NN(T(φ) ./ feature_scales)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NnBlock {
    pub transform: InputTransform,
    pub feature_scales: Vec<f64>,
    pub output_scale: f64,
    pub params: NNParams,
}

impl NnBlock {
    pub fn input_dim(&self) -> usize {
        self.params.n_in()
    }

    pub fn validate(&self, spec: &RegressorSpec) -> Result<()> {
        self.transform.check(spec)?;
        let dim = self.transform.output_dim(spec);
        if dim != self.params.n_in() || dim != self.feature_scales.len() {
            return Err(Error::Shape(format!(
                "transform yields {dim} features but the network takes {} and {} scales are stored",
                self.params.n_in(),
                self.feature_scales.len()
            )));
        }
        if self.feature_scales.iter().any(|s| !(s.is_finite() && *s > 0.0))
            || !(self.output_scale.is_finite() && self.output_scale > 0.0)
        {
            return Err(Error::Shape("scales must be finite and positive".into()));
        }
        Ok(())
    }

    /// Scaled network inputs for one regressor.
    pub fn features_into(&self, spec: &RegressorSpec, phi: &[f64], out: &mut [f64]) -> Result<()> {
        self.transform.apply_into(spec, phi, out)?;
        for (x, s) in out.iter_mut().zip(&self.feature_scales) {
            *x /= s;
        }
        Ok(())
    }

    pub fn predict(&self, spec: &RegressorSpec, phi: &[f64]) -> Result<f64> {
        let mut x = [0.0f64; 16];
        let dim = self.input_dim();
        if dim <= x.len() {
            self.features_into(spec, phi, &mut x[..dim])?;
            Ok(self.output_scale * self.params.forward(&x[..dim]))
        } else {
            let mut v = vec![0.0; dim];
            self.features_into(spec, phi, &mut v)?;
            Ok(self.output_scale * self.params.forward(&v))
        }
    }
}

/// Physics-guided network: physical model plus a network on the transformed
/// regressor.
#[derive(Debug, Clone, PartialEq)]
pub struct PgnnModel {
    pub regressor: RegressorSpec,
    pub physical: PhysicalParams,
    pub nn: NnBlock,
}

impl PgnnModel {
    pub fn new(regressor: RegressorSpec, physical: PhysicalParams, nn: NnBlock) -> Result<Self> {
        nn.validate(&regressor)?;
        Ok(PgnnModel { regressor, physical, nn })
    }

    pub fn physical_part(&self, phi: &[f64]) -> Result<f64> {
        self.physical.predict(&self.regressor, phi)
    }

    pub fn nn_part(&self, phi: &[f64]) -> Result<f64> {
        self.nn.predict(&self.regressor, phi)
    }

    pub fn predict(&self, phi: &[f64]) -> Result<f64> {
        Ok(self.physical_part(phi)? + self.nn_part(phi)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Physical,
    BlackBox,
    Pgnn,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Physical => "physical",
            ModelKind::BlackBox => "blackbox",
            ModelKind::Pgnn => "pgnn",
        }
    }
}

/// Any inverse-dynamics model usable as a feedforward law.
#[derive(Debug, Clone, PartialEq)]
pub enum InverseModel {
    Physical {
        regressor: RegressorSpec,
        params: PhysicalParams,
    },
    BlackBox {
        regressor: RegressorSpec,
        nn: NnBlock,
    },
    Pgnn(PgnnModel),
}

impl InverseModel {
    pub fn physical(regressor: RegressorSpec, params: PhysicalParams) -> Result<Self> {
        regressor.validate()?;
        if !regressor.has_centered_window() {
            return Err(Error::Shape("physical model needs a window covering y(k-2)..y(k+2)".into()));
        }
        Ok(InverseModel::Physical { regressor, params })
    }

    pub fn black_box(regressor: RegressorSpec, nn: NnBlock) -> Result<Self> {
        nn.validate(&regressor)?;
        Ok(InverseModel::BlackBox { regressor, nn })
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            InverseModel::Physical { .. } => ModelKind::Physical,
            InverseModel::BlackBox { .. } => ModelKind::BlackBox,
            InverseModel::Pgnn(_) => ModelKind::Pgnn,
        }
    }

    pub fn regressor(&self) -> &RegressorSpec {
        match self {
            InverseModel::Physical { regressor, .. } | InverseModel::BlackBox { regressor, .. } => regressor,
            InverseModel::Pgnn(m) => &m.regressor,
        }
    }

    pub fn physical_params(&self) -> Option<PhysicalParams> {
        match self {
            InverseModel::Physical { params, .. } => Some(*params),
            InverseModel::Pgnn(m) => Some(m.physical),
            InverseModel::BlackBox { .. } => None,
        }
    }

    /// Predicted input `û(φ)`.
    pub fn predict(&self, phi: &[f64]) -> Result<f64> {
        match self {
            InverseModel::Physical { regressor, params } => params.predict(regressor, phi),
            InverseModel::BlackBox { regressor, nn } => nn.predict(regressor, phi),
            InverseModel::Pgnn(m) => m.predict(phi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse_model::regressor::{delta, delta2};
    use crate::inverse_model::transform::wrap_angle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    const TS: f64 = 1e-4;

    fn random_block(rng: &mut ChaCha8Rng) -> NnBlock {
        let mut params = NNParams::init(3, 5, rng.random());
        for v in params.as_mut_slice() {
            *v = rng.random_range(-1.0..1.0);
        }
        NnBlock {
            transform: InputTransform::PhysicsGuided,
            feature_scales: vec![80.0, 15.0, TAU],
            output_scale: 0.05,
            params,
        }
    }

    #[test]
    fn zero_network_reduces_to_physical() {
        let spec = RegressorSpec::centered(TS);
        let phys = PhysicalParams { inertia: 5.7e-5, viscous: 0.01 };
        let nn = NnBlock {
            transform: InputTransform::PhysicsGuided,
            feature_scales: vec![1.0; 3],
            output_scale: 1.0,
            params: NNParams::zeros(3, 16),
        };
        let m = PgnnModel::new(spec, phys, nn).unwrap();
        let phi = [1.0, 0.9989, 0.9978, 0.9966, 0.9955];
        assert_eq!(m.predict(&phi).unwrap(), phys.predict(&spec, &phi).unwrap());
    }

    #[test]
    fn prediction_matches_independent_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = RegressorSpec::centered(TS);
        for _ in 0..200 {
            let nn = random_block(&mut rng);
            let phys = PhysicalParams {
                inertia: rng.random_range(0.0..1e-3),
                viscous: rng.random_range(-0.1..0.1),
            };
            let m = PgnnModel::new(spec, phys, nn.clone()).unwrap();
            let phi: Vec<f64> = (0..5).map(|_| rng.random_range(-20.0..20.0)).collect();

            // independent evaluation with explicit loops
            let w = [phi[0], phi[1], phi[2], phi[3], phi[4]];
            let x = [
                delta2(&w, TS) / nn.feature_scales[0],
                delta(&w, TS) / nn.feature_scales[1],
                wrap_angle(phi[2]) / nn.feature_scales[2],
            ];
            let p = &nn.params;
            let mut out = p.b2();
            for j in 0..p.n_hidden() {
                let mut z = p.b1()[j];
                for i in 0..3 {
                    z += p.w1()[j * 3 + i] * x[i];
                }
                out += p.w2()[j] * z.tanh();
            }
            let expected = phys.inertia * delta2(&w, TS) + phys.viscous * delta(&w, TS) + nn.output_scale * out;
            let got = m.predict(&phi).unwrap();
            assert!((got - expected).abs() <= 1e-12 * (1.0 + expected.abs()), "{got} vs {expected}");
        }
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let spec = RegressorSpec::centered(TS);
        let nn = NnBlock {
            transform: InputTransform::PhysicsGuided,
            feature_scales: vec![1.0; 5],
            output_scale: 1.0,
            params: NNParams::zeros(5, 4),
        };
        assert!(PgnnModel::new(spec, PhysicalParams { inertia: 1.0, viscous: 0.0 }, nn).is_err());
    }
}
