//! Versioned JSON model files.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "kind": "pgnn",
//!   "regressor": {"n_a": 4, "n_b": 0, "n_k": 1, "sample_time": 0.0001},
//!   "physical": {"inertia": 5.7e-5, "viscous": 0.01},
//!   "network": {
//!     "transform": "physics_guided",
//!     "inputs": 3, "hidden": 16,
//!     "w1": [...], "b1": [...], "w2": [...], "b2": 0.0,
//!     "feature_scales": [...], "output_scale": 0.05
//!   }
//! }
//! ```
//!
//! `w1` is row-major (`hidden` rows of `inputs` entries). Floats are written
//! in shortest round-trip form, so save/load is lossless.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{InverseModel, NnBlock, PgnnModel};
use super::nn::NNParams;
use super::physical::PhysicalParams;
use super::regressor::RegressorSpec;
use super::transform::InputTransform;
use crate::error::{Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    transform: InputTransform,
    inputs: usize,
    hidden: usize,
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: f64,
    feature_scales: Vec<f64>,
    output_scale: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    format_version: u32,
    kind: String,
    regressor: RegressorSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    physical: Option<PhysicalParams>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    network: Option<NetworkDoc>,
}

impl From<&NnBlock> for NetworkDoc {
    fn from(b: &NnBlock) -> Self {
        NetworkDoc {
            transform: b.transform,
            inputs: b.params.n_in(),
            hidden: b.params.n_hidden(),
            w1: b.params.w1().to_vec(),
            b1: b.params.b1().to_vec(),
            w2: b.params.w2().to_vec(),
            b2: b.params.b2(),
            feature_scales: b.feature_scales.clone(),
            output_scale: b.output_scale,
        }
    }
}

impl NetworkDoc {
    fn into_block(self) -> Result<NnBlock> {
        if self.w1.len() != self.inputs * self.hidden {
            return Err(Error::ModelFormat(format!(
                "w1 has {} entries, expected {}x{}",
                self.w1.len(),
                self.hidden,
                self.inputs
            )));
        }
        let params = NNParams::from_parts(&self.w1, &self.b1, &self.w2, self.b2)?;
        if params.n_hidden() != self.hidden {
            return Err(Error::ModelFormat("hidden size disagrees with b1".into()));
        }
        Ok(NnBlock {
            transform: self.transform,
            feature_scales: self.feature_scales,
            output_scale: self.output_scale,
            params,
        })
    }
}

impl InverseModel {
    pub fn to_json(&self) -> Result<String> {
        let doc = match self {
            InverseModel::Physical { regressor, params } => ModelDoc {
                format_version: MODEL_FORMAT_VERSION,
                kind: "physical".into(),
                regressor: *regressor,
                physical: Some(*params),
                network: None,
            },
            InverseModel::BlackBox { regressor, nn } => ModelDoc {
                format_version: MODEL_FORMAT_VERSION,
                kind: "blackbox".into(),
                regressor: *regressor,
                physical: None,
                network: Some(nn.into()),
            },
            InverseModel::Pgnn(m) => ModelDoc {
                format_version: MODEL_FORMAT_VERSION,
                kind: "pgnn".into(),
                regressor: m.regressor,
                physical: Some(m.physical),
                network: Some((&m.nn).into()),
            },
        };
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<InverseModel> {
        let doc: ModelDoc = serde_json::from_str(text)?;
        if doc.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelFormat(format!(
                "unsupported format_version {} (expected {MODEL_FORMAT_VERSION})",
                doc.format_version
            )));
        }
        let missing = |what: &str| Error::ModelFormat(format!("`{}` model is missing `{what}`", doc.kind));
        match doc.kind.as_str() {
            "physical" => {
                let params = doc.physical.ok_or_else(|| missing("physical"))?;
                InverseModel::physical(doc.regressor, params)
            }
            "blackbox" => {
                let nn = doc.network.clone().ok_or_else(|| missing("network"))?.into_block()?;
                InverseModel::black_box(doc.regressor, nn)
            }
            "pgnn" => {
                let physical = doc.physical.ok_or_else(|| missing("physical"))?;
                let nn = doc.network.clone().ok_or_else(|| missing("network"))?.into_block()?;
                Ok(InverseModel::Pgnn(PgnnModel::new(doc.regressor, physical, nn)?))
            }
            other => Err(Error::ModelFormat(format!("unknown model kind `{other}`"))),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<InverseModel> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        InverseModel::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pgnn(theta: &[f64]) -> InverseModel {
        let mut params = NNParams::zeros(3, 4);
        params.as_mut_slice().copy_from_slice(theta);
        InverseModel::Pgnn(
            PgnnModel::new(
                RegressorSpec::centered(1e-4),
                PhysicalParams { inertia: 5.7e-5, viscous: 1.0 / 3.0 },
                NnBlock {
                    transform: InputTransform::PhysicsGuided,
                    feature_scales: vec![80.0, 15.000000000000002, std::f64::consts::TAU],
                    output_scale: 0.1,
                    params,
                },
            )
            .unwrap(),
        )
    }

    #[test]
    fn rejects_unknown_version_and_kind() {
        let text = pgnn(&[0.5; 21]).to_json().unwrap();
        assert!(InverseModel::from_json(&text.replace("\"format_version\": 1", "\"format_version\": 2")).is_err());
        assert!(InverseModel::from_json(&text.replace("\"pgnn\"", "\"lstm\"")).is_err());
    }

    #[test]
    fn physical_roundtrip() {
        let m = InverseModel::physical(
            RegressorSpec::centered(1e-4),
            PhysicalParams { inertia: 0.1 + 0.2, viscous: -1e-300 },
        )
        .unwrap();
        assert_eq!(InverseModel::from_json(&m.to_json().unwrap()).unwrap(), m);
    }

    proptest! {
        #[test]
        fn pgnn_roundtrip_is_lossless(theta in proptest::collection::vec(-1e3..1e3f64, 21)) {
            let m = pgnn(&theta);
            let back = InverseModel::from_json(&m.to_json().unwrap()).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
