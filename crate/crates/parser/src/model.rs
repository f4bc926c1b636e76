//! Trained parser model and its on-disk form.

use std::path::Path;

use rstkit::relmap::LabelMode;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureConfig;
use crate::perceptron::{StoredWeights, Weights};
use crate::transition::Transition;

const FORMAT: &str = "rstkit-parser-model/1";

#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub config: FeatureConfig,
    /// Label normalization applied to gold trees before training.
    pub labels: LabelMode,
    pub weights: Weights,
    /// Actions in class order.
    actions: Vec<Transition>,
}

#[derive(Serialize, Deserialize)]
struct Stored {
    format: String,
    config_hash: String,
    config: FeatureConfig,
    labels: LabelMode,
    weights: StoredWeights,
}

impl Model {
    pub fn new(config: FeatureConfig, labels: LabelMode, weights: Weights) -> Result<Self> {
        let actions = weights
            .classes()
            .iter()
            .map(|id| Transition::from_id(id).ok_or_else(|| Error::ModelFormat(format!("bad action id `{id}`"))))
            .collect::<Result<_>>()?;
        Ok(Model {
            config,
            labels,
            weights,
            actions,
        })
    }

    /// A model with no actions and no weights.
    pub fn empty(config: FeatureConfig, labels: LabelMode) -> Self {
        Model::new(config, labels, Weights::new(Vec::new())).expect("no actions to parse")
    }

    pub fn actions(&self) -> &[Transition] {
        &self.actions
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&Stored {
            format: FORMAT.to_owned(),
            config_hash: self.config.hash(),
            config: self.config,
            labels: self.labels,
            weights: self.weights.to_stored(),
        })
        .expect("model serializes")
    }

    /// Parse a stored model. With `expected`, the stored feature config must
    /// hash to the same value.
    pub fn from_json(content: &str, expected: Option<&FeatureConfig>) -> Result<Self> {
        let s: Stored = serde_json::from_str(content).map_err(|e| Error::ModelFormat(e.to_string()))?;
        if s.format != FORMAT {
            return Err(Error::ModelFormat(format!("unsupported format `{}`", s.format)));
        }
        if s.config.hash() != s.config_hash {
            return Err(Error::ConfigMismatch {
                expected: s.config.hash(),
                found: s.config_hash,
            });
        }
        if let Some(cfg) = expected {
            if cfg.hash() != s.config_hash {
                return Err(Error::ConfigMismatch {
                    expected: cfg.hash(),
                    found: s.config_hash,
                });
            }
        }
        let weights = Weights::from_stored(s.weights).map_err(Error::ModelFormat)?;
        Model::new(s.config, s.labels, weights)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path, expected: Option<&FeatureConfig>) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Model::from_json(&content, expected)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::Stacking;

    #[test]
    fn refuses_other_config() {
        let m = Model::empty(FeatureConfig::default(), LabelMode::Fine);
        let json = m.to_json();
        assert_eq!(Model::from_json(&json, Some(&FeatureConfig::default())).unwrap(), m);
        let other = FeatureConfig {
            stacking: Stacking::Graph,
            ..Default::default()
        };
        assert!(matches!(
            Model::from_json(&json, Some(&other)),
            Err(Error::ConfigMismatch { .. })
        ));
        let tampered = json.replace("\"organizational\":true", "\"organizational\":false");
        assert!(matches!(
            Model::from_json(&tampered, None),
            Err(Error::ConfigMismatch { .. })
        ));
    }
}
