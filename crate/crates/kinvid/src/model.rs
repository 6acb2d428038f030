//! Trained model files: JSON `{"descriptor", "dim", "C", "bias", "weights"}`.

use std::path::Path;

use kinvid_core::classifier::SvmModel;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub descriptor: String,
    pub dim: usize,
    #[serde(rename = "C")]
    pub c: f64,
    pub bias: f64,
    pub weights: Vec<f64>,
}

impl ModelFile {
    pub fn new(descriptor: String, model: &SvmModel) -> Self {
        ModelFile {
            descriptor,
            dim: model.dim(),
            c: model.c,
            bias: model.bias,
            weights: model.weights.clone(),
        }
    }

    pub fn decision(&self, x: &[f64]) -> Option<f64> {
        (x.len() == self.dim).then(|| self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias)
    }
}

pub fn read_model(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let m: ModelFile = serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))?;
    if m.weights.len() != m.dim {
        return Err(Error::format(path, format!("dim {} but {} weights", m.dim, m.weights.len())));
    }
    Ok(m)
}

pub fn write_model(path: &Path, model: &ModelFile) -> Result<()> {
    let mut text = serde_json::to_string(model).expect("model serialises");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
