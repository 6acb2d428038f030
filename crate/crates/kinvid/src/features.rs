//! Feature files: one JSON object per video and descriptor.

use std::path::{Path, PathBuf};

use kinvid_core::FeatureVector;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureFile {
    pub video_id: String,
    pub descriptor: String,
    pub scales: Vec<String>,
    pub values: Vec<f64>,
}

#[derive(Serialize)]
struct Out<'a> {
    video_id: &'a str,
    descriptor: &'a str,
    scales: &'a [String],
    length: usize,
    values: Vec<Box<RawValue>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct In {
    video_id: String,
    descriptor: String,
    scales: Vec<String>,
    length: usize,
    values: Vec<f64>,
}

/// Decimal with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl FeatureFile {
    pub fn to_json(&self) -> String {
        let values = self
            .values
            .iter()
            .map(|v| RawValue::from_string(format_f64(*v)).expect("finite number is valid JSON"))
            .collect();
        let out = Out {
            video_id: &self.video_id,
            descriptor: &self.descriptor,
            scales: &self.scales,
            length: self.values.len(),
            values,
        };
        let mut s = serde_json::to_string(&out).expect("feature file serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let f: In = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if f.length != f.values.len() {
            return Err(format!("length {} but {} values", f.length, f.values.len()));
        }
        Ok(FeatureFile {
            video_id: f.video_id,
            descriptor: f.descriptor,
            scales: f.scales,
            values: f.values,
        })
    }

    pub fn to_feature_vector(&self) -> FeatureVector {
        FeatureVector::new(self.descriptor.clone(), self.values.clone())
    }
}

/// Path of the feature file for `video_id` inside `dir`.
pub fn feature_path(dir: &Path, video_id: &str) -> PathBuf {
    dir.join(format!("{video_id}.json"))
}

pub fn read_feature(path: &Path) -> Result<FeatureFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    FeatureFile::from_json(&text).map_err(|m| Error::format(path, m))
}

pub fn write_feature(path: &Path, feature: &FeatureFile) -> Result<()> {
    if feature.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::format(path, "feature has non-finite values"));
    }
    std::fs::write(path, feature.to_json()).map_err(|e| Error::io(path, e))
}
