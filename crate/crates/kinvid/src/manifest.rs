//! JSON manifests: an array of video records.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use kinvid_core::protocol::SmileType;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VideoManifest {
    pub video_id: String,
    pub frames_dir: PathBuf,
    pub landmarks: PathBuf,
    pub subject_id: String,
    pub smile_type: SmileType,
}

/// Reads a manifest, resolving relative paths against its directory.
pub fn read_manifest(path: &Path) -> Result<Vec<VideoManifest>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut records: Vec<VideoManifest> =
        serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut seen = BTreeSet::new();
    for r in &mut records {
        if !seen.insert(r.video_id.clone()) {
            return Err(Error::format(path, format!("duplicate video id {:?}", r.video_id)));
        }
        r.frames_dir = base.join(&r.frames_dir);
        r.landmarks = base.join(&r.landmarks);
    }
    Ok(records)
}

/// Writes `records` as given; paths are stored verbatim.
pub fn write_manifest(path: &Path, records: &[VideoManifest]) -> Result<()> {
    let mut text = serde_json::to_string_pretty(records).expect("manifest serialises");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
