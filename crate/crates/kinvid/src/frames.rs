//! Frame directories: `000001.pgm`, `000002.pgm`, ... (or `.ppm`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use kinvid_core::{FaceVideo, Frame};

use crate::pnm::{read_pnm, write_pnm};
use crate::{Error, Result};

/// Name of the frame with 1-based `index`.
pub fn frame_name(index: usize, channels: usize) -> String {
    let ext = if channels == 1 { "pgm" } else { "ppm" };
    format!("{index:06}.{ext}")
}

fn parse_name(name: &str) -> Option<usize> {
    let (stem, ext) = name.split_once('.')?;
    if stem.len() != 6 || !stem.bytes().all(|b| b.is_ascii_digit()) || !matches!(ext, "pgm" | "ppm") {
        return None;
    }
    stem.parse().ok()
}

/// Frame files of `dir` by index. Other files are ignored.
pub fn list_frames(dir: &Path) -> Result<BTreeMap<usize, PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = BTreeMap::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name();
        let Some(index) = name.to_str().and_then(parse_name) else {
            continue;
        };
        if let Some(prev) = out.insert(index, entry.path()) {
            return Err(Error::format(&prev, format!("frame {index:06} exists as both .pgm and .ppm")));
        }
    }
    if out.is_empty() {
        return Err(Error::format(dir, "no NNNNNN.pgm or NNNNNN.ppm frames"));
    }
    for (expected, &index) in (1..).zip(out.keys()) {
        if index != expected {
            return Err(Error::format(dir, format!("missing frame {expected:06}")));
        }
    }
    Ok(out)
}

/// Loads every frame in index order. All frames must share width, height and channels.
pub fn load_frames(dir: &Path) -> Result<Vec<Frame>> {
    let files = list_frames(dir)?;
    let mut frames: Vec<Frame> = Vec::with_capacity(files.len());
    for path in files.values() {
        let frame = read_pnm(path)?;
        if let Some(first) = frames.first() {
            let a = (first.width(), first.height(), first.channels());
            let b = (frame.width(), frame.height(), frame.channels());
            if a != b {
                return Err(Error::format(
                    path,
                    format!("frame is {}x{}x{}, earlier frames are {}x{}x{}", b.0, b.1, b.2, a.0, a.1, a.2),
                ));
            }
        }
        frames.push(frame);
    }
    Ok(frames)
}

pub fn load_video(dir: &Path, fps: f64) -> Result<FaceVideo> {
    let frames = load_frames(dir)?;
    FaceVideo::from_frames(&frames, fps).map_err(|e| Error::context(dir, e))
}

/// Writes frames as `000001.pgm`... into `dir`, creating it if needed.
pub fn write_frames(dir: &Path, frames: &[Frame]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (i, f) in frames.iter().enumerate() {
        write_pnm(&dir.join(frame_name(i + 1, f.channels())), f)?;
    }
    Ok(())
}

pub fn write_video(dir: &Path, video: &FaceVideo) -> Result<()> {
    let frames: Vec<Frame> = (0..video.frames()).map(|t| video.frame(t)).collect();
    write_frames(dir, &frames)
}
