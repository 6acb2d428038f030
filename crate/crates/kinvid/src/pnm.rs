//! Binary PGM (`P5`) and PPM (`P6`) images with 8-bit samples.

use std::path::Path;

use kinvid_core::Frame;

use crate::{Error, Result};

/// Parses a `P5` or `P6` file. Header comments (`#` to end of line) are allowed.
pub fn parse_pnm(bytes: &[u8]) -> std::result::Result<Frame, String> {
    let mut pos = 0;
    let magic = token(bytes, &mut pos).ok_or("missing magic number")?;
    let channels = match magic {
        b"P5" => 1,
        b"P6" => 3,
        _ => return Err(format!("bad magic {:?}, expected P5 or P6", String::from_utf8_lossy(magic))),
    };
    let mut field = |name: &str| -> std::result::Result<usize, String> {
        let t = token(bytes, &mut pos).ok_or_else(|| format!("missing {name}"))?;
        std::str::from_utf8(t)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format!("bad {name} {:?}", String::from_utf8_lossy(t)))
    };
    let width = field("width")?;
    let height = field("height")?;
    let maxval = field("maxval")?;
    if maxval != 255 {
        return Err(format!("maxval {maxval} unsupported, expected 255"));
    }
    if width == 0 || height == 0 {
        return Err(format!("empty image {width}x{height}"));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err("missing whitespace after header".into()),
    }
    let expected = width * height * channels;
    let raster = &bytes[pos..];
    if raster.len() != expected {
        return Err(format!("raster has {} bytes, expected {expected}", raster.len()));
    }
    Frame::new(width, height, channels, raster.to_vec()).map_err(|e| e.to_string())
}

fn token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    loop {
        match bytes.get(*pos)? {
            b'#' => {
                while *bytes.get(*pos)? != b'\n' {
                    *pos += 1;
                }
            }
            b if b.is_ascii_whitespace() => *pos += 1,
            _ => break,
        }
    }
    let start = *pos;
    while bytes.get(*pos).is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#') {
        *pos += 1;
    }
    Some(&bytes[start..*pos])
}

/// Serialises with the header `P5\n<w> <h>\n255\n` (or `P6`).
pub fn encode_pnm(frame: &Frame) -> Vec<u8> {
    let magic = if frame.channels() == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.extend_from_slice(frame.data());
    out
}

pub fn read_pnm(path: &Path) -> Result<Frame> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_pnm(&bytes).map_err(|m| Error::format(path, m))
}

pub fn write_pnm(path: &Path, frame: &Frame) -> Result<()> {
    std::fs::write(path, encode_pnm(frame)).map_err(|e| Error::io(path, e))
}
