//! Eye landmark CSV: `frame,lx,ly,rx,ry` with 0-based frame indices.

use std::path::Path;

use kinvid_core::align::{EyeAnnotation, Point};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    frame: usize,
    lx: f64,
    ly: f64,
    rx: f64,
    ry: f64,
}

pub fn read_landmarks(path: &Path) -> Result<Vec<EyeAnnotation>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?;
    if headers != vec!["frame", "lx", "ly", "rx", "ry"] {
        return Err(Error::format(path, "header must be frame,lx,ly,rx,ry"));
    }
    reader
        .deserialize()
        .map(|row| {
            let r: Row = row.map_err(|e| csv_error(path, e))?;
            Ok(EyeAnnotation {
                frame: r.frame,
                left: Point::new(r.lx, r.ly),
                right: Point::new(r.rx, r.ry),
            })
        })
        .collect()
}

pub fn write_landmarks(path: &Path, eyes: &[EyeAnnotation]) -> Result<()> {
    let mut writer = csv_writer(path, &["frame", "lx", "ly", "rx", "ry"])?;
    for e in eyes {
        writer
            .serialize(Row {
                frame: e.frame,
                lx: e.left.x,
                ly: e.left.y,
                rx: e.right.x,
                ry: e.right.y,
            })
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    let message = e.to_string();
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        _ => Error::format(path, message),
    }
}

/// Writer that emits `header` even when no rows follow.
pub(crate) fn csv_writer(path: &Path, header: &[&str]) -> Result<csv::Writer<std::fs::File>> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    writer.write_record(header).map_err(|e| csv_error(path, e))?;
    Ok(writer)
}
