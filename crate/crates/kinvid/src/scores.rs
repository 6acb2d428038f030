//! Score CSV: `pair_id,label,score` with labels 1 and -1.

use std::path::Path;

use kinvid_core::classifier::Label;
use serde::{Deserialize, Serialize};

use crate::landmarks::{csv_error, csv_writer};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub pair_id: String,
    pub label: Label,
    pub score: f64,
}

#[derive(Serialize, Deserialize)]
struct Raw {
    pair_id: String,
    label: i8,
    score: f64,
}

pub fn read_scores(path: &Path) -> Result<Vec<ScoreRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?;
    if headers != vec!["pair_id", "label", "score"] {
        return Err(Error::format(path, "header must be pair_id,label,score"));
    }
    reader
        .deserialize()
        .map(|row| {
            let r: Raw = row.map_err(|e| csv_error(path, e))?;
            let label = Label::from_i8(r.label)
                .ok_or_else(|| Error::format(path, format!("pair {}: label must be 1 or -1", r.pair_id)))?;
            Ok(ScoreRow {
                pair_id: r.pair_id,
                label,
                score: r.score,
            })
        })
        .collect()
}

pub fn write_scores(path: &Path, rows: &[ScoreRow]) -> Result<()> {
    let mut writer = csv_writer(path, &["pair_id", "label", "score"])?;
    for r in rows {
        writer
            .serialize(Raw {
                pair_id: r.pair_id.clone(),
                label: r.label.as_i8(),
                score: r.score,
            })
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}
