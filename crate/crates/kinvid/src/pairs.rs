//! Pair list CSV:
//! `pair_id,video_a,video_b,subject_a,subject_b,relation,smile_type,label`.

use std::path::Path;

use kinvid_core::classifier::Label;
use kinvid_core::protocol::PairEntry;
use serde::{Deserialize, Serialize};

use crate::landmarks::{csv_error, csv_writer};
use crate::{Error, Result};

pub const HEADER: [&str; 8] = [
    "pair_id",
    "video_a",
    "video_b",
    "subject_a",
    "subject_b",
    "relation",
    "smile_type",
    "label",
];

#[derive(Serialize, Deserialize)]
struct Raw {
    pair_id: String,
    video_a: String,
    video_b: String,
    subject_a: String,
    subject_b: String,
    relation: String,
    smile_type: String,
    label: i8,
}

pub fn read_pairs(path: &Path) -> Result<Vec<PairEntry>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?;
    if headers != HEADER.to_vec() {
        return Err(Error::format(path, format!("header must be {}", HEADER.join(","))));
    }
    let mut out = Vec::new();
    for row in reader.deserialize() {
        let r: Raw = row.map_err(|e| csv_error(path, e))?;
        let bad = |m: String| Error::format(path, format!("pair {}: {m}", r.pair_id));
        let entry = PairEntry {
            relation: r.relation.parse().map_err(|e: kinvid_core::Error| bad(e.to_string()))?,
            smile_type: r.smile_type.parse().map_err(|e: kinvid_core::Error| bad(e.to_string()))?,
            label: Label::from_i8(r.label).ok_or_else(|| bad("label must be 1 or -1".into()))?,
            pair_id: r.pair_id.clone(),
            video_a: r.video_a,
            video_b: r.video_b,
            subject_a: r.subject_a,
            subject_b: r.subject_b,
        };
        entry.validate().map_err(|e| Error::context(path, e))?;
        out.push(entry);
    }
    Ok(out)
}

pub fn write_pairs(path: &Path, pairs: &[PairEntry]) -> Result<()> {
    let mut writer = csv_writer(path, &HEADER)?;
    for p in pairs {
        writer
            .serialize(Raw {
                pair_id: p.pair_id.clone(),
                video_a: p.video_a.clone(),
                video_b: p.video_b.clone(),
                subject_a: p.subject_a.clone(),
                subject_b: p.subject_b.clone(),
                relation: p.relation.code().into(),
                smile_type: p.smile_type.code().into(),
                label: p.label.as_i8(),
            })
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}
