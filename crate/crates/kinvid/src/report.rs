//! Evaluation outputs: `report.json`, `table.txt`, and per-method
//! `roc_<method>.csv` and `scores_<method>.csv`.

use std::path::Path;

use kinvid_core::protocol::{render_table, EvaluationReport, MethodReport, RocCurve};

use crate::landmarks::{csv_error, csv_writer};
use crate::scores::{write_scores, ScoreRow};
use crate::{Error, Result};

/// File-name-safe form of a method name.
pub fn method_slug(method: &str) -> String {
    let mut slug = String::new();
    for c in method.chars() {
        let c = if c.is_ascii_alphanumeric() || c == '-' { c.to_ascii_lowercase() } else { '_' };
        if !(c == '_' && slug.ends_with('_')) {
            slug.push(c);
        }
    }
    slug.trim_matches('_').to_string()
}

pub fn write_roc(path: &Path, roc: &RocCurve) -> Result<()> {
    let mut writer = csv_writer(path, &["fpr", "tpr"])?;
    for (fpr, tpr) in &roc.points {
        writer
            .write_record([fpr.to_string(), tpr.to_string()])
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

fn write_method(dir: &Path, report: &EvaluationReport, method: &MethodReport) -> Result<()> {
    let slug = method_slug(&method.method);
    if let Some(roc) = &method.roc {
        write_roc(&dir.join(format!("roc_{slug}.csv")), roc)?;
    }
    if method.whole_scores.len() == report.pair_ids.len() {
        let rows: Vec<ScoreRow> = report
            .pair_ids
            .iter()
            .zip(&report.labels)
            .zip(&method.whole_scores)
            .map(|((id, &label), &score)| ScoreRow {
                pair_id: id.clone(),
                label,
                score,
            })
            .collect();
        write_scores(&dir.join(format!("scores_{slug}.csv")), &rows)?;
    }
    Ok(())
}

pub fn write_report(dir: &Path, report: &EvaluationReport) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let json_path = dir.join("report.json");
    let mut json = serde_json::to_string_pretty(report).expect("report serialises");
    json.push('\n');
    std::fs::write(&json_path, json).map_err(|e| Error::io(&json_path, e))?;
    let table_path = dir.join("table.txt");
    std::fs::write(&table_path, render_table(report)).map_err(|e| Error::io(&table_path, e))?;
    for m in report.methods.iter().chain(&report.fused) {
        write_method(dir, report, m)?;
    }
    Ok(())
}
