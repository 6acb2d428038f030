//! BSIF filter bank text files: `BSIF <f> <W>` then `f*W*W` numbers,
//! filter-major and row-major within a filter.

use std::fmt::Write as _;
use std::path::Path;

use kinvid_core::coders::FilterBank;

use crate::{Error, Result};

pub fn parse_filter_bank(text: &str) -> std::result::Result<FilterBank, String> {
    let mut lines = text.splitn(2, '\n');
    let header = lines.next().unwrap_or("");
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (count, side) = match fields.as_slice() {
        ["BSIF", f, w] => (
            f.parse::<usize>().map_err(|_| format!("bad filter count {f:?}"))?,
            w.parse::<usize>().map_err(|_| format!("bad filter side {w:?}"))?,
        ),
        _ => return Err(format!("header must be \"BSIF <f> <W>\", found {header:?}")),
    };
    let expected = count * side * side;
    let values = lines
        .next()
        .unwrap_or("")
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| format!("bad number {t:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if values.len() != expected {
        return Err(format!("expected {expected} values, found {}", values.len()));
    }
    FilterBank::new(count, side, values).map_err(|e| e.to_string())
}

/// One filter row per line, 17 significant digits.
pub fn format_filter_bank(bank: &FilterBank) -> String {
    let mut out = format!("BSIF {} {}\n", bank.count(), bank.side());
    for row in bank.weights().chunks(bank.side()) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", line.join(" ")).expect("write to string");
    }
    out
}

pub fn read_filter_bank(path: &Path) -> Result<FilterBank> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_filter_bank(&text).map_err(|m| Error::format(path, m))
}

pub fn write_filter_bank(path: &Path, bank: &FilterBank) -> Result<()> {
    std::fs::write(path, format_filter_bank(bank)).map_err(|e| Error::io(path, e))
}
