//! Evaluation protocol: pair lists, negative generation, leave-one-out,
//! ROC/AUC and per-relation reports.

mod loo;
mod negatives;
mod report;
mod roc;

pub use loo::{loo_evaluate, loo_on_gram, FoldExecutor, LooConfig, LooOutcome, Sequential};
pub use negatives::{generate_negatives, FamilyGraph};
pub use report::{evaluate_all, render_table, EvaluationReport, MethodReport, RelationResult};
pub use roc::{roc_auc, RocCurve};

use alloc::format;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use crate::classifier::Label;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Relation {
    #[cfg_attr(feature = "serde", serde(rename = "S-S"))]
    SisterSister,
    #[cfg_attr(feature = "serde", serde(rename = "B-B"))]
    BrotherBrother,
    #[cfg_attr(feature = "serde", serde(rename = "S-B"))]
    SisterBrother,
    #[cfg_attr(feature = "serde", serde(rename = "M-D"))]
    MotherDaughter,
    #[cfg_attr(feature = "serde", serde(rename = "M-S"))]
    MotherSon,
    #[cfg_attr(feature = "serde", serde(rename = "F-D"))]
    FatherDaughter,
    #[cfg_attr(feature = "serde", serde(rename = "F-S"))]
    FatherSon,
}

impl Relation {
    /// Report column order.
    pub const ALL: [Relation; 7] = [
        Relation::SisterSister,
        Relation::BrotherBrother,
        Relation::SisterBrother,
        Relation::MotherDaughter,
        Relation::MotherSon,
        Relation::FatherDaughter,
        Relation::FatherSon,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Relation::SisterSister => "S-S",
            Relation::BrotherBrother => "B-B",
            Relation::SisterBrother => "S-B",
            Relation::MotherDaughter => "M-D",
            Relation::MotherSon => "M-S",
            Relation::FatherDaughter => "F-D",
            Relation::FatherSon => "F-S",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Relation::ALL
            .into_iter()
            .find(|r| r.code() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown relation {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum SmileType {
    Spontaneous,
    Posed,
}

impl SmileType {
    pub const ALL: [SmileType; 2] = [SmileType::Spontaneous, SmileType::Posed];

    pub fn code(self) -> &'static str {
        match self {
            SmileType::Spontaneous => "spontaneous",
            SmileType::Posed => "posed",
        }
    }
}

impl fmt::Display for SmileType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for SmileType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        SmileType::ALL
            .into_iter()
            .find(|t| t.code() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown smile type {s:?}")))
    }
}

/// One row of a pair list.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairEntry {
    pub pair_id: String,
    pub video_a: String,
    pub video_b: String,
    pub subject_a: String,
    pub subject_b: String,
    pub relation: Relation,
    pub smile_type: SmileType,
    pub label: Label,
}

impl PairEntry {
    pub fn validate(&self) -> Result<(), Error> {
        if self.subject_a == self.subject_b {
            return Err(Error::SelfPair(self.pair_id.clone()));
        }
        Ok(())
    }
}
