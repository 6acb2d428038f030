use alloc::vec::Vec;

use crate::classifier::{solve_dual, Gram, Label, SvmParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LooConfig {
    pub svm: SvmParams,
    /// Drop training samples that share a subject with the held-out sample.
    pub subject_disjoint: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LooOutcome {
    /// Percentage of scored folds whose sign matches the label; `None` when
    /// every fold was skipped.
    pub accuracy: Option<f64>,
    /// Held-out decision value per member; `None` for skipped folds.
    pub scores: Vec<Option<f64>>,
    /// Folds whose training set lacked a class.
    pub skipped: usize,
    pub models_trained: usize,
}

/// Runs independent folds, returning results in fold order.
pub trait FoldExecutor {
    fn run(
        &self,
        folds: usize,
        fold: &(dyn Fn(usize) -> Result<Option<f64>> + Sync),
    ) -> Vec<Result<Option<f64>>>;
}

/// Runs folds one after another.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl FoldExecutor for Sequential {
    fn run(
        &self,
        folds: usize,
        fold: &(dyn Fn(usize) -> Result<Option<f64>> + Sync),
    ) -> Vec<Result<Option<f64>>> {
        (0..folds).map(fold).collect()
    }
}

/// Leave-one-out over `members` (indices into the Gram matrix).
///
/// `subjects` gives two subject indices per Gram row and is required when
/// `config.subject_disjoint` is set.
pub fn loo_on_gram(
    gram: &Gram,
    labels: &[Label],
    members: &[usize],
    subjects: Option<&[[usize; 2]]>,
    config: &LooConfig,
    executor: &dyn FoldExecutor,
) -> Result<LooOutcome> {
    if members.len() < 3 {
        return Err(Error::TooFewSamples {
            found: members.len(),
            required: 3,
        });
    }
    let classes = |l: Label| members.iter().any(|&m| labels[m] == l);
    if !(classes(Label::Kin) && classes(Label::NonKin)) {
        return Err(Error::SingleClass);
    }
    let subjects = match (config.subject_disjoint, subjects) {
        (true, None) => {
            return Err(Error::InvalidParams(
                "subject-disjoint folds need subject ids".into(),
            ))
        }
        (true, Some(s)) => Some(s),
        (false, _) => None,
    };
    let fold = |k: usize| -> Result<Option<f64>> {
        let held = members[k];
        let train: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&m| m != held)
            .filter(|&m| match subjects {
                Some(s) => !s[m].iter().any(|x| s[held].contains(x)),
                None => true,
            })
            .collect();
        match solve_dual(gram, labels, &train, &config.svm) {
            Ok(sol) => Ok(Some(sol.decision(gram, labels, held))),
            Err(Error::SingleClass) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let results = executor.run(members.len(), &fold);
    let mut scores = Vec::with_capacity(members.len());
    for r in results {
        scores.push(r?);
    }
    let mut correct = 0usize;
    let mut scored = 0usize;
    for (s, &m) in scores.iter().zip(members) {
        if let Some(s) = s {
            scored += 1;
            if Label::from_score(*s) == labels[m] {
                correct += 1;
            }
        }
    }
    Ok(LooOutcome {
        accuracy: (scored > 0).then(|| 100.0 * correct as f64 / scored as f64),
        skipped: members.len() - scored,
        models_trained: scored,
        scores,
    })
}

/// Sample-level leave-one-out on combined vectors.
pub fn loo_evaluate<V: AsRef<[f64]>>(samples: &[V], labels: &[Label], svm: &SvmParams) -> Result<LooOutcome> {
    if samples.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: samples.len(),
            found: labels.len(),
        });
    }
    let gram = Gram::linear(samples)?;
    let members: Vec<usize> = (0..samples.len()).collect();
    let config = LooConfig {
        svm: *svm,
        subject_disjoint: false,
    };
    loo_on_gram(&gram, labels, &members, None, &config, &Sequential)
}

impl LooOutcome {
    /// Scores with skipped folds replaced by zero.
    pub fn filled_scores(&self) -> Vec<f64> {
        self.scores.iter().map(|s| s.unwrap_or(0.0)).collect()
    }
}
