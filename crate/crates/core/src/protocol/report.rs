use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::loo::{loo_on_gram, FoldExecutor, LooConfig, LooOutcome};
use super::roc::{roc_auc, RocCurve};
use super::{PairEntry, Relation, SmileType};
use crate::classifier::{pair_combine, standardize, Gram, Label};
use crate::feature::FeatureVector;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RelationResult {
    pub relation: Relation,
    pub spontaneous: Option<f64>,
    pub posed: Option<f64>,
    /// Average of the available smile-type accuracies.
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MethodReport {
    pub method: String,
    /// One row per relation, in report column order.
    pub relations: Vec<RelationResult>,
    /// Unweighted mean over the relations that have an accuracy.
    pub mean: Option<f64>,
    pub whole_set: Option<f64>,
    /// Whole-set held-out scores in pair order; skipped folds score 0.
    pub whole_scores: Vec<f64>,
    pub roc: Option<RocCurve>,
    pub models_trained: usize,
    pub skipped_folds: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvaluationReport {
    pub methods: Vec<MethodReport>,
    /// Score-sum fusion of all methods, present with two or more methods.
    pub fused: Option<MethodReport>,
    pub pair_ids: Vec<String>,
    pub labels: Vec<Label>,
    /// Number of whole-set folds.
    pub folds: usize,
    pub c: f64,
    pub seed: u64,
    pub subject_disjoint: bool,
    pub standardized: bool,
}

/// One leave-one-out run: a (relation, smile type) subset or the whole set.
struct Run {
    subset: Option<(Relation, SmileType)>,
    members: Vec<usize>,
}

fn runs(pairs: &[PairEntry]) -> Vec<Run> {
    let mut out = Vec::new();
    for relation in Relation::ALL {
        for smile in SmileType::ALL {
            let members: Vec<usize> = pairs
                .iter()
                .enumerate()
                .filter(|(_, p)| p.relation == relation && p.smile_type == smile)
                .map(|(i, _)| i)
                .collect();
            if !members.is_empty() {
                out.push(Run {
                    subset: Some((relation, smile)),
                    members,
                });
            }
        }
    }
    out.push(Run {
        subset: None,
        members: (0..pairs.len()).collect(),
    });
    out
}

fn run_loo(
    gram: &Gram,
    labels: &[Label],
    run: &Run,
    subjects: &[[usize; 2]],
    config: &LooConfig,
    executor: &dyn FoldExecutor,
) -> Result<Option<LooOutcome>> {
    match loo_on_gram(gram, labels, &run.members, Some(subjects), config, executor) {
        Ok(o) => Ok(Some(o)),
        Err(Error::TooFewSamples { .. } | Error::SingleClass) => Ok(None),
        Err(e) => Err(e),
    }
}

fn mean_of(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let present: Vec<f64> = values.flatten().collect();
    (!present.is_empty()).then(|| present.iter().sum::<f64>() / present.len() as f64)
}

fn summarize(method: String, runs: &[Run], outcomes: &[Option<LooOutcome>], labels: &[Label]) -> MethodReport {
    let accuracy_of = |subset: Option<(Relation, SmileType)>| {
        runs.iter()
            .zip(outcomes)
            .find(|(r, _)| r.subset == subset)
            .and_then(|(_, o)| o.as_ref())
            .and_then(|o| o.accuracy)
    };
    let relations: Vec<RelationResult> = Relation::ALL
        .into_iter()
        .map(|relation| {
            let spontaneous = accuracy_of(Some((relation, SmileType::Spontaneous)));
            let posed = accuracy_of(Some((relation, SmileType::Posed)));
            RelationResult {
                relation,
                spontaneous,
                posed,
                accuracy: mean_of([spontaneous, posed].into_iter()),
            }
        })
        .collect();
    let mean = mean_of(relations.iter().map(|r| r.accuracy));
    let whole = outcomes.last().and_then(|o| o.as_ref());
    let whole_scores = whole.map(|o| o.filled_scores()).unwrap_or_default();
    let roc = whole.and_then(|_| roc_auc(&whole_scores, labels).ok());
    MethodReport {
        method,
        relations,
        mean,
        whole_set: whole.and_then(|o| o.accuracy),
        whole_scores,
        roc,
        models_trained: outcomes.iter().flatten().map(|o| o.models_trained).sum(),
        skipped_folds: outcomes.iter().flatten().map(|o| o.skipped).sum(),
    }
}

fn fuse_outcomes(per_method: &[Option<&LooOutcome>], members: &[usize], labels: &[Label], standardized: bool) -> Option<LooOutcome> {
    let outcomes: Vec<&LooOutcome> = per_method.iter().copied().collect::<Option<_>>()?;
    let n = members.len();
    let mut fused: Vec<Option<f64>> = alloc::vec![Some(0.0); n];
    for o in outcomes {
        let filled = o.filled_scores();
        let values = if standardized { standardize(&filled) } else { filled };
        for (i, f) in fused.iter_mut().enumerate() {
            *f = match (*f, o.scores[i]) {
                (Some(acc), Some(_)) => Some(acc + values[i]),
                _ => None,
            };
        }
    }
    let scored: Vec<(f64, Label)> = fused
        .iter()
        .zip(members)
        .filter_map(|(s, &m)| s.map(|s| (s, labels[m])))
        .collect();
    let correct = scored
        .iter()
        .filter(|(s, l)| Label::from_score(*s) == *l)
        .count();
    Some(LooOutcome {
        accuracy: (!scored.is_empty()).then(|| 100.0 * correct as f64 / scored.len() as f64),
        skipped: n - scored.len(),
        models_trained: 0,
        scores: fused,
    })
}

/// Per-relation and whole-set leave-one-out for every method, plus the
/// score-sum fusion when there are several methods.
///
/// Each method is a name and a map from video id to feature. Runs whose
/// subset has fewer than three pairs or a single class report no accuracy.
pub fn evaluate_all(
    methods: &[(String, BTreeMap<String, FeatureVector>)],
    pairs: &[PairEntry],
    config: &LooConfig,
    standardized: bool,
    seed: u64,
    executor: &dyn FoldExecutor,
) -> Result<EvaluationReport> {
    if methods.is_empty() {
        return Err(Error::InvalidParams("no feature sets to evaluate".into()));
    }
    let mut missing = BTreeSet::new();
    for (_, features) in methods {
        for p in pairs {
            for v in [&p.video_a, &p.video_b] {
                if !features.contains_key(v) {
                    missing.insert(v.clone());
                }
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingFeatures(missing.into_iter().collect()));
    }
    for p in pairs {
        p.validate()?;
    }

    let labels: Vec<Label> = pairs.iter().map(|p| p.label).collect();
    let mut subject_ids: BTreeMap<&str, usize> = BTreeMap::new();
    let mut subjects: Vec<[usize; 2]> = Vec::with_capacity(pairs.len());
    for p in pairs {
        let mut pair = [0; 2];
        for (slot, s) in pair.iter_mut().zip([&p.subject_a, &p.subject_b]) {
            let next = subject_ids.len();
            *slot = *subject_ids.entry(s.as_str()).or_insert(next);
        }
        subjects.push(pair);
    }
    let runs = runs(pairs);

    let mut reports = Vec::new();
    let mut all_outcomes: Vec<Vec<Option<LooOutcome>>> = Vec::new();
    for (name, features) in methods {
        let combined = pairs
            .iter()
            .map(|p| pair_combine(&features[&p.video_a], &features[&p.video_b]))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::InvalidParams(format!("{name}: {e}")))?;
        let gram = Gram::linear(&combined)?;
        let outcomes = runs
            .iter()
            .map(|r| run_loo(&gram, &labels, r, &subjects, config, executor))
            .collect::<Result<Vec<_>>>()?;
        reports.push(summarize(name.clone(), &runs, &outcomes, &labels));
        all_outcomes.push(outcomes);
    }

    let fused = (methods.len() > 1).then(|| {
        let outcomes: Vec<Option<LooOutcome>> = runs
            .iter()
            .enumerate()
            .map(|(r, run)| {
                let per: Vec<Option<&LooOutcome>> = all_outcomes.iter().map(|o| o[r].as_ref()).collect();
                fuse_outcomes(&per, &run.members, &labels, standardized)
            })
            .collect();
        summarize("Fusion".into(), &runs, &outcomes, &labels)
    });

    Ok(EvaluationReport {
        methods: reports,
        fused,
        pair_ids: pairs.iter().map(|p| p.pair_id.clone()).collect(),
        labels,
        folds: pairs.len(),
        c: config.svm.c,
        seed,
        subject_disjoint: config.subject_disjoint,
        standardized,
    })
}

/// Plain-text table: one row per method, relation columns, Mean and Whole set.
pub fn render_table(report: &EvaluationReport) -> String {
    let rows: Vec<&MethodReport> = report.methods.iter().chain(report.fused.as_ref()).collect();
    let width = rows.iter().map(|r| r.method.len()).max().unwrap_or(6).max(6);
    let cell = |v: Option<f64>| match v {
        Some(v) => format!("{v:.2}"),
        None => String::from("-"),
    };
    let mut out = String::new();
    let _ = write!(out, "{:<width$}", "Method");
    for r in Relation::ALL {
        let _ = write!(out, " {:>7}", r.code());
    }
    let _ = writeln!(out, " {:>7} {:>9}", "Mean", "Whole set");
    for row in rows {
        let _ = write!(out, "{:<width$}", row.method);
        for r in &row.relations {
            let _ = write!(out, " {:>7}", cell(r.accuracy));
        }
        let _ = writeln!(out, " {:>7} {:>9}", cell(row.mean), cell(row.whole_set));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::loo::Sequential;
    use crate::rng::SplitMix64;
    use alloc::vec;

    fn dataset(seed: u64) -> (BTreeMap<String, FeatureVector>, Vec<PairEntry>) {
        let mut rng = SplitMix64::new(seed);
        let mut features = BTreeMap::new();
        let mut pairs = Vec::new();
        for (ri, relation) in Relation::ALL.into_iter().enumerate() {
            for smile in SmileType::ALL {
                for k in 0..4 {
                    let label = if k % 2 == 0 { Label::Kin } else { Label::NonKin };
                    let id = format!("{}_{}_{k}", relation.code(), smile.code());
                    let va = format!("{id}_a");
                    let vb = format!("{id}_b");
                    let base: Vec<f64> = (0..6).map(|_| rng.uniform(0.1, 1.0)).collect();
                    let spread = if label == Label::Kin { 0.01 } else { 0.5 };
                    let other: Vec<f64> = base.iter().map(|v| v + spread * rng.next_f64()).collect();
                    features.insert(va.clone(), FeatureVector::new("T", base));
                    features.insert(vb.clone(), FeatureVector::new("T", other));
                    pairs.push(PairEntry {
                        pair_id: id.clone(),
                        video_a: va,
                        video_b: vb,
                        subject_a: format!("s{ri}{k}a{}", smile.code()),
                        subject_b: format!("s{ri}{k}b{}", smile.code()),
                        relation,
                        smile_type: smile,
                        label,
                    });
                }
            }
        }
        (features, pairs)
    }

    #[test]
    fn report_layout_and_mean() {
        let (features, pairs) = dataset(1);
        let methods = vec![("A".into(), features.clone()), ("B".into(), features)];
        let report = evaluate_all(&methods, &pairs, &LooConfig::default(), false, 9, &Sequential).unwrap();
        assert_eq!(report.methods.len(), 2);
        assert!(report.fused.is_some());
        assert_eq!(report.folds, 56);
        for m in report.methods.iter().chain(report.fused.as_ref()) {
            assert_eq!(m.relations.len(), 7);
            let accs: Vec<f64> = m.relations.iter().map(|r| r.accuracy.unwrap()).collect();
            let mean = accs.iter().sum::<f64>() / 7.0;
            assert!((m.mean.unwrap() - mean).abs() < 1e-9);
            assert!(accs.iter().all(|a| (0.0..=100.0).contains(a)));
            assert_eq!(m.whole_scores.len(), 56);
        }
        let table = render_table(&report);
        assert!(table.lines().next().unwrap().contains("S-S"));
        assert!(table.lines().next().unwrap().ends_with("Whole set"));
        assert_eq!(table.lines().count(), 4);
    }

    #[test]
    fn missing_features_are_listed() {
        let (mut features, pairs) = dataset(2);
        features.remove("S-S_posed_1_b");
        features.remove("F-S_spontaneous_0_a");
        let err = evaluate_all(&[("A".into(), features)], &pairs, &LooConfig::default(), false, 0, &Sequential)
            .unwrap_err();
        assert_eq!(
            err,
            Error::MissingFeatures(vec!["F-S_spontaneous_0_a".into(), "S-S_posed_1_b".into()])
        );
    }
}
