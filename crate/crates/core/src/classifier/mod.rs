//! Pair combination, linear SVM and score fusion.

mod svm;

pub use svm::{primal_objective, solve_dual, svm_decision, svm_train, DualSolution, Gram, SvmModel, SvmParams};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::feature::FeatureVector;
use crate::{Error, Result};

/// Kin (+1) or non-kin (-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Label {
    Kin,
    NonKin,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Kin => 1.0,
            Label::NonKin => -1.0,
        }
    }

    /// Label predicted by a decision value; zero counts as kin.
    pub fn from_score(score: f64) -> Self {
        if score >= 0.0 {
            Label::Kin
        } else {
            Label::NonKin
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Label::Kin => 1,
            Label::NonKin => -1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Self> {
        match v {
            1 => Some(Label::Kin),
            -1 => Some(Label::NonKin),
            _ => None,
        }
    }
}

/// Normalised absolute difference `f_i = |x_i - y_i| / sum_j (x_j + y_j)`.
pub fn pair_combine_values(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let mass: f64 = x.iter().zip(y).map(|(a, b)| a + b).sum();
    if !(mass > 0.0) {
        return Err(Error::ZeroMass);
    }
    Ok(x.iter().zip(y).map(|(a, b)| libm::fabs(a - b) / mass).collect())
}

/// [`pair_combine_values`] on two features of the same descriptor.
pub fn pair_combine(x: &FeatureVector, y: &FeatureVector) -> Result<Vec<f64>> {
    if x.descriptor != y.descriptor {
        return Err(Error::InvalidParams(format!(
            "cannot combine {} with {}",
            x.descriptor, y.descriptor
        )));
    }
    pair_combine_values(&x.values, &y.values)
}

/// Element-wise sum of per-method score lists.
pub fn fuse_scores(lists: &[Vec<f64>]) -> Result<Vec<f64>> {
    let Some(first) = lists.first() else {
        return Err(Error::InvalidParams("no score lists to fuse".into()));
    };
    let mut out = vec![0.0; first.len()];
    for list in lists {
        if list.len() != out.len() {
            return Err(Error::DimensionMismatch {
                expected: out.len(),
                found: list.len(),
            });
        }
        out.iter_mut().zip(list).for_each(|(o, s)| *o += s);
    }
    Ok(out)
}

/// Z-scores with the population standard deviation; a constant list maps to
/// zeros.
pub fn standardize(scores: &[f64]) -> Vec<f64> {
    if scores.is_empty() {
        return Vec::new();
    }
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    let var = scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
    let sd = libm::sqrt(var);
    scores
        .iter()
        .map(|s| if sd > 0.0 { (s - mean) / sd } else { 0.0 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_examples() {
        assert_eq!(pair_combine_values(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), [0.5, 0.5]);
        assert_eq!(pair_combine_values(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), [0.0, 0.0]);
        assert_eq!(pair_combine_values(&[0.0], &[0.0]).unwrap_err(), Error::ZeroMass);
        assert!(pair_combine_values(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn combine_checks_descriptor() {
        let a = FeatureVector::new("LBPTOP[8:1]", alloc::vec![1.0]);
        let b = FeatureVector::new("LPQTOP[3]", alloc::vec![1.0]);
        assert!(pair_combine(&a, &b).is_err());
    }

    #[test]
    fn fusion_examples() {
        let fused = fuse_scores(&[alloc::vec![1.0, -0.5], alloc::vec![0.2, 0.8]]).unwrap();
        assert!((fused[0] - 1.2).abs() < 1e-15 && (fused[1] - 0.3).abs() < 1e-15);
        let s = alloc::vec![0.4, -2.0, 3.5];
        assert_eq!(fuse_scores(core::slice::from_ref(&s)).unwrap(), s);
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        assert!(fuse_scores(&[s, neg]).unwrap().iter().all(|&v| v == 0.0));
        assert!(fuse_scores(&[alloc::vec![1.0], alloc::vec![]]).is_err());
    }

    #[test]
    fn standardize_has_zero_mean_unit_variance() {
        let z = standardize(&[1.0, 2.0, 3.0, 4.0]);
        let mean: f64 = z.iter().sum::<f64>() / 4.0;
        let var: f64 = z.iter().map(|v| v * v).sum::<f64>() / 4.0;
        assert!(mean.abs() < 1e-12 && (var - 1.0).abs() < 1e-12);
        assert_eq!(standardize(&[2.0, 2.0]), [0.0, 0.0]);
    }

    #[test]
    fn zero_score_counts_as_kin() {
        assert_eq!(Label::from_score(0.0), Label::Kin);
        assert_eq!(Label::from_score(-1e-300), Label::NonKin);
    }
}
