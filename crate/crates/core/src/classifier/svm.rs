//! L1-hinge linear SVM with a bias, solved in the dual by SMO with
//! second-order working set selection.
//!
//! The dual is `min 1/2 a^T Q a - e^T a` subject to `0 <= a_i <= C` and
//! `sum_i y_i a_i = 0`, with `Q_ij = y_i y_j <x_i, x_j>`. Training works on a
//! precomputed Gram matrix so that leave-one-out folds can share it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::Label;
use crate::linalg::dot;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    pub c: f64,
    /// Stop when the maximal KKT violation falls below this.
    pub tol: f64,
    /// Iteration cap; `None` uses `max(10_000_000, 100 n)`.
    pub max_iter: Option<usize>,
}

impl SvmParams {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParams(format!("C must be positive, got {c}")));
        }
        Ok(SvmParams {
            c,
            tol: 1e-6,
            max_iter: None,
        })
    }
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            tol: 1e-6,
            max_iter: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    pub iterations: usize,
    /// Primal objective `1/2 |w|^2 + C sum hinge` on the training set.
    pub objective: f64,
}

impl SvmModel {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

/// Dense symmetric matrix of inner products.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram {
    n: usize,
    values: Vec<f64>,
}

impl Gram {
    pub fn linear<V: AsRef<[f64]>>(samples: &[V]) -> Result<Self> {
        let n = samples.len();
        if let Some(first) = samples.first() {
            let d = first.as_ref().len();
            for s in samples {
                if s.as_ref().len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: s.as_ref().len(),
                    });
                }
            }
        }
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = dot(samples[i].as_ref(), samples[j].as_ref());
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Ok(Gram { n, values })
    }

    /// Builds from a full row-major `n x n` matrix.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: values.len(),
            });
        }
        Ok(Gram { n, values })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

/// Dual solution on a subset of the Gram rows.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    /// Sample indices into the Gram matrix, in training order.
    pub indices: Vec<usize>,
    /// One multiplier per entry of `indices`.
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
}

impl DualSolution {
    /// `sum_i a_i y_i K(i, k) + b` for Gram index `k`.
    pub fn decision(&self, gram: &Gram, labels: &[Label], k: usize) -> f64 {
        self.indices
            .iter()
            .zip(&self.alpha)
            .filter(|(_, &a)| a != 0.0)
            .map(|(&i, &a)| a * labels[i].sign() * gram.get(i, k))
            .sum::<f64>()
            + self.bias
    }
}

const TAU: f64 = 1e-12;

/// Solves the dual over Gram rows `indices` with labels looked up by Gram
/// index.
pub fn solve_dual(gram: &Gram, labels: &[Label], indices: &[usize], params: &SvmParams) -> Result<DualSolution> {
    if labels.len() != gram.len() {
        return Err(Error::DimensionMismatch {
            expected: gram.len(),
            found: labels.len(),
        });
    }
    let n = indices.len();
    let y: Vec<f64> = indices.iter().map(|&i| labels[i].sign()).collect();
    if !(y.iter().any(|&v| v > 0.0) && y.iter().any(|&v| v < 0.0)) {
        return Err(Error::SingleClass);
    }
    let c = params.c;
    let k = |a: usize, b: usize| gram.get(indices[a], indices[b]);
    let qd: Vec<f64> = (0..n).map(|t| k(t, t)).collect();
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let max_iter = params.max_iter.unwrap_or((100 * n).max(10_000_000));
    let mut iterations = 0;
    loop {
        // first index: maximal violation in the up set
        let mut gmax = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        for t in 0..n {
            let v = -y[t] * grad[t];
            let up = if y[t] > 0.0 { alpha[t] < c } else { alpha[t] > 0.0 };
            if up && v >= gmax {
                gmax = v;
                i = t;
            }
        }
        // second index: largest objective decrease in the low set
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut obj_min = f64::INFINITY;
        if i != usize::MAX {
            for t in 0..n {
                let low = if y[t] > 0.0 { alpha[t] > 0.0 } else { alpha[t] < c };
                if !low {
                    continue;
                }
                let v = y[t] * grad[t];
                if v >= gmax2 {
                    gmax2 = v;
                }
                let diff = gmax + v;
                if diff > 0.0 {
                    let quad = qd[i] + qd[t] - 2.0 * k(i, t);
                    let obj = -(diff * diff) / if quad > 0.0 { quad } else { TAU };
                    if obj <= obj_min {
                        obj_min = obj;
                        j = t;
                    }
                }
            }
        }
        if i == usize::MAX || j == usize::MAX || gmax + gmax2 < params.tol {
            break;
        }
        if iterations >= max_iter {
            return Err(Error::NotConverged { iterations });
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let kij = k(i, j);
        if y[i] != y[j] {
            let quad = (qd[i] + qd[j] - 2.0 * kij).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (qd[i] + qd[j] - 2.0 * kij).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * k(i, t) * di + y[j] * k(j, t) * dj);
        }
    }

    // bias from free multipliers, or the midpoint of the feasible interval
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free, mut sum_free) = (0usize, 0.0);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum_free += yg;
        }
    }
    let rho = if free > 0 {
        sum_free / free as f64
    } else {
        (ub + lb) / 2.0
    };
    Ok(DualSolution {
        indices: indices.to_vec(),
        alpha,
        bias: -rho,
        iterations,
    })
}

/// `1/2 |w|^2 + C sum_i max(0, 1 - y_i (w.x_i + b))`.
pub fn primal_objective<V: AsRef<[f64]>>(w: &[f64], b: f64, samples: &[V], labels: &[Label], c: f64) -> f64 {
    let hinge: f64 = samples
        .iter()
        .zip(labels)
        .map(|(x, l)| (1.0 - l.sign() * (dot(w, x.as_ref()) + b)).max(0.0))
        .sum();
    0.5 * dot(w, w) + c * hinge
}

/// Trains on all samples.
pub fn svm_train<V: AsRef<[f64]>>(samples: &[V], labels: &[Label], params: &SvmParams) -> Result<SvmModel> {
    if samples.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: samples.len(),
            found: labels.len(),
        });
    }
    if samples.is_empty() {
        return Err(Error::TooFewSamples {
            found: 0,
            required: 2,
        });
    }
    let gram = Gram::linear(samples)?;
    let indices: Vec<usize> = (0..samples.len()).collect();
    let sol = solve_dual(&gram, labels, &indices, params)?;
    let d = samples[0].as_ref().len();
    let mut weights = vec![0.0; d];
    for (t, &a) in sol.alpha.iter().enumerate() {
        if a != 0.0 {
            let s = a * labels[t].sign();
            weights
                .iter_mut()
                .zip(samples[t].as_ref())
                .for_each(|(w, x)| *w += s * x);
        }
    }
    let objective = primal_objective(&weights, sol.bias, samples, labels, params.c);
    Ok(SvmModel {
        weights,
        bias: sol.bias,
        c: params.c,
        iterations: sol.iterations,
        objective,
    })
}

/// `w.x + b`.
pub fn svm_decision(model: &SvmModel, x: &[f64]) -> Result<f64> {
    if x.len() != model.weights.len() {
        return Err(Error::DimensionMismatch {
            expected: model.weights.len(),
            found: x.len(),
        });
    }
    Ok(dot(&model.weights, x) + model.bias)
}
