//! Learning BSIF filter banks from image patches.
//!
//! Pipeline: remove each patch's mean, centre over patches, project onto the
//! leading `f` principal components with whitening, run symmetric FastICA
//! with the cubic nonlinearity on the whitened data, and map the unmixing
//! rows back to `W x W` filters normalised to zero mean and unit L2 norm.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::FilterBank;
use crate::linalg::{gram_rows, inv_sqrt_spd, matmul, symmetric_eigen};
use crate::rng::SplitMix64;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcaConfig {
    pub max_iter: usize,
    /// Stop when every unmixing row changes direction by less than this.
    pub tol: f64,
}

impl Default for IcaConfig {
    fn default() -> Self {
        IcaConfig {
            max_iter: 2000,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IcaOutcome {
    pub bank: FilterBank,
    /// Per-pixel mean over training patches, after per-patch mean removal.
    pub mean: Vec<f64>,
    /// `f x W^2` PCA whitening matrix.
    pub whitening: Vec<f64>,
    /// `f x f` orthogonal unmixing matrix in the whitened space.
    pub unmixing: Vec<f64>,
    pub iterations: usize,
}

/// Learns `count` filters of side `side` from `patches` (`N * side^2` values,
/// patch-major, row-major within a patch).
pub fn learn_bsif_filters(
    patches: &[f64],
    side: usize,
    count: usize,
    seed: u64,
) -> Result<FilterBank> {
    learn_bsif_filters_detailed(patches, side, count, seed, &IcaConfig::default()).map(|o| o.bank)
}

pub fn learn_bsif_filters_detailed(
    patches: &[f64],
    side: usize,
    count: usize,
    seed: u64,
    config: &IcaConfig,
) -> Result<IcaOutcome> {
    let d = side * side;
    if side < 3 || side % 2 == 0 {
        return Err(Error::InvalidParams(format!(
            "filter side must be odd and >= 3, got {side}"
        )));
    }
    if count == 0 || count > 24 || count > d - 1 {
        return Err(Error::InvalidParams(format!(
            "filter count must be in 1..={}, got {count}",
            (d - 1).min(24)
        )));
    }
    if patches.len() % d != 0 {
        return Err(Error::InvalidParams(format!(
            "patch buffer length {} is not a multiple of {d}",
            patches.len()
        )));
    }
    let n = patches.len() / d;
    if n < 50 * d {
        return Err(Error::InsufficientPatches {
            found: n,
            required: 50 * d,
        });
    }

    // per-patch DC removal, then centring over the set
    let mut x = patches.to_vec();
    for p in x.chunks_exact_mut(d) {
        let m = p.iter().sum::<f64>() / d as f64;
        p.iter_mut().for_each(|v| *v -= m);
    }
    let mut mean = vec![0.0; d];
    for p in x.chunks_exact(d) {
        mean.iter_mut().zip(p).for_each(|(m, v)| *m += v);
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    for p in x.chunks_exact_mut(d) {
        p.iter_mut().zip(&mean).for_each(|(v, m)| *v -= m);
    }

    let mut cov = vec![0.0; d * d];
    for p in x.chunks_exact(d) {
        for i in 0..d {
            let pi = p[i];
            if pi == 0.0 {
                continue;
            }
            for j in i..d {
                cov[i * d + j] += pi * p[j];
            }
        }
    }
    for i in 0..d {
        for j in i..d {
            let v = cov[i * d + j] / n as f64;
            cov[i * d + j] = v;
            cov[j * d + i] = v;
        }
    }
    let (values, vectors) = symmetric_eigen(&cov, d);
    if !(values[count - 1] > 1e-10 * values[0].max(f64::MIN_POSITIVE)) {
        return Err(Error::Degenerate(format!(
            "patch covariance has rank below {count}"
        )));
    }
    let mut whitening = vec![0.0; count * d];
    for k in 0..count {
        let s = 1.0 / libm::sqrt(values[k]);
        for j in 0..d {
            whitening[k * d + j] = s * vectors[k * d + j];
        }
    }

    // whitened data, component-major: z[k][sample]
    let mut z = vec![0.0; count * n];
    for (s, p) in x.chunks_exact(d).enumerate() {
        for k in 0..count {
            let row = &whitening[k * d..(k + 1) * d];
            z[k * n + s] = row.iter().zip(p).map(|(a, b)| a * b).sum();
        }
    }
    drop(x);

    let mut rng = SplitMix64::new(seed);
    let init: Vec<f64> = (0..count * count).map(|_| rng.normal()).collect();
    let mut unmixing = decorrelate(&init, count)?;
    let mut iterations = 0;
    let mut converged = false;
    let mut y = vec![0.0; n];
    while iterations < config.max_iter {
        iterations += 1;
        let mut next = vec![0.0; count * count];
        for k in 0..count {
            let wk = &unmixing[k * count..(k + 1) * count];
            y.iter_mut().for_each(|v| *v = 0.0);
            for (j, &wkj) in wk.iter().enumerate() {
                for (yv, zv) in y.iter_mut().zip(&z[j * n..(j + 1) * n]) {
                    *yv += wkj * zv;
                }
            }
            let mean_dg = 3.0 * y.iter().map(|v| v * v).sum::<f64>() / n as f64;
            for j in 0..count {
                let zj = &z[j * n..(j + 1) * n];
                let e: f64 = zj.iter().zip(&y).map(|(a, b)| a * b * b * b).sum::<f64>() / n as f64;
                next[k * count + j] = e - mean_dg * wk[j];
            }
        }
        let next = decorrelate(&next, count)?;
        let lim = (0..count)
            .map(|k| {
                let a = &next[k * count..(k + 1) * count];
                let b = &unmixing[k * count..(k + 1) * count];
                let d: f64 = a.iter().zip(b).map(|(p, q)| p * q).sum();
                libm::fabs(libm::fabs(d) - 1.0)
            })
            .fold(0.0, f64::max);
        unmixing = next;
        if lim < config.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged { iterations });
    }

    let mut filters = matmul(&unmixing, &whitening, count, count, d);
    for f in filters.chunks_exact_mut(d) {
        let m = f.iter().sum::<f64>() / d as f64;
        f.iter_mut().for_each(|v| *v -= m);
        let norm = libm::sqrt(f.iter().map(|v| v * v).sum::<f64>());
        if norm == 0.0 {
            return Err(Error::Degenerate("learned filter vanished".into()));
        }
        f.iter_mut().for_each(|v| *v /= norm);
    }
    Ok(IcaOutcome {
        bank: FilterBank::new(count, side, filters)?,
        mean,
        whitening,
        unmixing,
        iterations,
    })
}

/// Symmetric decorrelation `W <- (W W^T)^{-1/2} W`.
fn decorrelate(w: &[f64], k: usize) -> Result<Vec<f64>> {
    let g = gram_rows(w, k, k);
    let s = inv_sqrt_spd(&g, k)
        .ok_or_else(|| Error::Degenerate("unmixing matrix became singular".into()))?;
    Ok(matmul(&s, w, k, k, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Patches of eight strong sparse (Laplacian) sources plus weak Gaussian
    /// noise, mixed by a random basis.
    pub(crate) fn mixed_patches(side: usize, n: usize, seed: u64) -> Vec<f64> {
        let d = side * side;
        let mut rng = SplitMix64::new(seed);
        let basis: Vec<f64> = (0..d * d).map(|_| rng.normal()).collect();
        let mut out = Vec::with_capacity(n * d);
        for _ in 0..n {
            let s: Vec<f64> = (0..d)
                .map(|k| {
                    if k >= 8 {
                        return 0.05 * rng.normal();
                    }
                    let u = 1.0 - rng.next_f64();
                    let mag = -libm::log(u);
                    if rng.next_u64() & 1 == 0 {
                        mag
                    } else {
                        -mag
                    }
                })
                .collect();
            let patch = matmul(&s, &basis, 1, d, d);
            out.extend(patch.iter().map(|v| 128.0 + 8.0 * v));
        }
        out
    }

    #[test]
    fn learned_bank_is_normalised() {
        let patches = mixed_patches(7, 50 * 49, 11);
        let bank = learn_bsif_filters(&patches, 7, 8, 3).unwrap();
        assert_eq!((bank.count(), bank.side()), (8, 7));
        for i in 0..8 {
            let f = bank.filter(i);
            assert!(bank.filter_mean(i).abs() < 1e-9);
            let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn whitened_data_has_identity_covariance() {
        let (side, f) = (5, 6);
        let d = side * side;
        let patches = mixed_patches(side, 50 * d, 7);
        let out = learn_bsif_filters_detailed(&patches, side, f, 1, &IcaConfig::default()).unwrap();
        let n = patches.len() / d;
        let mut cov = vec![0.0; f * f];
        for p in patches.chunks_exact(d) {
            let m = p.iter().sum::<f64>() / d as f64;
            let x: Vec<f64> = p.iter().zip(&out.mean).map(|(v, mu)| v - m - mu).collect();
            let z = matmul(&out.whitening, &x, f, d, 1);
            for i in 0..f {
                for j in 0..f {
                    cov[i * f + j] += z[i] * z[j] / n as f64;
                }
            }
        }
        for i in 0..f {
            for j in 0..f {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((cov[i * f + j] - target).abs() < 1e-6, "{i},{j}: {}", cov[i * f + j]);
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let patches = mixed_patches(5, 50 * 25, 2);
        let a = learn_bsif_filters(&patches, 5, 6, 9).unwrap();
        let b = learn_bsif_filters(&patches, 5, 6, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn too_few_patches() {
        let patches = vec![0.0; 49 * 100];
        assert_eq!(
            learn_bsif_filters(&patches, 7, 8, 0).unwrap_err(),
            Error::InsufficientPatches {
                found: 100,
                required: 2450
            }
        );
    }

    #[test]
    fn filter_count_bounded_by_dimension() {
        let patches = mixed_patches(3, 50 * 9, 1);
        assert!(learn_bsif_filters(&patches, 3, 9, 0).is_err());
        assert!(learn_bsif_filters(&patches, 3, 8, 0).is_ok());
    }

    #[test]
    fn non_convergence_reports_iterations() {
        let patches = mixed_patches(5, 50 * 25, 4);
        let cfg = IcaConfig {
            max_iter: 2,
            tol: 1e-15,
        };
        assert_eq!(
            learn_bsif_filters_detailed(&patches, 5, 8, 0, &cfg).unwrap_err(),
            Error::NotConverged { iterations: 2 }
        );
    }
}
