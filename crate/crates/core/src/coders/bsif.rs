use alloc::format;
use alloc::vec::Vec;

use super::{check_size, CodeImage, SIGN_TOLERANCE};
use crate::image::GrayImage;
use crate::{Error, Result};

/// Largest tolerated absolute filter mean.
pub const ZERO_MEAN_TOLERANCE: f64 = 1e-9;

/// `f` real `W x W` filters, stored filter-major and row-major within a filter.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    count: usize,
    side: usize,
    weights: Vec<f64>,
}

impl FilterBank {
    /// Validates shape and the zero-mean invariant.
    pub fn new(count: usize, side: usize, weights: Vec<f64>) -> Result<Self> {
        let bank = Self::unchecked(count, side, weights)?;
        for i in 0..count {
            let mean = bank.filter_mean(i);
            if libm::fabs(mean) >= ZERO_MEAN_TOLERANCE {
                return Err(Error::InvalidParams(format!(
                    "filter {i} has mean {mean:e}; BSIF filters must have zero mean"
                )));
            }
        }
        Ok(bank)
    }

    /// Subtracts each filter's mean before validation, for importing external banks.
    pub fn centered(count: usize, side: usize, mut weights: Vec<f64>) -> Result<Self> {
        let n = side * side;
        if weights.len() == count * n && n > 0 {
            for f in weights.chunks_exact_mut(n) {
                let mean = f.iter().sum::<f64>() / n as f64;
                f.iter_mut().for_each(|v| *v -= mean);
            }
        }
        Self::new(count, side, weights)
    }

    fn unchecked(count: usize, side: usize, weights: Vec<f64>) -> Result<Self> {
        if count == 0 || count > 24 {
            return Err(Error::InvalidParams(format!(
                "filter count must be in 1..=24, got {count}"
            )));
        }
        if side < 3 || side % 2 == 0 {
            return Err(Error::InvalidParams(format!(
                "filter side must be odd and >= 3, got {side}"
            )));
        }
        let expected = count * side * side;
        if weights.len() != expected {
            return Err(Error::InvalidParams(format!(
                "expected {expected} values, got {}",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParams("filter weights must be finite".into()));
        }
        Ok(FilterBank {
            count,
            side,
            weights,
        })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn filter(&self, i: usize) -> &[f64] {
        let n = self.side * self.side;
        &self.weights[i * n..(i + 1) * n]
    }

    pub fn filter_mean(&self, i: usize) -> f64 {
        let f = self.filter(i);
        f.iter().sum::<f64>() / f.len() as f64
    }
}

/// BSIF code image. Bit `i` is set when the correlation of filter `i` with the
/// window centred on the pixel is strictly positive.
pub fn bsif_code(image: &GrayImage, bank: &FilterBank) -> Result<CodeImage> {
    let side = bank.side();
    check_size(image, side, "BSIF")?;
    let r = (side - 1) / 2;
    let (w, h) = (image.width(), image.height());
    let data: Vec<f64> = image.data().iter().map(|&v| v as f64).collect();
    let mut out = CodeImage::new(w, h, 1 << bank.count(), r);
    for y in r..h - r {
        for x in r..w - r {
            let mut code = 0u32;
            for i in 0..bank.count() {
                let filter = bank.filter(i);
                let mut response = 0.0;
                for ky in 0..side {
                    let row = &data[(y + ky - r) * w + x - r..(y + ky - r) * w + x - r + side];
                    let frow = &filter[ky * side..(ky + 1) * side];
                    response += row.iter().zip(frow).map(|(a, b)| a * b).sum::<f64>();
                }
                if response > SIGN_TOLERANCE {
                    code |= 1 << i;
                }
            }
            out.set(x, y, code);
        }
    }
    Ok(out)
}
