use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{check_size, CodeImage, UniformMapping, SIGN_TOLERANCE};
use crate::image::GrayImage;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbpMapping {
    /// Raw `2^P` codes (only for `P <= 16`).
    Full,
    /// u2 uniform patterns, `P(P-1)+3` bins.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbpParams {
    pub neighbors: u32,
    pub radius: f64,
    pub mapping: LbpMapping,
}

impl LbpParams {
    pub fn new(neighbors: u32, radius: f64, mapping: LbpMapping) -> Result<Self> {
        if !(4..=32).contains(&neighbors) {
            return Err(Error::InvalidParams(format!(
                "LBP neighbour count must be in 4..=32, got {neighbors}"
            )));
        }
        if !(radius >= 1.0 && radius.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "LBP radius must be >= 1, got {radius}"
            )));
        }
        if mapping == LbpMapping::Full && neighbors > 16 {
            return Err(Error::InvalidParams(format!(
                "full LBP mapping needs P <= 16 (2^{neighbors} bins requested); use uniform"
            )));
        }
        Ok(LbpParams {
            neighbors,
            radius,
            mapping,
        })
    }

    pub fn uniform(neighbors: u32, radius: f64) -> Result<Self> {
        Self::new(neighbors, radius, LbpMapping::Uniform)
    }

    pub fn full(neighbors: u32, radius: f64) -> Result<Self> {
        Self::new(neighbors, radius, LbpMapping::Full)
    }

    /// `ceil(R)`.
    pub fn margin(&self) -> usize {
        libm::ceil(self.radius) as usize
    }

    pub fn code_range(&self) -> usize {
        match self.mapping {
            LbpMapping::Full => 1 << self.neighbors,
            LbpMapping::Uniform => UniformMapping::new(self.neighbors).bins(),
        }
    }

    pub fn label(&self) -> String {
        let suffix = match self.mapping {
            LbpMapping::Full => ":full",
            LbpMapping::Uniform => "",
        };
        if self.radius == libm::floor(self.radius) {
            format!("{}:{}{suffix}", self.neighbors, self.radius as u64)
        } else {
            format!("{}:{}{suffix}", self.neighbors, self.radius)
        }
    }

    /// Offset `(dx, dy)` of neighbour `p`: angle `2 pi p / P`, counter-clockwise
    /// from the positive x axis with y pointing down. Offsets within 1e-6 of an
    /// integer are snapped to it.
    pub fn offset(&self, p: u32) -> (f64, f64) {
        let theta = 2.0 * PI * p as f64 / self.neighbors as f64;
        let snap = |v: f64| {
            let r = libm::round(v);
            if libm::fabs(v - r) < 1e-6 {
                r
            } else {
                v
            }
        };
        (
            snap(self.radius * libm::cos(theta)),
            snap(-self.radius * libm::sin(theta)),
        )
    }
}

/// Bilinear tap: integer offset and weight.
#[derive(Debug, Clone, Copy)]
struct Tap {
    dx: isize,
    dy: isize,
    w: f64,
}

fn taps(params: &LbpParams) -> Vec<Vec<Tap>> {
    (0..params.neighbors)
        .map(|p| {
            let (dx, dy) = params.offset(p);
            let (x0, y0) = (libm::floor(dx), libm::floor(dy));
            let (fx, fy) = (dx - x0, dy - y0);
            let (x0, y0) = (x0 as isize, y0 as isize);
            [
                (x0, y0, (1.0 - fx) * (1.0 - fy)),
                (x0 + 1, y0, fx * (1.0 - fy)),
                (x0, y0 + 1, (1.0 - fx) * fy),
                (x0 + 1, y0 + 1, fx * fy),
            ]
            .into_iter()
            .filter(|&(_, _, w)| w != 0.0)
            .map(|(dx, dy, w)| Tap { dx, dy, w })
            .collect()
        })
        .collect()
}

/// Circular LBP code image.
///
/// Bit `p` is set when the interpolated neighbour `p` is not darker than the
/// centre (`n_p - c >= 0`).
pub fn lbp_code(image: &GrayImage, params: &LbpParams) -> Result<CodeImage> {
    let margin = params.margin();
    check_size(image, 2 * margin, "LBP")?;
    let taps = taps(params);
    let uniform = (params.mapping == LbpMapping::Uniform)
        .then(|| UniformMapping::new(params.neighbors));
    let (w, h) = (image.width(), image.height());
    let data = image.data();
    let mut out = CodeImage::new(w, h, params.code_range(), margin);
    for y in margin..h - margin {
        for x in margin..w - margin {
            let c = data[y * w + x] as f64;
            let mut code = 0u32;
            for (p, neighbor) in taps.iter().enumerate() {
                let n: f64 = neighbor
                    .iter()
                    .map(|t| {
                        let xx = (x as isize + t.dx) as usize;
                        let yy = (y as isize + t.dy) as usize;
                        t.w * data[yy * w + xx] as f64
                    })
                    .sum();
                if n - c >= -SIGN_TOLERANCE {
                    code |= 1 << p;
                }
            }
            let code = match &uniform {
                Some(m) => m.bin(code),
                None => code,
            };
            out.set(x, y, code);
        }
    }
    Ok(out)
}
