//! Per-pixel binary code images: LBP, LPQ and BSIF.
//!
//! All three coders compute a code only where their full neighbourhood fits
//! inside the image. The width of the excluded border is recorded as the
//! code image's `margin` and histograms never count border pixels.
//!
//! Responses whose magnitude is below [`SIGN_TOLERANCE`] are treated as exact
//! zeros, so that floating point residue (interpolation weights that do not
//! sum to exactly one, DFT sums of a constant) cannot flip a bit.

mod bsif;
mod ica;
mod lbp;
mod lpq;
mod uniform;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub use bsif::{bsif_code, FilterBank};
pub use ica::{learn_bsif_filters, learn_bsif_filters_detailed, IcaConfig, IcaOutcome};
pub use lbp::{lbp_code, LbpMapping, LbpParams};
pub use lpq::{lpq_code, LpqParams};
pub use uniform::UniformMapping;

use crate::image::GrayImage;
use crate::{Error, Result};

/// Responses within this distance of zero count as zero.
pub const SIGN_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeImage {
    width: usize,
    height: usize,
    codes: Vec<u32>,
    range: usize,
    margin: usize,
}

impl CodeImage {
    pub(crate) fn new(width: usize, height: usize, range: usize, margin: usize) -> Self {
        debug_assert!(2 * margin < width.min(height));
        CodeImage {
            width,
            height,
            codes: alloc::vec![0; width * height],
            range,
            margin,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of distinct code values.
    pub fn range(&self) -> usize {
        self.range
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.codes[y * self.width + x]
    }

    #[inline]
    pub(crate) fn set(&mut self, x: usize, y: usize, code: u32) {
        self.codes[y * self.width + x] = code;
    }

    pub fn valid_count(&self) -> usize {
        (self.width - 2 * self.margin) * (self.height - 2 * self.margin)
    }

    /// Iterator over codes of pixels outside the margin, row by row.
    pub fn valid_codes(&self) -> impl Iterator<Item = u32> + '_ {
        let m = self.margin;
        (m..self.height - m)
            .flat_map(move |y| self.codes[y * self.width + m..y * self.width + self.width - m].iter())
            .copied()
    }

    /// Adds the valid codes to `counts` (length must be `range`).
    pub fn accumulate(&self, counts: &mut [u64]) {
        assert_eq!(counts.len(), self.range);
        for c in self.valid_codes() {
            counts[c as usize] += 1;
        }
    }

    pub fn histogram(&self) -> Vec<u64> {
        let mut counts = alloc::vec![0; self.range];
        self.accumulate(&mut counts);
        counts
    }
}

/// One descriptor at one scale.
#[derive(Debug, Clone, PartialEq)]
pub enum Coder {
    Lbp(LbpParams),
    Lpq(LpqParams),
    Bsif(FilterBank),
}

impl Coder {
    pub fn code(&self, image: &GrayImage) -> Result<CodeImage> {
        match self {
            Coder::Lbp(p) => lbp_code(image, p),
            Coder::Lpq(p) => lpq_code(image, p),
            Coder::Bsif(b) => bsif_code(image, b),
        }
    }

    /// Histogram length of this coder's codes.
    pub fn bins(&self) -> usize {
        match self {
            Coder::Lbp(p) => p.code_range(),
            Coder::Lpq(_) => 256,
            Coder::Bsif(b) => 1 << b.count(),
        }
    }

    pub fn margin(&self) -> usize {
        match self {
            Coder::Lbp(p) => p.margin(),
            Coder::Lpq(p) => (p.window - 1) / 2,
            Coder::Bsif(b) => (b.side() - 1) / 2,
        }
    }

    /// Both image sides must be strictly greater than this.
    pub fn min_side_exclusive(&self) -> usize {
        match self {
            Coder::Lbp(p) => 2 * p.margin(),
            Coder::Lpq(p) => p.window,
            Coder::Bsif(b) => b.side(),
        }
    }

    pub fn accepts(&self, width: usize, height: usize) -> bool {
        width.min(height) > self.min_side_exclusive()
    }

    /// Short label of the scale, e.g. `8:1`, `7` or `8x7`.
    pub fn scale_label(&self) -> String {
        match self {
            Coder::Lbp(p) => p.label(),
            Coder::Lpq(p) => format!("{}", p.window),
            Coder::Bsif(b) => format!("{}x{}", b.count(), b.side()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Coder::Lbp(_) => "LBP",
            Coder::Lpq(_) => "LPQ",
            Coder::Bsif(_) => "BSIF",
        }
    }
}

pub(crate) fn check_size(image: &GrayImage, required: usize, coder: &str) -> Result<()> {
    if image.width().min(image.height()) > required {
        Ok(())
    } else {
        Err(Error::ImageTooSmall {
            width: image.width(),
            height: image.height(),
            required,
            coder: coder.into(),
        })
    }
}
