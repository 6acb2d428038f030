//! Three-orthogonal-plane (TOP) histograms.
//!
//! A `T x H x W` volume is cut into XY slices (`T` images of `H x W`), XT
//! slices (`H` images of `T x W`, rows indexed by time) and YT slices (`W`
//! images of `T x H`). Each slice set is coded as independent 2D images, the
//! codes are pooled into one histogram per plane and the histogram is L1
//! normalised. The per-scale feature is `[XY | XT | YT]`; multi-scale
//! features concatenate scales in the given order.

use alloc::string::String;
use alloc::vec::Vec;

use crate::coders::{Coder, FilterBank, LbpMapping, LbpParams, LpqParams};
use crate::feature::FeatureVector;
use crate::image::{FaceVideo, GrayImage};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    Xy,
    Xt,
    Yt,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::Xy, Plane::Xt, Plane::Yt];

    pub fn name(self) -> &'static str {
        match self {
            Plane::Xy => "XY",
            Plane::Xt => "XT",
            Plane::Yt => "YT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneSlices {
    pub xy: Vec<GrayImage>,
    pub xt: Vec<GrayImage>,
    pub yt: Vec<GrayImage>,
}

impl PlaneSlices {
    pub fn plane(&self, plane: Plane) -> &[GrayImage] {
        match plane {
            Plane::Xy => &self.xy,
            Plane::Xt => &self.xt,
            Plane::Yt => &self.yt,
        }
    }
}

pub fn slice_planes(video: &FaceVideo) -> PlaneSlices {
    let (t, h, w) = (video.frames(), video.height(), video.width());
    let xy = video.gray_frames();
    let xt = (0..h)
        .map(|y| GrayImage::from_fn(w, t, |x, tt| video.at(tt, y, x)))
        .collect();
    let yt = (0..w)
        .map(|x| GrayImage::from_fn(h, t, |y, tt| video.at(tt, y, x)))
        .collect();
    PlaneSlices { xy, xt, yt }
}

/// Pooled code counts of one plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneHistogram {
    pub counts: Vec<u64>,
    /// Slices too small for the coder.
    pub skipped: usize,
}

impl PlaneHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn normalized(&self) -> Vec<f64> {
        let total = self.total() as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }
}

/// Codes every slice that fits the coder and pools the counts.
pub fn plane_histogram(slices: &[GrayImage], coder: &Coder, plane: Plane) -> Result<PlaneHistogram> {
    let mut counts = alloc::vec![0u64; coder.bins()];
    let mut skipped = 0;
    for s in slices {
        if !coder.accepts(s.width(), s.height()) {
            skipped += 1;
            continue;
        }
        coder.code(s)?.accumulate(&mut counts);
    }
    if skipped == slices.len() {
        return Err(Error::AllSlicesSkipped {
            plane: plane.name(),
            required: coder.min_side_exclusive(),
        });
    }
    Ok(PlaneHistogram { counts, skipped })
}

/// Histograms of one descriptor at one scale.
#[derive(Debug, Clone, PartialEq)]
pub struct TopHistogram {
    pub descriptor: &'static str,
    pub scale: String,
    pub xy: Vec<f64>,
    pub xt: Vec<f64>,
    pub yt: Vec<f64>,
}

impl TopHistogram {
    pub fn concatenated(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(3 * self.xy.len());
        v.extend_from_slice(&self.xy);
        v.extend_from_slice(&self.xt);
        v.extend_from_slice(&self.yt);
        v
    }
}

pub fn top_histogram(slices: &PlaneSlices, coder: &Coder) -> Result<TopHistogram> {
    let mut planes = Plane::ALL
        .iter()
        .map(|&p| plane_histogram(slices.plane(p), coder, p).map(|h| h.normalized()));
    Ok(TopHistogram {
        descriptor: coder.name(),
        scale: coder.scale_label(),
        xy: planes.next().unwrap()?,
        xt: planes.next().unwrap()?,
        yt: planes.next().unwrap()?,
    })
}

/// A descriptor family evaluated at an ordered list of scales.
#[derive(Debug, Clone, PartialEq)]
pub struct Descriptor {
    scales: Vec<Coder>,
}

impl Descriptor {
    pub fn new(scales: Vec<Coder>) -> Result<Self> {
        let first = scales
            .first()
            .ok_or_else(|| Error::InvalidParams("descriptor needs at least one scale".into()))?;
        if scales.iter().any(|c| c.name() != first.name()) {
            return Err(Error::InvalidParams(
                "all scales of a descriptor must use the same coder".into(),
            ));
        }
        Ok(Descriptor { scales })
    }

    /// LBP at paired `(P, R)` scales.
    pub fn lbp(pairs: &[(u32, f64)], mapping: LbpMapping) -> Result<Self> {
        let scales = pairs
            .iter()
            .map(|&(p, r)| LbpParams::new(p, r, mapping).map(Coder::Lbp))
            .collect::<Result<_>>()?;
        Self::new(scales)
    }

    /// Three-scale uniform LBP: (8,1), (16,2), (24,3).
    pub fn lbp_default() -> Self {
        Self::lbp(&[(8, 1.0), (16, 2.0), (24, 3.0)], LbpMapping::Uniform).expect("valid defaults")
    }

    pub fn lpq(windows: &[usize]) -> Result<Self> {
        let scales = windows
            .iter()
            .map(|&w| LpqParams::new(w).map(Coder::Lpq))
            .collect::<Result<_>>()?;
        Self::new(scales)
    }

    /// LPQ with windows 3, 5, ..., 17.
    pub fn lpq_default() -> Self {
        Self::lpq(&DEFAULT_WINDOWS).expect("valid defaults")
    }

    pub fn bsif(banks: Vec<FilterBank>) -> Result<Self> {
        Self::new(banks.into_iter().map(Coder::Bsif).collect())
    }

    pub fn scales(&self) -> &[Coder] {
        &self.scales
    }

    pub fn name(&self) -> &'static str {
        self.scales[0].name()
    }

    pub fn scale_labels(&self) -> Vec<String> {
        self.scales.iter().map(Coder::scale_label).collect()
    }

    /// Length of the TOP feature, `sum_scales 3 * bins`.
    pub fn top_length(&self) -> usize {
        self.scales.iter().map(|c| 3 * c.bins()).sum()
    }

    /// Length of the single-image (XY only) feature.
    pub fn still_length(&self) -> usize {
        self.scales.iter().map(Coder::bins).sum()
    }

    /// Tag such as `LBPTOP[8:1,16:2,24:3]`.
    pub fn tag(&self, top: bool) -> String {
        let mut s = String::from(self.name());
        if top {
            s.push_str("TOP");
        }
        s.push('[');
        s.push_str(&self.scale_labels().join(","));
        s.push(']');
        s
    }
}

/// Odd window sizes 3..=17 used for LPQ and BSIF.
pub const DEFAULT_WINDOWS: [usize; 8] = [3, 5, 7, 9, 11, 13, 15, 17];

/// Multi-scale TOP feature of a video.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiScaleFeature {
    pub descriptor: &'static str,
    pub scales: Vec<String>,
    pub values: Vec<f64>,
}

impl MultiScaleFeature {
    pub fn into_feature_vector(self, tag: String) -> FeatureVector {
        FeatureVector::new(tag, self.values)
    }
}

pub fn extract_top_multiscale(video: &FaceVideo, descriptor: &Descriptor) -> Result<MultiScaleFeature> {
    let slices = slice_planes(video);
    let mut values = Vec::with_capacity(descriptor.top_length());
    for coder in descriptor.scales() {
        let h = top_histogram(&slices, coder).map_err(|e| e.at_scale(coder.scale_label()))?;
        values.extend(h.concatenated());
    }
    Ok(MultiScaleFeature {
        descriptor: descriptor.name(),
        scales: descriptor.scale_labels(),
        values,
    })
}

/// Spatial-only variant on a single image: one normalised histogram per scale.
pub fn extract_still_multiscale(image: &GrayImage, descriptor: &Descriptor) -> Result<MultiScaleFeature> {
    let mut values = Vec::with_capacity(descriptor.still_length());
    for coder in descriptor.scales() {
        let h = plane_histogram(core::slice::from_ref(image), coder, Plane::Xy)
            .map_err(|e| e.at_scale(coder.scale_label()))?;
        values.extend(h.normalized());
    }
    Ok(MultiScaleFeature {
        descriptor: descriptor.name(),
        scales: descriptor.scale_labels(),
        values,
    })
}
