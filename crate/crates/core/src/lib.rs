//! Video kinship verification building blocks.
//!
//! The crate is `no_std` and only needs `alloc`. It covers the full pipeline
//! from aligned face volumes to evaluation numbers:
//!
//! * [`align`]: eye-based similarity registration of every frame.
//! * [`coders`]: per-pixel LBP, LPQ and BSIF code images, plus ICA learning
//!   of BSIF filter banks.
//! * [`top`]: three-orthogonal-plane histograms over multiple scales.
//! * [`deep`]: forward inference for the VGG-face layer table and
//!   frame-averaged fc7 descriptors.
//! * [`classifier`]: pair combination, a linear SVM and score fusion.
//! * [`protocol`]: negative pair generation, leave-one-out, ROC/AUC and
//!   per-relation reports.
//! * [`synth`]: a synthetic family generator for desk-scale experiments.
//!
//! File formats, directory handling and the command line live in the
//! companion `kinvid` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod align;
pub mod classifier;
pub mod coders;
pub mod deep;
mod error;
pub mod feature;
pub mod image;
pub mod linalg;
pub mod protocol;
pub mod rng;
pub mod synth;
pub mod top;

pub use error::{Error, Result};
pub use feature::FeatureVector;
pub use image::{FaceVideo, Frame, GrayImage};
