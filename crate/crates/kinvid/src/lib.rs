//! File formats, directory IO and the command-line driver for `kinvid-core`.
//!
//! Every pipeline stage reads and writes plain files:
//!
//! * [`pnm`] and [`frames`]: binary PGM/PPM frames in `NNNNNN.pgm` directories.
//! * [`manifest`] and [`landmarks`]: video manifests and eye annotations.
//! * [`filters`]: BSIF filter banks as text.
//! * [`weights`]: the VGGW1 binary network format.
//! * [`features`], [`model`], [`scores`], [`pairs`], [`report`]: JSON and
//!   CSV outputs of extraction, training and evaluation.
//! * [`cli`]: the `kinvid` subcommands.

pub mod cli;
mod error;
pub mod features;
pub mod filters;
pub mod frames;
pub mod landmarks;
pub mod manifest;
pub mod model;
pub mod pairs;
pub mod parallel;
pub mod pnm;
pub mod report;
pub mod scores;
pub mod weights;

pub use error::{Error, Result};
