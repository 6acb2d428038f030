use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid video: {0}")]
    InvalidVideo(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("image {width}x{height} too small: {coder} needs both sides > {required}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        required: usize,
        coder: String,
    },

    #[error("source eye points coincide")]
    CoincidentPoints,

    #[error("expected {expected} eye annotations, found {found}")]
    AnnotationCount { expected: usize, found: usize },

    #[error("insufficient patches: got {found}, need at least {required}")]
    InsufficientPatches { found: usize, required: usize },

    #[error("solver did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("every {plane} slice is too small; slices need both sides > {required}")]
    AllSlicesSkipped { plane: &'static str, required: usize },

    #[error("at scale {scale}: {source}")]
    AtScale { scale: String, source: Box<Error> },

    #[error("layer {layer}: expected {expected}, found {found}")]
    ShapeMismatch {
        layer: String,
        expected: String,
        found: String,
    },

    #[error("unknown layer {0}")]
    UnknownLayer(String),

    #[error("video has no frames")]
    EmptyVideo,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("feature pair has zero total mass")]
    ZeroMass,

    #[error("training data contains a single class")]
    SingleClass,

    #[error("need at least {required} samples, got {found}")]
    TooFewSamples { found: usize, required: usize },

    #[error("subset {relation}/{smile} admits no valid negative for video {video}")]
    SubsetTooSmall {
        relation: String,
        smile: String,
        video: String,
    },

    #[error("pair {0} links a subject with itself")]
    SelfPair(String),

    #[error("missing features for videos: {}", .0.join(", "))]
    MissingFeatures(Vec<String>),
}

impl Error {
    pub(crate) fn at_scale(self, scale: String) -> Self {
        Error::AtScale {
            scale,
            source: Box::new(self),
        }
    }
}
