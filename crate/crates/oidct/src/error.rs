use crate::codec::ColorSpace;
use crate::transform::KernelKind;

/// Errors produced by the transform, quantizer, learner, codec and metrics
/// modules.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("a {found:?} kernel cannot be used for {operation}")]
    KernelKind {
        operation: &'static str,
        found: KernelKind,
    },

    #[error("quality factor {0} is outside 1..=100")]
    QualityOutOfRange(u32),

    #[error("{count} training samples accumulated, at least 64 required")]
    InsufficientSamples { count: u64 },

    #[error("kernel bank is empty")]
    EmptyKernelBank,

    #[error("kernel entries must be finite")]
    NonFiniteKernel,

    #[error("expected a {expected:?} image, found {found:?}")]
    ColorSpace {
        expected: ColorSpace,
        found: ColorSpace,
    },

    #[error("image has a zero dimension")]
    EmptyImage,

    #[error("plane {plane} holds {len} samples, expected {expected}")]
    PlaneSize {
        plane: usize,
        len: usize,
        expected: usize,
    },

    #[error("image dimensions differ: {a_width}x{a_height} vs {b_width}x{b_height}")]
    DimensionMismatch {
        a_width: usize,
        a_height: usize,
        b_width: usize,
        b_height: usize,
    },

    #[error("image {width}x{height} is smaller than the {window}x{window} comparison window")]
    ImageTooSmall {
        width: usize,
        height: usize,
        window: usize,
    },

    #[error("encoded image holds {found} blocks per channel, expected {expected}")]
    BlockCount { found: usize, expected: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
