//! Block-DCT transform coding with a learned inverse kernel.
//!
//! The pipeline mirrors a JPEG-style codec without entropy coding: images are
//! tiled into 8x8 blocks, transformed with the orthonormal DCT-II, quantized
//! with a quality-factor scaled table and reconstructed with an inverse
//! kernel. Instead of fixing the inverse to the transpose of the forward
//! kernel, the [`learner`] fits a 64x64 inverse by ridge least squares on
//! (pixel block, dequantized coefficient block) pairs, which compensates a
//! predictable share of the quantization error. [`metrics`] quantifies the
//! resulting quality difference.
//!
//! All numeric code is generic over the [`scalar::Scalar`] type (`f32` or
//! `f64`); the `*64` aliases below pin the double-precision instantiation
//! used by the CLI and the file formats.

pub mod codec;
mod error;
pub mod learner;
pub mod matrix;
pub mod metrics;
pub mod quantizer;
pub mod scalar;
pub mod transform;

pub use error::{Error, Result};

pub use codec::{ColorSpace, EncodedImage, ImagePlanes};
pub use learner::{TrainedKernel, TrainingAccumulator};
pub use matrix::Matrix64;
pub use metrics::QualityReport;
pub use quantizer::{QuantTable, QuantizedBlock};
pub use transform::{CoeffBlock, KernelKind, KernelMatrix, PixelBlock};

/// Double-precision instantiations.
pub type KernelMatrix64 = KernelMatrix<f64>;
pub type PixelBlock64 = PixelBlock<f64>;
pub type CoeffBlock64 = CoeffBlock<f64>;
pub type ImagePlanes64 = ImagePlanes<f64>;
pub type TrainingAccumulator64 = TrainingAccumulator<f64>;
pub type TrainedKernel64 = TrainedKernel<f64>;
pub type QualityReport64 = QualityReport<f64>;

/// Single-precision instantiations.
pub type KernelMatrix32 = KernelMatrix<f32>;
pub type PixelBlock32 = PixelBlock<f32>;
pub type CoeffBlock32 = CoeffBlock<f32>;
pub type ImagePlanes32 = ImagePlanes<f32>;
pub type TrainingAccumulator32 = TrainingAccumulator<f32>;
pub type TrainedKernel32 = TrainedKernel<f32>;
pub type QualityReport32 = QualityReport<f32>;
