//! The 8x8 block transform, expressed as a 64x64 matrix acting on flattened
//! blocks. The forward kernel is the orthonormal 2-D DCT-II; the standard
//! inverse is its transpose; a learned inverse is any 64x64 matrix fit by the
//! learner.

use crate::error::{Error, Result};
use crate::matrix::Matrix64;
use crate::scalar::Scalar;

/// Block side length.
pub const BLOCK_SIZE: usize = 8;
/// Entries per block.
pub const BLOCK_LEN: usize = BLOCK_SIZE * BLOCK_SIZE;

/// An 8x8 block of spatial-domain samples, level-shifted so the nominal
/// range is `[-128, 127]`. Stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PixelBlock<T>(pub [T; BLOCK_LEN]);

/// An 8x8 block of transform coefficients, row-major with the row index
/// carrying the vertical frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoeffBlock<T>(pub [T; BLOCK_LEN]);

impl<T: Scalar> PixelBlock<T> {
    pub fn zero() -> Self {
        Self([T::zero(); BLOCK_LEN])
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut out = Self::zero();
        for r in 0..BLOCK_SIZE {
            for c in 0..BLOCK_SIZE {
                out.0[r * BLOCK_SIZE + c] = f(r, c);
            }
        }
        out
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> T {
        self.0[r * BLOCK_SIZE + c]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl<T: Scalar> CoeffBlock<T> {
    pub fn zero() -> Self {
        Self([T::zero(); BLOCK_LEN])
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut out = Self::zero();
        for r in 0..BLOCK_SIZE {
            for c in 0..BLOCK_SIZE {
                out.0[r * BLOCK_SIZE + c] = f(r, c);
            }
        }
        out
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> T {
        self.0[r * BLOCK_SIZE + c]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

/// Row-major raster scan of a block: position `(r, c)` maps to index
/// `8r + c`. Pixels and coefficients use the same ordering everywhere.
#[inline]
pub fn flatten<T: Copy>(values: &[T; BLOCK_LEN]) -> [T; BLOCK_LEN] {
    *values
}

/// Exact inverse of [`flatten`].
#[inline]
pub fn unflatten<T: Copy>(vector: &[T; BLOCK_LEN]) -> [T; BLOCK_LEN] {
    *vector
}

/// Role of a kernel matrix in the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    /// The analysis transform (DCT-II rows).
    Forward,
    /// Transpose of the forward kernel.
    StandardInverse,
    /// A regression-fit inverse; carries no orthogonality guarantee.
    LearnedInverse,
}

/// A 64x64 matrix acting on flattened blocks, tagged with its role.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix<T> {
    entries: Matrix64<T>,
    kind: KernelKind,
}

impl<T: Scalar> KernelMatrix<T> {
    /// Builds the orthonormal 2-D DCT-II analysis kernel. The entry for
    /// output frequency `(u, v)` and input position `(i, j)` is
    /// `c(u) c(v) / 4 * cos((2i+1) u pi / 16) * cos((2j+1) v pi / 16)`
    /// with `c(0) = 1/sqrt(2)` and `c(k) = 1` otherwise. Rows are indexed by
    /// `8u + v`, columns by `8i + j`.
    pub fn forward() -> Self {
        let pi = T::from_f64(std::f64::consts::PI);
        let sixteen = T::from_f64(16.0);
        let quarter = T::from_f64(0.25);
        let inv_sqrt2 = T::one() / T::from_f64(2.0).sqrt();
        let norm = |k: usize| if k == 0 { inv_sqrt2 } else { T::one() };
        let two = T::from_f64(2.0);

        let entries = Matrix64::from_fn(|row, col| {
            let (u, v) = (row / BLOCK_SIZE, row % BLOCK_SIZE);
            let (i, j) = (col / BLOCK_SIZE, col % BLOCK_SIZE);
            let ci = ((two * T::from_f64(i as f64) + T::one()) * T::from_f64(u as f64) * pi
                / sixteen)
                .cos();
            let cj = ((two * T::from_f64(j as f64) + T::one()) * T::from_f64(v as f64) * pi
                / sixteen)
                .cos();
            norm(u) * norm(v) * quarter * ci * cj
        });
        Self {
            entries,
            kind: KernelKind::Forward,
        }
    }

    /// The classical inverse: transpose of the forward kernel.
    pub fn standard_inverse() -> Self {
        Self {
            entries: Self::forward().entries.transpose(),
            kind: KernelKind::StandardInverse,
        }
    }

    /// Wraps regression output as an inverse kernel. Entries must be finite.
    pub fn learned(entries: Matrix64<T>) -> Result<Self> {
        if !entries.is_finite() {
            return Err(Error::NonFiniteKernel);
        }
        Ok(Self {
            entries,
            kind: KernelKind::LearnedInverse,
        })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn entries(&self) -> &Matrix64<T> {
        &self.entries
    }

    pub fn is_inverse(&self) -> bool {
        matches!(
            self.kind,
            KernelKind::StandardInverse | KernelKind::LearnedInverse
        )
    }

    /// `max |K K^T - I|`, zero for an exactly orthonormal kernel.
    pub fn orthonormality_defect(&self) -> T {
        self.entries
            .matmul(&self.entries.transpose())
            .sub(&Matrix64::identity())
            .max_abs()
    }
}

/// Applies the analysis transform: `unflatten(K * flatten(block))`.
pub fn forward_dct<T: Scalar>(
    kernel: &KernelMatrix<T>,
    block: &PixelBlock<T>,
) -> Result<CoeffBlock<T>> {
    if kernel.kind != KernelKind::Forward {
        return Err(Error::KernelKind {
            operation: "forward_dct",
            found: kernel.kind,
        });
    }
    Ok(CoeffBlock(unflatten(
        &kernel.entries.matvec(&flatten(&block.0)),
    )))
}

/// Applies an inverse kernel: `unflatten(kernel * flatten(coeffs))`.
/// Rejects a kernel tagged [`KernelKind::Forward`], which signals a wiring
/// bug in the caller.
pub fn inverse_transform<T: Scalar>(
    kernel: &KernelMatrix<T>,
    coeffs: &CoeffBlock<T>,
) -> Result<PixelBlock<T>> {
    if !kernel.is_inverse() {
        return Err(Error::KernelKind {
            operation: "inverse_transform",
            found: kernel.kind,
        });
    }
    Ok(PixelBlock(unflatten(
        &kernel.entries.matvec(&flatten(&coeffs.0)),
    )))
}
