//! Least-squares fitting of an inverse kernel. Training pairs (pixel block,
//! dequantized coefficient block) are folded into streaming sufficient
//! statistics, from which the ridge solution
//! `K = cross * (auto + lambda I)^-1` is computed.

use crate::error::{Error, Result};
use crate::matrix::{Matrix64, DIM};
use crate::scalar::Scalar;
use crate::transform::{flatten, CoeffBlock, KernelMatrix, PixelBlock};

/// Sample count below which the regression is considered under-determined in
/// practice (64^2 unknowns per solve).
pub const RECOMMENDED_MIN_SAMPLES: u64 = 4096;

/// Relative eigenvalue cutoff for the pseudo-inverse fallback.
pub const PINV_RELATIVE_CUTOFF: f64 = 1e-10;

/// Streaming sufficient statistics for the kernel regression: with pixel
/// vectors as columns of `P` and dequantized coefficient vectors as columns
/// of `D`, `cross` accumulates `P D^T` and `auto` accumulates `D D^T`.
#[derive(Clone, Debug)]
pub struct TrainingAccumulator<T> {
    cross: Matrix64<T>,
    auto: Matrix64<T>,
    count: u64,
}

impl<T: Scalar> Default for TrainingAccumulator<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> TrainingAccumulator<T> {
    pub fn new() -> Self {
        Self {
            cross: Matrix64::zeros(),
            auto: Matrix64::zeros(),
            count: 0,
        }
    }

    /// Folds one training pair in. `pixels` must be level-shifted and
    /// `dequantized` must be its image under the channel at the quality
    /// factor this accumulator is being trained for.
    pub fn accumulate(&mut self, pixels: &PixelBlock<T>, dequantized: &CoeffBlock<T>) {
        let p = flatten(&pixels.0);
        let d = flatten(&dequantized.0);
        self.cross.add_outer(&p, &d);
        self.auto.add_outer(&d, &d);
        self.count += 1;
    }

    /// Adds another accumulator's statistics, allowing partitioned extraction
    /// to be reduced.
    pub fn merge(&mut self, other: &Self) {
        self.cross = self.cross.add(&other.cross);
        self.auto = self.auto.add(&other.auto);
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn cross(&self) -> &Matrix64<T> {
        &self.cross
    }

    pub fn auto(&self) -> &Matrix64<T> {
        &self.auto
    }

    /// Ridge weight used when the caller does not pin one explicitly:
    /// `1e-6 * trace(auto) / 64`. Zero when no energy has been accumulated.
    pub fn default_ridge(&self) -> T {
        T::from_f64(1e-6) * self.auto.trace() / T::from_f64(DIM as f64)
    }
}

/// A learned inverse kernel together with its training provenance.
#[derive(Clone, Debug)]
pub struct TrainedKernel<T> {
    kernel: KernelMatrix<T>,
    training_qf: u8,
    sample_count: u64,
    ridge_lambda: T,
    source_digest: String,
}

impl<T: Scalar> TrainedKernel<T> {
    /// Reassembles a kernel from persisted fields. The entries must be
    /// finite and the sample count at least 64.
    pub fn from_parts(
        entries: Matrix64<T>,
        training_qf: u8,
        sample_count: u64,
        ridge_lambda: T,
        source_digest: String,
    ) -> Result<Self> {
        if training_qf < 1 || training_qf > 100 {
            return Err(Error::QualityOutOfRange(training_qf as u32));
        }
        if sample_count < DIM as u64 {
            return Err(Error::InsufficientSamples {
                count: sample_count,
            });
        }
        Ok(Self {
            kernel: KernelMatrix::learned(entries)?,
            training_qf,
            sample_count,
            ridge_lambda,
            source_digest,
        })
    }

    pub fn kernel(&self) -> &KernelMatrix<T> {
        &self.kernel
    }

    pub fn training_qf(&self) -> u8 {
        self.training_qf
    }

    pub fn sample_count(&self) -> u64 {
        self.sample_count
    }

    pub fn ridge_lambda(&self) -> T {
        self.ridge_lambda
    }

    pub fn source_digest(&self) -> &str {
        &self.source_digest
    }

    /// True when the kernel was fit on fewer samples than
    /// [`RECOMMENDED_MIN_SAMPLES`]; callers should warn but may proceed.
    pub fn undertrained(&self) -> bool {
        self.sample_count < RECOMMENDED_MIN_SAMPLES
    }
}

/// Solves the ridge regression `K = cross * (auto + lambda I)^-1`, the
/// minimizer of the summed squared reconstruction error plus
/// `lambda * ||K||_F^2`.
///
/// The system is solved through a Cholesky factorization of
/// `auto + lambda I`; if that factorization fails (numerically singular at
/// `lambda = 0`), an eigenvalue pseudo-inverse with relative cutoff
/// [`PINV_RELATIVE_CUTOFF`] is used instead and noted in the provenance
/// string. Requires at least 64 samples; fits on fewer than
/// [`RECOMMENDED_MIN_SAMPLES`] are flagged via
/// [`TrainedKernel::undertrained`].
pub fn solve_kernel<T: Scalar>(
    acc: &TrainingAccumulator<T>,
    training_qf: u8,
    lambda: T,
) -> Result<TrainedKernel<T>> {
    if acc.count < DIM as u64 {
        return Err(Error::InsufficientSamples { count: acc.count });
    }
    let mut system = acc.auto.clone();
    system.add_scaled_identity(lambda);

    let (entries, method) = match system.cholesky() {
        Some(factor) => {
            let mut k = Matrix64::zeros();
            for r in 0..DIM {
                // Row r of K solves (auto + lambda I) x = row r of cross,
                // using the symmetry of the system matrix.
                let mut rhs = [T::zero(); DIM];
                rhs.copy_from_slice(acc.cross.row(r));
                let x = factor.solve(&rhs);
                for c in 0..DIM {
                    k.set(r, c, x[c]);
                }
            }
            (k, "cholesky")
        }
        None => {
            let pinv = system.pseudo_inverse_symmetric(T::from_f64(PINV_RELATIVE_CUTOFF));
            (acc.cross.matmul(&pinv), "pinv(cutoff=1e-10)")
        }
    };

    let mut digest = format!(
        "solver={method} samples={} qf={training_qf} lambda={:e}",
        acc.count,
        lambda.to_f64().unwrap_or(f64::NAN),
    );
    if acc.count < RECOMMENDED_MIN_SAMPLES {
        digest.push_str(" warning=samples-below-4096");
    }

    TrainedKernel::from_parts(entries, training_qf, acc.count, lambda, digest)
}

/// Max-norm first-order optimality residual of a solved kernel, normalized
/// by `1 + max |cross|`:
/// `||(cross - K auto) - lambda K||_max / (1 + ||cross||_max)`.
pub fn stationarity_residual<T: Scalar>(
    acc: &TrainingAccumulator<T>,
    trained: &TrainedKernel<T>,
) -> T {
    let k = trained.kernel.entries();
    let residual = acc
        .cross
        .sub(&k.matmul(&acc.auto))
        .sub(&k.scale(trained.ridge_lambda));
    residual.max_abs() / (T::one() + acc.cross.max_abs())
}

/// Frobenius norm of the difference between two learned kernels.
pub fn kernel_distance<T: Scalar>(a: &TrainedKernel<T>, b: &TrainedKernel<T>) -> T {
    a.kernel.entries().sub(b.kernel.entries()).frobenius_norm()
}

/// Picks the bank element whose training quality factor is nearest to `qf`,
/// breaking ties toward the higher training quality factor.
pub fn select_kernel<T: Scalar>(bank: &[TrainedKernel<T>], qf: u8) -> Result<&TrainedKernel<T>> {
    let mut best: Option<&TrainedKernel<T>> = None;
    for candidate in bank {
        let dist = (candidate.training_qf as i32 - qf as i32).abs();
        best = match best {
            None => Some(candidate),
            Some(current) => {
                let current_dist = (current.training_qf as i32 - qf as i32).abs();
                if dist < current_dist
                    || (dist == current_dist && candidate.training_qf > current.training_qf)
                {
                    Some(candidate)
                } else {
                    Some(current)
                }
            }
        };
    }
    best.ok_or(Error::EmptyKernelBank)
}
