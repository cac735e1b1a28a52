//! Quality-factor scaled quantization tables and the quantize/dequantize
//! pair, following the libjpeg scaling convention.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::transform::{CoeffBlock, BLOCK_LEN, BLOCK_SIZE};

/// The standard JPEG luminance base table, used for all channels.
pub const BASE_TABLE: [u16; BLOCK_LEN] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// 64 positive integer divisors derived from a quality factor in `1..=100`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantTable {
    divisors: [u16; BLOCK_LEN],
    qf: u8,
}

/// An 8x8 block of quantized coefficients (integer level indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantizedBlock(pub [i32; BLOCK_LEN]);

impl QuantizedBlock {
    pub fn zero() -> Self {
        Self([0; BLOCK_LEN])
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> i32 {
        self.0[r * BLOCK_SIZE + c]
    }
}

impl QuantTable {
    /// Scales the base table to a quality factor:
    /// `scale = 5000 / qf` for `qf < 50`, else `200 - 2 qf` (integer
    /// arithmetic), then `divisor = clamp(floor((base * scale + 50) / 100), 1, 255)`.
    pub fn from_qf(qf: u8) -> Result<Self> {
        if qf < 1 || qf > 100 {
            return Err(Error::QualityOutOfRange(qf as u32));
        }
        let scale: u32 = if qf < 50 {
            5000 / qf as u32
        } else {
            200 - 2 * qf as u32
        };
        let mut divisors = [0u16; BLOCK_LEN];
        for (d, &base) in divisors.iter_mut().zip(BASE_TABLE.iter()) {
            let scaled = (base as u32 * scale + 50) / 100;
            *d = scaled.clamp(1, 255) as u16;
        }
        Ok(Self { divisors, qf })
    }

    pub fn qf(&self) -> u8 {
        self.qf
    }

    pub fn divisors(&self) -> &[u16; BLOCK_LEN] {
        &self.divisors
    }

    #[inline]
    pub fn divisor(&self, index: usize) -> u16 {
        self.divisors[index]
    }
}

/// Entrywise `round(coeff / divisor)` with halves rounded away from zero.
pub fn quantize<T: Scalar>(coeffs: &CoeffBlock<T>, table: &QuantTable) -> QuantizedBlock {
    let mut out = [0i32; BLOCK_LEN];
    for i in 0..BLOCK_LEN {
        let d = T::from_f64(table.divisors[i] as f64);
        // f64::round ties away from zero, the libjpeg-compatible rule.
        out[i] = (coeffs.0[i] / d).round().to_f64().unwrap_or(0.0) as i32;
    }
    QuantizedBlock(out)
}

/// Entrywise `level * divisor`; composed with [`quantize`], realizes the
/// dequantized-coefficient channel the learner models.
pub fn dequantize<T: Scalar>(levels: &QuantizedBlock, table: &QuantTable) -> CoeffBlock<T> {
    let mut out = [T::zero(); BLOCK_LEN];
    for i in 0..BLOCK_LEN {
        out[i] = T::from_f64(levels.0[i] as f64) * T::from_f64(table.divisors[i] as f64);
    }
    CoeffBlock(out)
}
