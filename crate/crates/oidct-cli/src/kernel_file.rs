//! The kernel overhead file: a fixed little-endian layout holding one
//! trained inverse kernel plus its training provenance, guarded by a CRC-32.
//!
//! ```text
//! offset  size   field
//! 0       4      magic "OIDK"
//! 4       4      version (u32, = 1)
//! 8       1      training quality factor (u8)
//! 9       8      ridge lambda (f64)
//! 17      8      sample count (u64)
//! 25      32768  4096 kernel entries (f64, row-major)
//! 32793   4      CRC-32 (IEEE) of bytes 0..32793
//! ```

use std::fs;
use std::path::Path;

use oidct::{Matrix64, TrainedKernel64};

pub const MAGIC: [u8; 4] = *b"OIDK";
pub const VERSION: u32 = 1;
/// Total file size in bytes.
pub const FILE_LEN: usize = 4 + 4 + 1 + 8 + 8 + 4096 * 8 + 4;

#[derive(Debug, thiserror::Error)]
pub enum KernelFileError {
    #[error("bad magic, not a kernel file")]
    BadMagic,

    #[error("unsupported kernel file version {0}")]
    UnsupportedVersion(u32),

    #[error("kernel file truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("checksum mismatch: stored {stored:08x}, computed {computed:08x}")]
    ChecksumMismatch { stored: u32, computed: u32 },

    #[error("kernel payload rejected: {0}")]
    InvalidKernel(#[from] oidct::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Serializes a trained kernel to the on-disk layout.
pub fn to_bytes(kernel: &TrainedKernel64) -> Vec<u8> {
    let mut out = Vec::with_capacity(FILE_LEN);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(kernel.training_qf());
    out.extend_from_slice(&kernel.ridge_lambda().to_le_bytes());
    out.extend_from_slice(&kernel.sample_count().to_le_bytes());
    for &entry in kernel.kernel().entries().entries() {
        out.extend_from_slice(&entry.to_le_bytes());
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

/// Parses and validates the on-disk layout.
pub fn from_bytes(bytes: &[u8]) -> Result<TrainedKernel64, KernelFileError> {
    if bytes.len() < 8 {
        return Err(KernelFileError::Truncated {
            expected: FILE_LEN,
            found: bytes.len(),
        });
    }
    if bytes[..4] != MAGIC {
        return Err(KernelFileError::BadMagic);
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(KernelFileError::UnsupportedVersion(version));
    }
    if bytes.len() != FILE_LEN {
        return Err(KernelFileError::Truncated {
            expected: FILE_LEN,
            found: bytes.len(),
        });
    }
    let body_len = FILE_LEN - 4;
    let stored = u32::from_le_bytes(bytes[body_len..].try_into().unwrap());
    let computed = crc32fast::hash(&bytes[..body_len]);
    if stored != computed {
        return Err(KernelFileError::ChecksumMismatch { stored, computed });
    }

    let training_qf = bytes[8];
    let ridge_lambda = f64::from_le_bytes(bytes[9..17].try_into().unwrap());
    let sample_count = u64::from_le_bytes(bytes[17..25].try_into().unwrap());
    let mut entries = Vec::with_capacity(4096);
    for chunk in bytes[25..body_len].chunks_exact(8) {
        entries.push(f64::from_le_bytes(chunk.try_into().unwrap()));
    }
    let kernel = TrainedKernel64::from_parts(
        Matrix64::from_entries(&entries),
        training_qf,
        sample_count,
        ridge_lambda,
        format!("kernel-file crc32={computed:08x}"),
    )?;
    Ok(kernel)
}

pub fn save(kernel: &TrainedKernel64, path: &Path) -> Result<(), KernelFileError> {
    fs::write(path, to_bytes(kernel))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<TrainedKernel64, KernelFileError> {
    from_bytes(&fs::read(path)?)
}
