//! Standalone container for encoded images: quantized coefficient blocks for
//! all three channels, little-endian, CRC-guarded. Deliberately not a JPEG
//! bitstream — there is no entropy coding here.
//!
//! ```text
//! magic "OIDE" | version u32 | width u32 | height u32 | qf u8
//! | blocks_per_channel u32 | 3 * blocks * 64 coefficient levels (i32)
//! | CRC-32 of all preceding bytes
//! ```

use std::fs;
use std::path::Path;

use oidct::{EncodedImage, QuantizedBlock};

pub const MAGIC: [u8; 4] = *b"OIDE";
pub const VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum SidecarError {
    #[error("bad magic, not an encoded-image file")]
    BadMagic,

    #[error("unsupported encoded-image version {0}")]
    UnsupportedVersion(u32),

    #[error("encoded-image file truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("checksum mismatch: stored {stored:08x}, computed {computed:08x}")]
    ChecksumMismatch { stored: u32, computed: u32 },

    #[error("encoded payload rejected: {0}")]
    InvalidPayload(#[from] oidct::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn to_bytes(enc: &EncodedImage) -> Vec<u8> {
    let blocks = enc.blocks_per_channel();
    let mut out = Vec::with_capacity(21 + 3 * blocks * 64 * 4 + 4);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(enc.width() as u32).to_le_bytes());
    out.extend_from_slice(&(enc.height() as u32).to_le_bytes());
    out.push(enc.qf());
    out.extend_from_slice(&(blocks as u32).to_le_bytes());
    for ch in 0..3 {
        for block in enc.channel(ch) {
            for &level in &block.0 {
                out.extend_from_slice(&level.to_le_bytes());
            }
        }
    }
    let crc = crc32fast::hash(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<EncodedImage, SidecarError> {
    if bytes.len() < 8 {
        return Err(SidecarError::Truncated {
            expected: 25,
            found: bytes.len(),
        });
    }
    if bytes[..4] != MAGIC {
        return Err(SidecarError::BadMagic);
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(SidecarError::UnsupportedVersion(version));
    }
    if bytes.len() < 21 {
        return Err(SidecarError::Truncated {
            expected: 25,
            found: bytes.len(),
        });
    }
    let width = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    let qf = bytes[16];
    let blocks = u32::from_le_bytes(bytes[17..21].try_into().unwrap()) as usize;
    let expected = 21 + 3 * blocks * 64 * 4 + 4;
    if bytes.len() != expected {
        return Err(SidecarError::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    let body_len = expected - 4;
    let stored = u32::from_le_bytes(bytes[body_len..].try_into().unwrap());
    let computed = crc32fast::hash(&bytes[..body_len]);
    if stored != computed {
        return Err(SidecarError::ChecksumMismatch { stored, computed });
    }

    let mut cursor = 21;
    let mut channels: [Vec<QuantizedBlock>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for ch in channels.iter_mut() {
        ch.reserve(blocks);
        for _ in 0..blocks {
            let mut block = [0i32; 64];
            for slot in block.iter_mut() {
                *slot = i32::from_le_bytes(bytes[cursor..cursor + 4].try_into().unwrap());
                cursor += 4;
            }
            ch.push(QuantizedBlock(block));
        }
    }
    Ok(EncodedImage::from_parts(width, height, qf, channels)?)
}

pub fn save(enc: &EncodedImage, path: &Path) -> Result<(), SidecarError> {
    fs::write(path, to_bytes(enc))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<EncodedImage, SidecarError> {
    from_bytes(&fs::read(path)?)
}
