//! Binary PPM (P6, maxval 255) reader and writer, the mandatory image
//! format. Header whitespace and `#` comments are accepted when reading;
//! writing emits a canonical header.

use oidct::ImagePlanes64;

#[derive(Debug, thiserror::Error)]
pub enum PpmError {
    #[error("not a P6 PPM file")]
    NotPpm,

    #[error("malformed PPM header")]
    MalformedHeader,

    #[error("unsupported maxval {0}, only 255 is supported")]
    UnsupportedMaxval(u32),

    #[error("payload truncated: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },

    #[error(transparent)]
    Image(#[from] oidct::Error),
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn read_number(&mut self) -> Result<u32, PpmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start || self.pos - start > 9 {
            return Err(PpmError::MalformedHeader);
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse().map_err(|_| PpmError::MalformedHeader)
    }
}

/// Parses a P6 image from raw bytes.
pub fn decode(bytes: &[u8]) -> Result<ImagePlanes64, PpmError> {
    if bytes.len() < 2 || &bytes[..2] != b"P6" {
        return Err(PpmError::NotPpm);
    }
    let mut cursor = HeaderCursor { bytes, pos: 2 };
    let width = cursor.read_number()?;
    let height = cursor.read_number()?;
    let maxval = cursor.read_number()?;
    if maxval != 255 {
        return Err(PpmError::UnsupportedMaxval(maxval));
    }
    // Exactly one whitespace byte separates the header from the payload.
    match bytes.get(cursor.pos) {
        Some(b' ' | b'\t' | b'\r' | b'\n') => cursor.pos += 1,
        _ => return Err(PpmError::MalformedHeader),
    }
    if width == 0 || height == 0 {
        return Err(PpmError::MalformedHeader);
    }
    let expected = width as usize * height as usize * 3;
    let payload = &bytes[cursor.pos.min(bytes.len())..];
    if payload.len() < expected {
        return Err(PpmError::TruncatedPayload {
            expected,
            found: payload.len(),
        });
    }
    Ok(ImagePlanes64::from_rgb8(
        width as usize,
        height as usize,
        &payload[..expected],
    )?)
}

/// Serializes an RGB image as P6. Samples are clamped to `[0, 255]` and
/// rounded.
pub fn encode(img: &ImagePlanes64) -> Result<Vec<u8>, PpmError> {
    let payload = img.to_rgb8()?;
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(&payload);
    Ok(out)
}
