//! Path-level image reading and writing. Binary PPM is the mandatory
//! format; 8-bit PNG is supported behind the same interface. The format is
//! detected from the file content on read and from the extension on write.

use std::fs;
use std::io::BufWriter;
use std::path::Path;

use oidct::ImagePlanes64;

use crate::ppm::{self, PpmError};

#[derive(Debug, thiserror::Error)]
pub enum ImageIoError {
    #[error(transparent)]
    Ppm(#[from] PpmError),

    #[error("png decode failed: {0}")]
    PngDecode(String),

    #[error("png encode failed: {0}")]
    PngEncode(String),

    #[error("unsupported png layout: {0}")]
    UnsupportedPng(String),

    #[error("unrecognized image format for {0}")]
    UnrecognizedFormat(String),

    #[error(transparent)]
    Image(#[from] oidct::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', 0x0d, 0x0a, 0x1a, 0x0a];

/// Reads a PPM or PNG image into RGB planes. Round trip through
/// [`write_image`] reproduces every sample exactly.
pub fn read_image(path: &Path) -> Result<ImagePlanes64, ImageIoError> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(b"P6") {
        return Ok(ppm::decode(&bytes)?);
    }
    if bytes.starts_with(&PNG_SIGNATURE) {
        return decode_png(&bytes);
    }
    Err(ImageIoError::UnrecognizedFormat(path.display().to_string()))
}

/// Writes an RGB image; `.png` extension selects PNG, everything else PPM.
pub fn write_image(img: &ImagePlanes64, path: &Path) -> Result<(), ImageIoError> {
    let is_png = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("png"))
        .unwrap_or(false);
    if is_png {
        encode_png(img, path)
    } else {
        fs::write(path, ppm::encode(img)?)?;
        Ok(())
    }
}

fn decode_png(bytes: &[u8]) -> Result<ImagePlanes64, ImageIoError> {
    let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    let mut reader = decoder
        .read_info()
        .map_err(|e| ImageIoError::PngDecode(e.to_string()))?;
    let mut buf = vec![0u8; reader.output_buffer_size().unwrap_or(0)];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| ImageIoError::PngDecode(e.to_string()))?;
    if info.bit_depth != png::BitDepth::Eight {
        return Err(ImageIoError::UnsupportedPng(format!(
            "bit depth {:?}",
            info.bit_depth
        )));
    }
    let (w, h) = (info.width as usize, info.height as usize);
    let data = &buf[..info.buffer_size()];
    let rgb: Vec<u8> = match info.color_type {
        png::ColorType::Rgb => data.to_vec(),
        png::ColorType::Rgba => data
            .chunks_exact(4)
            .flat_map(|px| [px[0], px[1], px[2]])
            .collect(),
        png::ColorType::Grayscale => data.iter().flat_map(|&v| [v, v, v]).collect(),
        png::ColorType::GrayscaleAlpha => data
            .chunks_exact(2)
            .flat_map(|px| [px[0], px[0], px[0]])
            .collect(),
        other => {
            return Err(ImageIoError::UnsupportedPng(format!(
                "color type {other:?}"
            )))
        }
    };
    Ok(ImagePlanes64::from_rgb8(w, h, &rgb)?)
}

fn encode_png(img: &ImagePlanes64, path: &Path) -> Result<(), ImageIoError> {
    let file = fs::File::create(path)?;
    let mut encoder = png::Encoder::new(
        BufWriter::new(file),
        img.width() as u32,
        img.height() as u32,
    );
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder
        .write_header()
        .map_err(|e| ImageIoError::PngEncode(e.to_string()))?;
    writer
        .write_image_data(&img.to_rgb8()?)
        .map_err(|e| ImageIoError::PngEncode(e.to_string()))?;
    Ok(())
}
