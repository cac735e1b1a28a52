//! Whole-image pipeline: color conversion, tiling into level-shifted 8x8
//! blocks, forward transform plus quantization on encode, and reconstruction
//! with a chosen inverse kernel on decode. No chroma subsampling (4:4:4) and
//! no entropy coding.

use crate::error::{Error, Result};
use crate::quantizer::{dequantize, quantize, QuantTable, QuantizedBlock};
use crate::scalar::Scalar;
use crate::transform::{
    forward_dct, inverse_transform, CoeffBlock, KernelMatrix, PixelBlock, BLOCK_SIZE,
};

/// Color space tag for [`ImagePlanes`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorSpace {
    Rgb,
    YCbCr,
}

/// BT.601 full-range luma weights.
const KR: f64 = 0.299;
const KG: f64 = 0.587;
const KB: f64 = 0.114;
/// Remaining rows of the JFIF forward color matrix.
const CB_R: f64 = -0.168736;
const CB_G: f64 = -0.331264;
const CB_B: f64 = 0.5;
const CR_R: f64 = 0.5;
const CR_G: f64 = -0.418688;
const CR_B: f64 = -0.081312;

/// A three-plane image with all channels at full resolution.
#[derive(Clone, Debug, PartialEq)]
pub struct ImagePlanes<T> {
    width: usize,
    height: usize,
    color: ColorSpace,
    planes: [Vec<T>; 3],
}

impl<T: Scalar> ImagePlanes<T> {
    /// Wraps three planes of `width * height` samples each. Dimensions must
    /// be positive.
    pub fn new(
        width: usize,
        height: usize,
        color: ColorSpace,
        planes: [Vec<T>; 3],
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        for (i, plane) in planes.iter().enumerate() {
            if plane.len() != width * height {
                return Err(Error::PlaneSize {
                    plane: i,
                    len: plane.len(),
                    expected: width * height,
                });
            }
        }
        Ok(Self {
            width,
            height,
            color,
            planes,
        })
    }

    /// Builds an RGB image from interleaved 8-bit samples.
    pub fn from_rgb8(width: usize, height: usize, rgb: &[u8]) -> Result<Self> {
        if rgb.len() != width * height * 3 {
            return Err(Error::PlaneSize {
                plane: 0,
                len: rgb.len() / 3,
                expected: width * height,
            });
        }
        let mut planes = [
            Vec::with_capacity(width * height),
            Vec::with_capacity(width * height),
            Vec::with_capacity(width * height),
        ];
        for px in rgb.chunks_exact(3) {
            planes[0].push(T::from_f64(px[0] as f64));
            planes[1].push(T::from_f64(px[1] as f64));
            planes[2].push(T::from_f64(px[2] as f64));
        }
        Self::new(width, height, ColorSpace::Rgb, planes)
    }

    /// Interleaved 8-bit RGB samples; values are clamped to `[0, 255]` and
    /// rounded half away from zero.
    pub fn to_rgb8(&self) -> Result<Vec<u8>> {
        if self.color != ColorSpace::Rgb {
            return Err(Error::ColorSpace {
                expected: ColorSpace::Rgb,
                found: self.color,
            });
        }
        let mut out = Vec::with_capacity(self.width * self.height * 3);
        for i in 0..self.width * self.height {
            for plane in &self.planes {
                let v = plane[i].to_f64().unwrap_or(0.0);
                out.push(v.round().clamp(0.0, 255.0) as u8);
            }
        }
        Ok(out)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn color(&self) -> ColorSpace {
        self.color
    }

    pub fn plane(&self, channel: usize) -> &[T] {
        &self.planes[channel]
    }

    #[inline]
    pub fn sample(&self, channel: usize, x: usize, y: usize) -> T {
        self.planes[channel][y * self.width + x]
    }

    fn same_dimensions(&self, other: &Self) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch {
                a_width: self.width,
                a_height: self.height,
                b_width: other.width,
                b_height: other.height,
            });
        }
        Ok(())
    }

    /// Luma view of the image: plane 0 for YCbCr input, the BT.601 weighted
    /// sum of the channels for RGB input.
    pub(crate) fn luma_plane(&self) -> Vec<T> {
        match self.color {
            ColorSpace::YCbCr => self.planes[0].clone(),
            ColorSpace::Rgb => {
                let (kr, kg, kb) = (T::from_f64(KR), T::from_f64(KG), T::from_f64(KB));
                (0..self.width * self.height)
                    .map(|i| {
                        kr * self.planes[0][i] + kg * self.planes[1][i] + kb * self.planes[2][i]
                    })
                    .collect()
            }
        }
    }
}

/// Checks two images for identical dimensions, for the metrics module.
pub(crate) fn check_same_dimensions<T: Scalar>(
    a: &ImagePlanes<T>,
    b: &ImagePlanes<T>,
) -> Result<()> {
    a.same_dimensions(b)
}

/// BT.601 full-range RGB -> YCbCr. Chroma channels are centered at 128.
pub fn rgb_to_ycbcr<T: Scalar>(img: &ImagePlanes<T>) -> Result<ImagePlanes<T>> {
    if img.color != ColorSpace::Rgb {
        return Err(Error::ColorSpace {
            expected: ColorSpace::Rgb,
            found: img.color,
        });
    }
    let n = img.width * img.height;
    let mut y = Vec::with_capacity(n);
    let mut cb = Vec::with_capacity(n);
    let mut cr = Vec::with_capacity(n);
    let offset = T::from_f64(128.0);
    let coeff = |v: f64| T::from_f64(v);
    for i in 0..n {
        let (r, g, b) = (img.planes[0][i], img.planes[1][i], img.planes[2][i]);
        y.push(coeff(KR) * r + coeff(KG) * g + coeff(KB) * b);
        cb.push(offset + coeff(CB_R) * r + coeff(CB_G) * g + coeff(CB_B) * b);
        cr.push(offset + coeff(CR_R) * r + coeff(CR_G) * g + coeff(CR_B) * b);
    }
    ImagePlanes::new(img.width, img.height, ColorSpace::YCbCr, [y, cb, cr])
}

/// Exact algebraic inverse of [`rgb_to_ycbcr`]; no clamping is applied.
pub fn ycbcr_to_rgb<T: Scalar>(img: &ImagePlanes<T>) -> Result<ImagePlanes<T>> {
    if img.color != ColorSpace::YCbCr {
        return Err(Error::ColorSpace {
            expected: ColorSpace::YCbCr,
            found: img.color,
        });
    }
    // Invert the forward 3x3 by cofactors so the round trip closes to
    // machine precision even though the published coefficients are rounded.
    let m = [[KR, KG, KB], [CB_R, CB_G, CB_B], [CR_R, CR_G, CR_B]];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let inv = [
        [
            (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det,
            (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det,
            (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det,
        ],
        [
            (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det,
            (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det,
            (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det,
        ],
        [
            (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det,
            (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det,
            (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det,
        ],
    ];

    let n = img.width * img.height;
    let offset = T::from_f64(128.0);
    let mut out = [
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    ];
    for i in 0..n {
        let y = img.planes[0][i];
        let cb = img.planes[1][i] - offset;
        let cr = img.planes[2][i] - offset;
        for (ch, row) in inv.iter().enumerate() {
            out[ch].push(
                T::from_f64(row[0]) * y + T::from_f64(row[1]) * cb + T::from_f64(row[2]) * cr,
            );
        }
    }
    let [r, g, b] = out;
    ImagePlanes::new(img.width, img.height, ColorSpace::Rgb, [r, g, b])
}

/// Quantized transform coefficients for a whole image: per-channel blocks in
/// raster block order, `ceil(w/8) * ceil(h/8)` blocks per channel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedImage {
    width: usize,
    height: usize,
    qf: u8,
    channels: [Vec<QuantizedBlock>; 3],
}

impl EncodedImage {
    pub fn from_parts(
        width: usize,
        height: usize,
        qf: u8,
        channels: [Vec<QuantizedBlock>; 3],
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        if qf < 1 || qf > 100 {
            return Err(Error::QualityOutOfRange(qf as u32));
        }
        let expected = blocks_across(width) * blocks_across(height);
        for ch in &channels {
            if ch.len() != expected {
                return Err(Error::BlockCount {
                    found: ch.len(),
                    expected,
                });
            }
        }
        Ok(Self {
            width,
            height,
            qf,
            channels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn qf(&self) -> u8 {
        self.qf
    }

    pub fn blocks_per_channel(&self) -> usize {
        self.channels[0].len()
    }

    pub fn channel(&self, index: usize) -> &[QuantizedBlock] {
        &self.channels[index]
    }
}

#[inline]
fn blocks_across(len: usize) -> usize {
    len.div_ceil(BLOCK_SIZE)
}

/// Reads one level-shifted block out of a plane, replicating edge samples
/// where the block extends past the image.
fn read_block<T: Scalar>(
    plane: &[T],
    width: usize,
    height: usize,
    bx: usize,
    by: usize,
) -> PixelBlock<T> {
    let shift = T::from_f64(128.0);
    PixelBlock::from_fn(|r, c| {
        let x = (bx * BLOCK_SIZE + c).min(width - 1);
        let y = (by * BLOCK_SIZE + r).min(height - 1);
        plane[y * width + x] - shift
    })
}

/// Forward path: RGB to YCbCr, 8x8 tiling with edge-replicated padding,
/// level shift by -128, forward transform, quantization at `qf`.
pub fn encode<T: Scalar>(img: &ImagePlanes<T>, qf: u8) -> Result<EncodedImage> {
    if img.width == 0 || img.height == 0 {
        return Err(Error::EmptyImage);
    }
    let table = QuantTable::from_qf(qf)?;
    let ycbcr = rgb_to_ycbcr(img)?;
    let kernel = KernelMatrix::<T>::forward();
    let (bw, bh) = (blocks_across(img.width), blocks_across(img.height));

    let mut channels: [Vec<QuantizedBlock>; 3] = [
        Vec::with_capacity(bw * bh),
        Vec::with_capacity(bw * bh),
        Vec::with_capacity(bw * bh),
    ];
    for (ch, out) in channels.iter_mut().enumerate() {
        let plane = ycbcr.plane(ch);
        for by in 0..bh {
            for bx in 0..bw {
                let block = read_block(plane, img.width, img.height, bx, by);
                let coeffs = forward_dct(&kernel, &block)?;
                out.push(quantize(&coeffs, &table));
            }
        }
    }
    EncodedImage::from_parts(img.width, img.height, qf, channels)
}

/// Inverse path: dequantize, apply the given inverse kernel, undo the level
/// shift, crop the padding, convert to RGB, then clamp to `[0, 255]` and
/// round to integers.
pub fn decode<T: Scalar>(enc: &EncodedImage, kernel: &KernelMatrix<T>) -> Result<ImagePlanes<T>> {
    if !kernel.is_inverse() {
        return Err(Error::KernelKind {
            operation: "decode",
            found: kernel.kind(),
        });
    }
    let table = QuantTable::from_qf(enc.qf)?;
    let (bw, bh) = (blocks_across(enc.width), blocks_across(enc.height));
    let shift = T::from_f64(128.0);

    let mut planes: [Vec<T>; 3] = [
        vec![T::zero(); enc.width * enc.height],
        vec![T::zero(); enc.width * enc.height],
        vec![T::zero(); enc.width * enc.height],
    ];
    for (ch, plane) in planes.iter_mut().enumerate() {
        for by in 0..bh {
            for bx in 0..bw {
                let levels = &enc.channels[ch][by * bw + bx];
                let coeffs: CoeffBlock<T> = dequantize(levels, &table);
                let block = inverse_transform(kernel, &coeffs)?;
                for r in 0..BLOCK_SIZE {
                    let y = by * BLOCK_SIZE + r;
                    if y >= enc.height {
                        break;
                    }
                    for c in 0..BLOCK_SIZE {
                        let x = bx * BLOCK_SIZE + c;
                        if x >= enc.width {
                            break;
                        }
                        plane[y * enc.width + x] = block.at(r, c) + shift;
                    }
                }
            }
        }
    }

    let ycbcr = ImagePlanes::new(enc.width, enc.height, ColorSpace::YCbCr, planes)?;
    let rgb = ycbcr_to_rgb(&ycbcr)?;
    let clamped: Vec<Vec<T>> = rgb
        .planes
        .iter()
        .map(|plane| {
            plane
                .iter()
                .map(|v| {
                    let x = v.to_f64().unwrap_or(0.0).round().clamp(0.0, 255.0);
                    T::from_f64(x)
                })
                .collect()
        })
        .collect();
    let [r, g, b]: [Vec<T>; 3] = clamped.try_into().expect("three planes");
    ImagePlanes::new(enc.width, enc.height, ColorSpace::Rgb, [r, g, b])
}

/// Yields, for every fully interior luma block of an RGB image, the
/// level-shifted pixel block and its dequantized coefficients under `qf`
/// (exactly the pairs the learner consumes). Partial edge blocks are
/// dropped; an image smaller than 8x8 yields nothing.
pub fn extract_training_pairs<T: Scalar>(
    img: &ImagePlanes<T>,
    qf: u8,
) -> Result<impl Iterator<Item = (PixelBlock<T>, CoeffBlock<T>)>> {
    if img.color != ColorSpace::Rgb {
        return Err(Error::ColorSpace {
            expected: ColorSpace::Rgb,
            found: img.color,
        });
    }
    let table = QuantTable::from_qf(qf)?;
    let kernel = KernelMatrix::<T>::forward();
    let luma = img.luma_plane();
    let width = img.width;
    let (bw, bh) = (img.width / BLOCK_SIZE, img.height / BLOCK_SIZE);
    let shift = T::from_f64(128.0);

    Ok((0..bw * bh).map(move |i| {
        let (bx, by) = (i % bw, i / bw);
        let pixels = PixelBlock::from_fn(|r, c| {
            luma[(by * BLOCK_SIZE + r) * width + bx * BLOCK_SIZE + c] - shift
        });
        let coeffs = forward_dct(&kernel, &pixels).expect("forward kernel");
        let deq = dequantize(&quantize(&coeffs, &table), &table);
        (pixels, deq)
    }))
}
