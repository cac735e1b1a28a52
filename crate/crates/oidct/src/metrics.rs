//! Image quality measurement: pooled-MSE RGB PSNR and mean luma SSIM.

use crate::codec::{check_same_dimensions, ColorSpace, ImagePlanes};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// SSIM window side length.
pub const SSIM_WINDOW: usize = 11;
/// Gaussian sigma of the SSIM window.
pub const SSIM_SIGMA: f64 = 1.5;

/// Quality metrics for one decoded/original image pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QualityReport<T> {
    /// `10 log10(255^2 / mse)` with the MSE pooled over all three channels;
    /// positive infinity for identical images.
    pub psnr_rgb: T,
    /// Mean structural similarity over the luma plane.
    pub ssim: T,
    /// Per-channel mean squared error.
    pub per_channel_mse: [T; 3],
}

fn channel_mse<T: Scalar>(a: &ImagePlanes<T>, b: &ImagePlanes<T>) -> [T; 3] {
    let n = T::from_f64((a.width() * a.height()) as f64);
    let mut out = [T::zero(); 3];
    for ch in 0..3 {
        let mut acc = T::zero();
        for (&x, &y) in a.plane(ch).iter().zip(b.plane(ch)) {
            let d = x - y;
            acc += d * d;
        }
        out[ch] = acc / n;
    }
    out
}

fn expect_rgb<T: Scalar>(img: &ImagePlanes<T>) -> Result<()> {
    if img.color() != ColorSpace::Rgb {
        return Err(Error::ColorSpace {
            expected: ColorSpace::Rgb,
            found: img.color(),
        });
    }
    Ok(())
}

/// Peak signal-to-noise ratio in dB against a peak of 255, with the squared
/// error pooled across all three channels. Identical images give positive
/// infinity.
pub fn psnr_rgb<T: Scalar>(a: &ImagePlanes<T>, b: &ImagePlanes<T>) -> Result<T> {
    expect_rgb(a)?;
    expect_rgb(b)?;
    check_same_dimensions(a, b)?;
    let mse = channel_mse(a, b).iter().fold(T::zero(), |acc, &m| acc + m) / T::from_f64(3.0);
    if mse == T::zero() {
        return Ok(T::infinity());
    }
    let peak_sq = T::from_f64(255.0 * 255.0);
    Ok(T::from_f64(10.0) * (peak_sq / mse).log10())
}

/// Mean SSIM over the luma plane, using an 11x11 Gaussian window with
/// sigma 1.5 and the reference constants `C1 = (0.01 * 255)^2`,
/// `C2 = (0.03 * 255)^2`. A window is centered at every pixel; at the
/// borders it is cropped to the image and its weights renormalized.
pub fn ssim<T: Scalar>(a: &ImagePlanes<T>, b: &ImagePlanes<T>) -> Result<T> {
    check_same_dimensions(a, b)?;
    if a.color() != b.color() {
        return Err(Error::ColorSpace {
            expected: a.color(),
            found: b.color(),
        });
    }
    let (w, h) = (a.width(), a.height());
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            window: SSIM_WINDOW,
        });
    }

    let la = luma(a);
    let lb = luma(b);

    let radius = SSIM_WINDOW / 2;
    let taps: Vec<T> = {
        let raw: Vec<f64> = (0..SSIM_WINDOW)
            .map(|i| {
                let d = i as f64 - radius as f64;
                (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp()
            })
            .collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|v| T::from_f64(v / sum)).collect()
    };

    // Weighted moment fields, blurred separably with border truncation.
    let fields: [Vec<T>; 5] = [
        la.clone(),
        lb.clone(),
        la.iter().map(|&x| x * x).collect(),
        lb.iter().map(|&x| x * x).collect(),
        la.iter().zip(&lb).map(|(&x, &y)| x * y).collect(),
    ];
    let blurred: Vec<Vec<T>> = fields
        .iter()
        .map(|f| blur_truncated(f, w, h, &taps))
        .collect();

    // Per-axis weight actually applied at each coordinate.
    let axis_weight = |len: usize| -> Vec<T> {
        (0..len)
            .map(|i| {
                let mut acc = T::zero();
                for (k, &g) in taps.iter().enumerate() {
                    let j = i as isize + k as isize - radius as isize;
                    if j >= 0 && (j as usize) < len {
                        acc += g;
                    }
                }
                acc
            })
            .collect()
    };
    let wx = axis_weight(w);
    let wy = axis_weight(h);

    let c1 = T::from_f64((0.01 * 255.0) * (0.01 * 255.0));
    let c2 = T::from_f64((0.03 * 255.0) * (0.03 * 255.0));
    let two = T::from_f64(2.0);

    let mut total = T::zero();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let weight = wx[x] * wy[y];
            let mu_a = blurred[0][i] / weight;
            let mu_b = blurred[1][i] / weight;
            let var_a = blurred[2][i] / weight - mu_a * mu_a;
            let var_b = blurred[3][i] / weight - mu_b * mu_b;
            let cov = blurred[4][i] / weight - mu_a * mu_b;
            let num = (two * mu_a * mu_b + c1) * (two * cov + c2);
            let den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
            total += num / den;
        }
    }
    Ok(total / T::from_f64((w * h) as f64))
}

/// Both metrics plus the per-channel MSE breakdown.
pub fn quality_report<T: Scalar>(
    a: &ImagePlanes<T>,
    b: &ImagePlanes<T>,
) -> Result<QualityReport<T>> {
    Ok(QualityReport {
        psnr_rgb: psnr_rgb(a, b)?,
        ssim: ssim(a, b)?,
        per_channel_mse: channel_mse(a, b),
    })
}

fn luma<T: Scalar>(img: &ImagePlanes<T>) -> Vec<T> {
    match img.color() {
        ColorSpace::YCbCr => img.plane(0).to_vec(),
        ColorSpace::Rgb => {
            let (kr, kg, kb) = (T::from_f64(0.299), T::from_f64(0.587), T::from_f64(0.114));
            (0..img.width() * img.height())
                .map(|i| kr * img.plane(0)[i] + kg * img.plane(1)[i] + kb * img.plane(2)[i])
                .collect()
        }
    }
}

/// Separable Gaussian blur that simply drops out-of-range taps; the caller
/// accounts for the missing weight.
fn blur_truncated<T: Scalar>(field: &[T], w: usize, h: usize, taps: &[T]) -> Vec<T> {
    let radius = taps.len() / 2;
    let mut horizontal = vec![T::zero(); w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = T::zero();
            for (k, &g) in taps.iter().enumerate() {
                let j = x as isize + k as isize - radius as isize;
                if j >= 0 && (j as usize) < w {
                    acc += g * field[y * w + j as usize];
                }
            }
            horizontal[y * w + x] = acc;
        }
    }
    let mut out = vec![T::zero(); w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = T::zero();
            for (k, &g) in taps.iter().enumerate() {
                let j = y as isize + k as isize - radius as isize;
                if j >= 0 && (j as usize) < h {
                    acc += g * horizontal[j as usize * w + x];
                }
            }
            out[y * w + x] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::ColorSpace;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn image_from_fn(
        w: usize,
        h: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> ImagePlanes<f64> {
        let planes = std::array::from_fn(|ch| (0..w * h).map(|i| f(ch, i % w, i / w)).collect());
        ImagePlanes::new(w, h, ColorSpace::Rgb, planes).unwrap()
    }

    #[test]
    fn identical_images_have_infinite_psnr() {
        let img = image_from_fn(12, 12, |ch, x, y| ((ch + x + y) % 256) as f64);
        assert!(psnr_rgb(&img, &img).unwrap().is_infinite());
    }

    #[test]
    fn unit_difference_psnr_golden_value() {
        let a = image_from_fn(16, 16, |_, _, _| 100.0);
        let b = image_from_fn(16, 16, |_, _, _| 101.0);
        let db = psnr_rgb(&a, &b).unwrap();
        assert!((db - 48.1308).abs() < 1e-3, "got {db}");
    }

    #[test]
    fn two_step_difference_psnr_golden_value() {
        let a = image_from_fn(16, 16, |_, _, _| 100.0);
        let b = image_from_fn(16, 16, |_, _, _| 102.0);
        let db = psnr_rgb(&a, &b).unwrap();
        assert!((db - 42.1102).abs() < 1e-3, "got {db}");
    }

    #[test]
    fn psnr_rejects_dimension_mismatch() {
        let a = image_from_fn(8, 8, |_, _, _| 0.0);
        let b = image_from_fn(8, 9, |_, _, _| 0.0);
        assert!(psnr_rgb(&a, &b).is_err());
    }

    #[test]
    fn psnr_requires_rgb_inputs() {
        let a = image_from_fn(8, 8, |_, _, _| 64.0);
        let ycc = crate::codec::rgb_to_ycbcr(&a).unwrap();
        assert!(matches!(psnr_rgb(&a, &ycc), Err(Error::ColorSpace { .. })));
    }

    #[test]
    fn psnr_decreases_with_noise_amplitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let base = image_from_fn(32, 32, |_, _, _| rng.random_range(60.0f64..200.0).round());
        let mut prev = f64::INFINITY;
        for amp in [1.0, 2.0, 4.0, 8.0] {
            let mut noise_rng = ChaCha8Rng::seed_from_u64(41);
            let noisy = image_from_fn(32, 32, |ch, x, y| {
                let v = base.plane(ch)[y * 32 + x];
                let delta = if noise_rng.random_bool(0.5) {
                    amp
                } else {
                    -amp
                };
                (v + delta).clamp(0.0, 255.0)
            });
            let db = psnr_rgb(&base, &noisy).unwrap();
            assert!(db < prev, "amp={amp}");
            prev = db;
        }
    }

    #[test]
    fn psnr_invariant_under_common_offset() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let a = image_from_fn(16, 16, |_, _, _| rng.random_range(50.0f64..150.0).round());
        let b = image_from_fn(16, 16, |ch, x, y| {
            a.plane(ch)[y * 16 + x] + if (x + y) % 2 == 0 { 3.0 } else { -3.0 }
        });
        let shifted_a = image_from_fn(16, 16, |ch, x, y| a.plane(ch)[y * 16 + x] + 20.0);
        let shifted_b = image_from_fn(16, 16, |ch, x, y| b.plane(ch)[y * 16 + x] + 20.0);
        let d1 = psnr_rgb(&a, &b).unwrap();
        let d2 = psnr_rgb(&shifted_a, &shifted_b).unwrap();
        assert!((d1 - d2).abs() < 1e-12);
    }

    #[test]
    fn ssim_of_identical_images_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let img = image_from_fn(24, 16, |_, _, _| rng.random_range(0.0f64..255.0).round());
        let s = ssim(&img, &img).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_offset_ssim_golden_value() {
        // Zero variance everywhere: only the luminance term differs from 1.
        let a = image_from_fn(32, 32, |_, _, _| 100.0);
        let b = image_from_fn(32, 32, |_, _, _| 110.0);
        let s = ssim(&a, &b).unwrap();
        assert!((s - 0.99557).abs() < 1e-4, "got {s}");
    }

    #[test]
    fn ssim_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let a = image_from_fn(20, 20, |_, _, _| rng.random_range(0.0f64..255.0).round());
        let b = image_from_fn(20, 20, |_, _, _| rng.random_range(0.0f64..255.0).round());
        let d1 = ssim(&a, &b).unwrap();
        let d2 = ssim(&b, &a).unwrap();
        assert!((d1 - d2).abs() < 1e-12);
    }

    #[test]
    fn ssim_stays_in_range_and_detects_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for trial in 0..10 {
            let a = image_from_fn(16, 16, |_, _, _| rng.random_range(0.0f64..255.0).round());
            let b = image_from_fn(16, 16, |_, _, _| rng.random_range(0.0f64..255.0).round());
            let s = ssim(&a, &b).unwrap();
            assert!((-1.0..=1.0).contains(&s), "trial {trial}: {s}");
            assert!(s < 1.0);
        }
    }

    #[test]
    fn ssim_rejects_small_images() {
        let img = image_from_fn(10, 12, |_, _, _| 0.0);
        assert!(matches!(ssim(&img, &img), Err(Error::ImageTooSmall { .. })));
    }

    #[test]
    fn quality_report_bundles_all_fields() {
        let a = image_from_fn(16, 16, |_, _, _| 100.0);
        let b = image_from_fn(16, 16, |ch, _, _| if ch == 0 { 101.0 } else { 100.0 });
        let report = quality_report(&a, &b).unwrap();
        assert!((report.per_channel_mse[0] - 1.0).abs() < 1e-12);
        assert_eq!(report.per_channel_mse[1], 0.0);
        assert_eq!(report.per_channel_mse[2], 0.0);
        // Pooled MSE = 1/3.
        let expect = 10.0 * (255.0f64 * 255.0 * 3.0).log10();
        assert!((report.psnr_rgb - expect).abs() < 1e-9);
        assert!(report.ssim < 1.0);
    }
}
