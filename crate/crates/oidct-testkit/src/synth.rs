//! Deterministic synthetic image corpora. The generator layers smooth
//! illumination, multi-octave value noise, object edges, oriented gratings
//! and a touch of sensor noise so the block statistics resemble photographs:
//! energy concentrated at low frequencies, broadband content from edges and
//! texture, correlated color channels.

use oidct::codec::{ycbcr_to_rgb, ColorSpace, ImagePlanes};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Content family of a synthesized image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusKind {
    /// Generic photographic content: smooth regions, objects, a few
    /// textured patches.
    Photo,
    /// A second photographic mix with busier detail, for cross-corpus
    /// experiments; spectrally comparable to [`CorpusKind::Photo`] but a
    /// different content balance.
    PhotoAlt,
    /// Texture-dominated content with dense oriented mid/high-frequency
    /// patterns.
    Texture,
}

/// Synthesizes one image. The same `(kind, seed, width, height)` always
/// produces the same integer-valued RGB image.
pub fn synth_image(kind: CorpusKind, seed: u64, width: usize, height: usize) -> ImagePlanes<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = width * height;

    let mut luma = vec![0.0f64; n];
    base_illumination(&mut rng, &mut luma, width, height);

    match kind {
        CorpusKind::Photo => {
            add_value_noise(&mut rng, &mut luma, width, height, 64, 34.0);
            add_value_noise(&mut rng, &mut luma, width, height, 32, 26.0);
            add_value_noise(&mut rng, &mut luma, width, height, 16, 20.0);
            add_value_noise(&mut rng, &mut luma, width, height, 8, 15.0);
            add_value_noise(&mut rng, &mut luma, width, height, 4, 9.0);
            add_value_noise(&mut rng, &mut luma, width, height, 2, 3.5);
            add_objects(&mut rng, &mut luma, width, height, 18);
            add_gratings(&mut rng, &mut luma, width, height, 8, 6.0..20.0, 0.3..1.8);
        }
        CorpusKind::PhotoAlt => {
            add_value_noise(&mut rng, &mut luma, width, height, 64, 26.0);
            add_value_noise(&mut rng, &mut luma, width, height, 32, 22.0);
            add_value_noise(&mut rng, &mut luma, width, height, 16, 24.0);
            add_value_noise(&mut rng, &mut luma, width, height, 8, 18.0);
            add_value_noise(&mut rng, &mut luma, width, height, 4, 11.0);
            add_value_noise(&mut rng, &mut luma, width, height, 2, 4.0);
            add_objects(&mut rng, &mut luma, width, height, 28);
            add_gratings(&mut rng, &mut luma, width, height, 12, 7.0..22.0, 0.35..1.7);
        }
        CorpusKind::Texture => {
            add_value_noise(&mut rng, &mut luma, width, height, 64, 24.0);
            add_value_noise(&mut rng, &mut luma, width, height, 16, 14.0);
            add_value_noise(&mut rng, &mut luma, width, height, 8, 8.0);
            add_objects(&mut rng, &mut luma, width, height, 6);
            // Dense multiband texture: stratified carrier frequencies with
            // amplitude growing toward high frequency, roughly tracking the
            // quantization table's growth, so the whole mid band carries
            // signal well above the quantizer step at moderate quality.
            add_texture_weave(&mut rng, &mut luma, width, height, 48, 0.35..2.3);
        }
    }

    add_gaussian_noise(&mut rng, &mut luma, 1.3);

    // Smooth low-contrast chroma fields, centered at the neutral 128.
    let mut cb = vec![0.0f64; n];
    let mut cr = vec![0.0f64; n];
    add_value_noise(&mut rng, &mut cb, width, height, 64, 11.0);
    add_value_noise(&mut rng, &mut cb, width, height, 16, 4.0);
    add_value_noise(&mut rng, &mut cr, width, height, 64, 11.0);
    add_value_noise(&mut rng, &mut cr, width, height, 16, 4.0);

    for v in luma.iter_mut() {
        *v = v.clamp(0.0, 255.0);
    }
    for v in cb.iter_mut().chain(cr.iter_mut()) {
        // Keep chroma conservative so the RGB clamp rarely engages.
        *v = (*v).clamp(-48.0, 48.0) + 128.0;
    }

    let ycbcr = ImagePlanes::new(width, height, ColorSpace::YCbCr, [luma, cb, cr])
        .expect("synthesized planes");
    let rgb = ycbcr_to_rgb(&ycbcr).expect("tagged YCbCr");

    // Images on disk are integral; round and clamp each channel.
    let planes: Vec<Vec<f64>> = (0..3)
        .map(|ch| {
            rgb.plane(ch)
                .iter()
                .map(|v| v.round().clamp(0.0, 255.0))
                .collect()
        })
        .collect();
    let [r, g, b]: [Vec<f64>; 3] = planes.try_into().unwrap();
    ImagePlanes::new(width, height, ColorSpace::Rgb, [r, g, b]).unwrap()
}

/// A batch of images of one family with consecutive seeds.
pub fn corpus(
    kind: CorpusKind,
    first_seed: u64,
    count: usize,
    width: usize,
    height: usize,
) -> Vec<ImagePlanes<f64>> {
    (0..count)
        .map(|i| synth_image(kind, first_seed + i as u64, width, height))
        .collect()
}

fn base_illumination(rng: &mut ChaCha8Rng, luma: &mut [f64], width: usize, height: usize) {
    let base = rng.random_range(95.0..150.0);
    let gx = rng.random_range(-35.0..35.0);
    let gy = rng.random_range(-35.0..35.0);
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let swirl = rng.random_range(8.0..22.0);
    for y in 0..height {
        for x in 0..width {
            let fx = x as f64 / width as f64;
            let fy = y as f64 / height as f64;
            luma[y * width + x] = base
                + gx * (fx - 0.5)
                + gy * (fy - 0.5)
                + swirl * (std::f64::consts::TAU * (fx + fy) / 2.0 + phase).sin();
        }
    }
}

/// Bilinearly interpolated lattice noise with smoothstep easing.
fn add_value_noise(
    rng: &mut ChaCha8Rng,
    field: &mut [f64],
    width: usize,
    height: usize,
    cell: usize,
    amplitude: f64,
) {
    let gw = width / cell + 2;
    let gh = height / cell + 2;
    let lattice: Vec<f64> = (0..gw * gh).map(|_| rng.random_range(-1.0..1.0)).collect();
    let ease = |t: f64| t * t * (3.0 - 2.0 * t);
    for y in 0..height {
        let fy = y as f64 / cell as f64;
        let iy = fy as usize;
        let ty = ease(fy - iy as f64);
        for x in 0..width {
            let fx = x as f64 / cell as f64;
            let ix = fx as usize;
            let tx = ease(fx - ix as f64);
            let v00 = lattice[iy * gw + ix];
            let v01 = lattice[iy * gw + ix + 1];
            let v10 = lattice[(iy + 1) * gw + ix];
            let v11 = lattice[(iy + 1) * gw + ix + 1];
            let top = v00 + (v01 - v00) * tx;
            let bottom = v10 + (v11 - v10) * tx;
            field[y * width + x] += amplitude * (top + (bottom - top) * ty);
        }
    }
}

/// Discs and half-planes with intensity offsets; edge softness is mixed so
/// some boundaries are hard steps and others span a few pixels.
fn add_objects(rng: &mut ChaCha8Rng, luma: &mut [f64], width: usize, height: usize, count: usize) {
    for _ in 0..count {
        let delta = rng.random_range(12.0..48.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let softness = if rng.random_bool(0.4) {
            0.35
        } else {
            rng.random_range(0.8..2.5)
        };
        let coverage = |d: f64| -> f64 {
            // Signed distance to the boundary, mapped to [0, 1].
            (0.5 + d / (2.0 * softness)).clamp(0.0, 1.0)
        };
        if rng.random_bool(0.55) {
            let cx = rng.random_range(0.0..width as f64);
            let cy = rng.random_range(0.0..height as f64);
            let radius = rng.random_range(0.05..0.35) * width.min(height) as f64;
            for y in 0..height {
                for x in 0..width {
                    let dist = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
                    luma[y * width + x] += delta * coverage(radius - dist);
                }
            }
        } else {
            let angle = rng.random_range(0.0..std::f64::consts::TAU);
            let (nx, ny) = (angle.cos(), angle.sin());
            let offset = nx * rng.random_range(0.0..width as f64)
                + ny * rng.random_range(0.0..height as f64);
            for y in 0..height {
                for x in 0..width {
                    let d = nx * x as f64 + ny * y as f64 - offset;
                    luma[y * width + x] += delta * coverage(d);
                }
            }
        }
    }
}

/// Oriented sinusoids confined to elliptical patches with a smooth envelope.
fn add_gratings(
    rng: &mut ChaCha8Rng,
    luma: &mut [f64],
    width: usize,
    height: usize,
    count: usize,
    amplitude: std::ops::Range<f64>,
    frequency: std::ops::Range<f64>,
) {
    for _ in 0..count {
        let amp = rng.random_range(amplitude.clone());
        let freq = rng.random_range(frequency.clone());
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let (ux, uy) = (angle.cos(), angle.sin());
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        let cx = rng.random_range(0.0..width as f64);
        let cy = rng.random_range(0.0..height as f64);
        let rx = rng.random_range(0.15..0.6) * width as f64;
        let ry = rng.random_range(0.15..0.6) * height as f64;
        for y in 0..height {
            for x in 0..width {
                let ex = (x as f64 - cx) / rx;
                let ey = (y as f64 - cy) / ry;
                let r2 = ex * ex + ey * ey;
                if r2 >= 1.0 {
                    continue;
                }
                let envelope = (1.0 - r2).powi(2);
                let carrier = (freq * (ux * x as f64 + uy * y as f64) + phase).sin();
                luma[y * width + x] += amp * envelope * carrier;
            }
        }
    }
}

/// Dense multiband weave: sinusoid layers with stratified frequencies and
/// golden-angle orientation coverage, confined to wide elliptical patches.
/// Amplitude grows with carrier frequency so every mid-band coefficient
/// carries signal comfortably above the moderate-quality quantizer step.
fn add_texture_weave(
    rng: &mut ChaCha8Rng,
    luma: &mut [f64],
    width: usize,
    height: usize,
    count: usize,
    frequency: std::ops::Range<f64>,
) {
    let span = frequency.end - frequency.start;
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    let angle0 = rng.random_range(0.0..std::f64::consts::TAU);
    for layer in 0..count {
        let stratum = (layer as f64 + rng.random_range(0.0..1.0)) / count as f64;
        let freq = frequency.start + span * stratum;
        let amp = (3.0 + 7.5 * freq) * rng.random_range(0.75..1.25);
        let angle = angle0 + golden * layer as f64;
        let (ux, uy) = (angle.cos(), angle.sin());
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        let cx = rng.random_range(0.0..width as f64);
        let cy = rng.random_range(0.0..height as f64);
        let rx = rng.random_range(0.5..1.0) * width as f64;
        let ry = rng.random_range(0.5..1.0) * height as f64;
        for y in 0..height {
            for x in 0..width {
                let ex = (x as f64 - cx) / rx;
                let ey = (y as f64 - cy) / ry;
                let r2 = ex * ex + ey * ey;
                if r2 >= 1.0 {
                    continue;
                }
                let envelope = (1.0 - r2).powi(2);
                let carrier = (freq * (ux * x as f64 + uy * y as f64) + phase).sin();
                luma[y * width + x] += amp * envelope * carrier;
            }
        }
    }
}

fn add_gaussian_noise(rng: &mut ChaCha8Rng, field: &mut [f64], sigma: f64) {
    let mut pending: Option<f64> = None;
    for v in field.iter_mut() {
        let z = match pending.take() {
            Some(z) => z,
            None => {
                let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.random();
                let mag = (-2.0 * u1.ln()).sqrt();
                pending = Some(mag * (std::f64::consts::TAU * u2).sin());
                mag * (std::f64::consts::TAU * u2).cos()
            }
        };
        *v += sigma * z;
    }
}
