//! Synthetic benchmark frames with exact ground truth.
//!
//! Each frame is a rotated ellipse over a uniform or lightly textured
//! background, with Gaussian pixel noise on top. The mask is rasterized
//! from the ellipse before noise, so scores measure the detector rather
//! than the annotation. Everything derives from a `ChaCha8` stream keyed
//! by `(seed, index)`, making frames reproducible individually and in any
//! order.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::eval::GroundTruthMask;
use crate::imaging::{lab_distance, srgb_pixel_to_lab, RgbImage};

/// Smallest frame the generator will produce.
pub const MIN_SYNTH_SIZE: u32 = 16;

/// Minimum CIELAB distance between object and background colors.
const MIN_CONTRAST: f64 = 45.0;

/// Standard deviation of the additive Gaussian noise, in 8-bit levels.
const NOISE_SIGMA: f64 = 5.0;

struct Ellipse {
    cx: f64,
    cy: f64,
    a: f64,
    b: f64,
    cos: f64,
    sin: f64,
}

impl Ellipse {
    fn contains(&self, x: f64, y: f64) -> bool {
        let dx = x - self.cx;
        let dy = y - self.cy;
        let u = (dx * self.cos + dy * self.sin) / self.a;
        let v = (-dx * self.sin + dy * self.cos) / self.b;
        u * u + v * v <= 1.0
    }
}

fn per_image_rng(seed: u64, index: u32) -> ChaCha8Rng {
    // Golden-ratio mixing keeps neighboring indices on unrelated streams.
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_color(rng: &mut ChaCha8Rng) -> [u8; 3] {
    [rng.random(), rng.random(), rng.random()]
}

fn sample_ellipse(rng: &mut ChaCha8Rng, width: u32, height: u32) -> Ellipse {
    let (w, h) = (width as f64, height as f64);
    loop {
        let area = rng.random_range(0.10..=0.35) * w * h;
        let aspect = rng.random_range(0.6..=1.8);
        // area = pi * a * b with aspect = a / b
        let ab = area / std::f64::consts::PI;
        let a = (ab * aspect).sqrt();
        let b = (ab / aspect).sqrt();
        let phi = rng.random_range(0.0..std::f64::consts::PI);
        let (sin, cos) = phi.sin_cos();
        // Half-extents of the rotated ellipse's bounding box.
        let ex = (a * a * cos * cos + b * b * sin * sin).sqrt();
        let ey = (a * a * sin * sin + b * b * cos * cos).sqrt();
        // Keep a one-pixel border so the object never touches the frame.
        if 2.0 * ex >= w - 3.0 || 2.0 * ey >= h - 3.0 {
            continue;
        }
        let cx = rng.random_range(ex + 1.0..=w - 2.0 - ex);
        let cy = rng.random_range(ey + 1.0..=h - 2.0 - ey);
        return Ellipse {
            cx,
            cy,
            a,
            b,
            cos,
            sin,
        };
    }
}

/// Renders frame `index` of the stream keyed by `seed`, returning the noisy
/// image together with its exact pre-noise mask.
pub fn synth_image(
    seed: u64,
    index: u32,
    width: u32,
    height: u32,
) -> Result<(RgbImage, GroundTruthMask)> {
    if width < MIN_SYNTH_SIZE || height < MIN_SYNTH_SIZE {
        return Err(Error::ImageTooSmall {
            width,
            height,
            min: MIN_SYNTH_SIZE,
        });
    }
    let mut rng = per_image_rng(seed, index);

    let background = random_color(&mut rng);
    let background_lab = srgb_pixel_to_lab(background);
    let object = loop {
        let candidate = random_color(&mut rng);
        if lab_distance(srgb_pixel_to_lab(candidate), background_lab) >= MIN_CONTRAST {
            break candidate;
        }
    };

    // Half of the backgrounds get a faint sinusoidal shading sweep.
    let texture = if rng.random_bool(0.5) {
        let amplitude = rng.random_range(3.0..=8.0);
        let fx = rng.random_range(1..=4) as f64;
        let fy = rng.random_range(1..=4) as f64;
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        Some((amplitude, fx, fy, phase))
    } else {
        None
    };

    let ellipse = sample_ellipse(&mut rng, width, height);
    let mut mask = vec![false; (width * height) as usize];
    let mut image = RgbImage::new(width, height, background);
    for y in 0..height {
        for x in 0..width {
            let inside = ellipse.contains(x as f64, y as f64);
            if inside {
                mask[(y * width + x) as usize] = true;
                image.set(x, y, object);
            } else if let Some((amp, fx, fy, phase)) = texture {
                let angle = std::f64::consts::TAU
                    * (fx * x as f64 / width as f64 + fy * y as f64 / height as f64)
                    + phase;
                let shade = amp * angle.sin();
                let mut px = background;
                for c in &mut px {
                    *c = (*c as f64 + shade).round().clamp(0.0, 255.0) as u8;
                }
                image.set(x, y, px);
            }
        }
    }

    let noise = Normal::new(0.0, NOISE_SIGMA).expect("sigma is positive");
    for y in 0..height {
        for x in 0..width {
            let mut px = image.get(x, y);
            for c in &mut px {
                let v = *c as f64 + noise.sample(&mut rng);
                *c = v.round().clamp(0.0, 255.0) as u8;
            }
            image.set(x, y, px);
        }
    }

    let mask = GroundTruthMask::from_bools(width, height, mask)?;
    Ok((image, mask))
}

/// Writes `count` frames under `dir` in the paired-dirs layout, `img/NNNN.png`
/// next to `gt/NNNN.png`.
pub fn generate(dir: impl AsRef<Path>, count: u32, seed: u64, width: u32, height: u32) -> Result<()> {
    let dir = dir.as_ref();
    let img_dir = dir.join("img");
    let gt_dir = dir.join("gt");
    std::fs::create_dir_all(&img_dir).map_err(|e| Error::io(&img_dir, e))?;
    std::fs::create_dir_all(&gt_dir).map_err(|e| Error::io(&gt_dir, e))?;
    for index in 0..count {
        let (image, mask) = synth_image(seed, index, width, height)?;
        let name = format!("{index:04}.png");
        crate::io::save_rgb_png(img_dir.join(&name), &image)?;
        let levels: Vec<u8> = mask
            .as_slice()
            .iter()
            .map(|&b| if b { 255 } else { 0 })
            .collect();
        let gray = crate::imaging::ScalarMap::from_values(
            width,
            height,
            levels.iter().map(|&v| v as f64 / 255.0).collect(),
        )?;
        crate::io::save_gray_png(gt_dir.join(&name), &gray)?;
    }
    Ok(())
}
