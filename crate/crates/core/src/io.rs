//! Raster file IO. Decoding goes through the `image` crate; saliency and
//! intermediate maps are written as 8-bit grayscale PNG with the fixed
//! `round(255 * v)` quantization so identical maps always produce identical
//! files.

use std::path::Path;

use crate::error::{Error, Result};
use crate::imaging::{RgbImage, ScalarMap};

/// Decodes a PNG/JPEG/BMP file into an 8-bit RGB frame.
pub fn load_rgb(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let dynamic = image::open(path).map_err(|e| Error::image(path, e))?;
    let rgb = dynamic.to_rgb8();
    let (w, h) = rgb.dimensions();
    let data = rgb.pixels().map(|p| p.0).collect();
    RgbImage::from_raw(w, h, data)
}

/// Decodes a grayscale file into raw 8-bit levels.
pub fn load_gray_u8(path: impl AsRef<Path>) -> Result<(u32, u32, Vec<u8>)> {
    let path = path.as_ref();
    let dynamic = image::open(path).map_err(|e| Error::image(path, e))?;
    let gray = dynamic.to_luma8();
    let (w, h) = gray.dimensions();
    Ok((w, h, gray.into_raw()))
}

/// Loads a saliency map stored as grayscale PNG, mapping levels to `[0, 1]`.
pub fn load_gray_map(path: impl AsRef<Path>) -> Result<ScalarMap> {
    let (w, h, levels) = load_gray_u8(path)?;
    let values = levels.iter().map(|&v| v as f64 / 255.0).collect();
    ScalarMap::from_values(w, h, values)
}

/// Quantizes a `[0, 1]` map to 8-bit levels.
pub fn quantize_map(m: &ScalarMap) -> Vec<u8> {
    m.values()
        .iter()
        .map(|&v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
        .collect()
}

/// Writes a `[0, 1]` map as 8-bit grayscale PNG.
pub fn save_gray_png(path: impl AsRef<Path>, m: &ScalarMap) -> Result<()> {
    let path = path.as_ref();
    let buf: image::GrayImage =
        image::ImageBuffer::from_raw(m.width(), m.height(), quantize_map(m))
            .expect("buffer length matches dimensions");
    buf.save(path).map_err(|e| Error::image(path, e))
}

/// Writes an RGB frame as PNG.
pub fn save_rgb_png(path: impl AsRef<Path>, img: &RgbImage) -> Result<()> {
    let path = path.as_ref();
    let mut raw = Vec::with_capacity(img.pixels().len() * 3);
    for px in img.pixels() {
        raw.extend_from_slice(px);
    }
    let buf: image::RgbImage = image::ImageBuffer::from_raw(img.width(), img.height(), raw)
        .expect("buffer length matches dimensions");
    buf.save(path).map_err(|e| Error::image(path, e))
}

/// Writes a label field as 16-bit grayscale PNG, one level per region index.
pub fn save_labels_png(path: impl AsRef<Path>, width: u32, height: u32, labels: &[u32]) -> Result<()> {
    let path = path.as_ref();
    let raw: Vec<u16> = labels.iter().map(|&l| l as u16).collect();
    let buf: image::ImageBuffer<image::Luma<u16>, Vec<u16>> =
        image::ImageBuffer::from_raw(width, height, raw).expect("buffer length matches dimensions");
    buf.save(path).map_err(|e| Error::image(path, e))
}
