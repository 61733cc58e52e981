//! Core raster types shared by every stage: 8-bit RGB frames, CIELAB frames,
//! dense scalar maps, and summed-area tables.
//!
//! All maps are row-major with `(x, y)` addressing, `x` running along the
//! width. Scalar maps hold `f64` so that downstream products and accumulated
//! sums never lose the precision the evaluation tolerances require.

use crate::error::{Error, Result};

/// Interleaved 8-bit RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    data: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: u32, height: u32, fill: [u8; 3]) -> Self {
        Self {
            width,
            height,
            data: vec![fill; (width * height) as usize],
        }
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> [u8; 3]) -> Self {
        let mut data = Vec::with_capacity((width * height) as usize);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn from_raw(width: u32, height: u32, data: Vec<[u8; 3]>) -> Result<Self> {
        if data.len() != (width as usize) * (height as usize) {
            return Err(Error::InvalidParameter(format!(
                "raw buffer holds {} pixels, expected {}",
                data.len(),
                (width as usize) * (height as usize)
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        self.data[(y * self.width + x) as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, px: [u8; 3]) {
        self.data[(y * self.width + x) as usize] = px;
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.data
    }

    /// Per-channel mean color, rounded to the nearest 8-bit value.
    pub fn mean_color(&self) -> [u8; 3] {
        let n = self.data.len() as u64;
        if n == 0 {
            return [0, 0, 0];
        }
        let mut sums = [0u64; 3];
        for px in &self.data {
            for c in 0..3 {
                sums[c] += px[c] as u64;
            }
        }
        let mut out = [0u8; 3];
        for c in 0..3 {
            out[c] = ((sums[c] + n / 2) / n) as u8;
        }
        out
    }
}

/// CIELAB image, one `[L, a, b]` triple per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct LabImage {
    width: u32,
    height: u32,
    data: Vec<[f64; 3]>,
}

impl LabImage {
    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> [f64; 3] {
        self.data[(y * self.width + x) as usize]
    }

    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.data
    }
}

// sRGB to XYZ under the D65 illuminant.
const SRGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];
const D65_WHITE: [f64; 3] = [0.95047, 1.0, 1.08883];
// CIE junction constants: epsilon = (6/29)^3, kappa = (29/3)^3.
const CIE_EPSILON: f64 = 216.0 / 24389.0;
const CIE_KAPPA: f64 = 24389.0 / 27.0;

#[inline]
fn srgb_expand(v: f64) -> f64 {
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

#[inline]
fn lab_f(t: f64) -> f64 {
    if t > CIE_EPSILON {
        t.cbrt()
    } else {
        (CIE_KAPPA * t + 16.0) / 116.0
    }
}

/// Converts one sRGB pixel to CIE 1976 L*a*b* (D65 white point).
pub fn srgb_pixel_to_lab(px: [u8; 3]) -> [f64; 3] {
    let r = srgb_expand(px[0] as f64 / 255.0);
    let g = srgb_expand(px[1] as f64 / 255.0);
    let b = srgb_expand(px[2] as f64 / 255.0);
    let x = SRGB_TO_XYZ[0][0] * r + SRGB_TO_XYZ[0][1] * g + SRGB_TO_XYZ[0][2] * b;
    let y = SRGB_TO_XYZ[1][0] * r + SRGB_TO_XYZ[1][1] * g + SRGB_TO_XYZ[1][2] * b;
    let z = SRGB_TO_XYZ[2][0] * r + SRGB_TO_XYZ[2][1] * g + SRGB_TO_XYZ[2][2] * b;
    let fx = lab_f(x / D65_WHITE[0]);
    let fy = lab_f(y / D65_WHITE[1]);
    let fz = lab_f(z / D65_WHITE[2]);
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

/// Converts a whole frame to CIELAB.
pub fn rgb_to_lab(img: &RgbImage) -> LabImage {
    LabImage {
        width: img.width,
        height: img.height,
        data: img.data.iter().map(|&px| srgb_pixel_to_lab(px)).collect(),
    }
}

/// Euclidean distance between two Lab triples.
#[inline]
pub fn lab_distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dl = a[0] - b[0];
    let da = a[1] - b[1];
    let db = a[2] - b[2];
    (dl * dl + da * da + db * db).sqrt()
}

/// Dense per-pixel scalar field (objectness, foreground, saliency, ...).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarMap {
    width: u32,
    height: u32,
    values: Vec<f64>,
}

impl ScalarMap {
    pub fn zeros(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            values: vec![0.0; (width as usize) * (height as usize)],
        }
    }

    /// Builds a map from row-major values. Rejects length mismatches and
    /// non-finite entries; every operation downstream assumes finite input.
    pub fn from_values(width: u32, height: u32, values: Vec<f64>) -> Result<Self> {
        if values.len() != (width as usize) * (height as usize) {
            return Err(Error::InvalidParameter(format!(
                "value buffer holds {} entries, expected {}",
                values.len(),
                (width as usize) * (height as usize)
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> f64) -> Self {
        let mut values = Vec::with_capacity((width as usize) * (height as usize));
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            values,
        }
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> f64 {
        self.values[(y * self.width + x) as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: f64) {
        self.values[(y * self.width + x) as usize] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Crops the rectangle of size `w x h` whose top-left corner sits at
    /// `(ox, oy)`.
    pub fn crop(&self, ox: u32, oy: u32, w: u32, h: u32) -> Result<ScalarMap> {
        if ox + w > self.width || oy + h > self.height {
            return Err(Error::DimensionMismatch {
                expected: (self.width, self.height),
                actual: (ox + w, oy + h),
            });
        }
        Ok(ScalarMap::from_fn(w, h, |x, y| self.get(ox + x, oy + y)))
    }
}

/// Linear rescale to `[0, 1]`. A constant map collapses to all zeros: a
/// constant cue carries no contrast, so it must not masquerade as "all
/// maximally salient" after fusion.
pub fn normalize01(m: &ScalarMap) -> ScalarMap {
    let (lo, hi) = m.min_max();
    if hi <= lo {
        return ScalarMap::zeros(m.width, m.height);
    }
    let span = hi - lo;
    let values = m.values.iter().map(|&v| (v - lo) / span).collect();
    ScalarMap {
        width: m.width,
        height: m.height,
        values,
    }
}

/// Summed-area table with a zero-padded first row and column, so
/// `rect_sum` needs no boundary branches.
#[derive(Debug, Clone)]
pub struct IntegralMap {
    width: u32,
    height: u32,
    // (width + 1) * (height + 1) entries, row-major.
    data: Vec<f64>,
}

impl IntegralMap {
    /// Builds the table in one pass. Sums are accumulated in `f64`, which is
    /// exact for integer-valued maps up to 2^53.
    pub fn build(m: &ScalarMap) -> IntegralMap {
        let w = m.width as usize;
        let h = m.height as usize;
        let stride = w + 1;
        let mut data = vec![0.0; stride * (h + 1)];
        for y in 0..h {
            let mut row = 0.0;
            for x in 0..w {
                row += m.values[y * w + x];
                data[(y + 1) * stride + x + 1] = data[y * stride + x + 1] + row;
            }
        }
        IntegralMap {
            width: m.width,
            height: m.height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    /// Sum over the inclusive rectangle `[l, r] x [t, b]`.
    #[inline]
    pub fn rect_sum(&self, l: u32, t: u32, r: u32, b: u32) -> f64 {
        debug_assert!(l <= r && r < self.width);
        debug_assert!(t <= b && b < self.height);
        let stride = (self.width + 1) as usize;
        let (l, t, r, b) = (l as usize, t as usize, r as usize, b as usize);
        self.data[(b + 1) * stride + r + 1] + self.data[t * stride + l]
            - self.data[t * stride + r + 1]
            - self.data[(b + 1) * stride + l]
    }

    /// Sum over the whole source map.
    pub fn total(&self) -> f64 {
        if self.width == 0 || self.height == 0 {
            return 0.0;
        }
        self.rect_sum(0, 0, self.width - 1, self.height - 1)
    }
}

/// Convenience wrapper matching the map-level operation name.
pub fn integral_image(m: &ScalarMap) -> IntegralMap {
    IntegralMap::build(m)
}
