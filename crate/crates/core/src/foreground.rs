//! Foreground map from background color contrast.
//!
//! The objectness mass fixes four margins; the frame outside those margins is
//! split into four background bands. A pixel's foreground score is the
//! product of its Lab distances to every usable band mean, so it only stays
//! high when it differs from all of them at once.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::imaging::{lab_distance, normalize01, IntegralMap, LabImage, ScalarMap};

/// Inclusive bounds of the retained central region: rows `t..=b`, columns
/// `l..=r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MarginRect {
    pub l: u32,
    pub t: u32,
    pub r: u32,
    pub b: u32,
}

/// Sweeps each side inward until the swept rows/columns hold at least a
/// `theta` fraction of the total objectness mass. All four scans run off one
/// summed-area table.
pub fn estimate_margins(ob: &ScalarMap, theta: f64) -> Result<MarginRect> {
    if !(theta > 0.0 && theta <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "margin fraction {theta} outside (0, 0.5]"
        )));
    }
    if ob.values().iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidParameter(
            "objectness map has negative entries".into(),
        ));
    }
    let (w, h) = ob.dims();
    let integral = IntegralMap::build(ob);
    let total = integral.total();
    if total <= 0.0 {
        return Err(Error::EmptyObjectness);
    }
    let target = theta * total;

    let t = (0..h)
        .find(|&t| integral.rect_sum(0, 0, w - 1, t) >= target)
        .unwrap_or(h - 1);
    let b = (0..h)
        .rev()
        .find(|&b| integral.rect_sum(0, b, w - 1, h - 1) >= target)
        .unwrap_or(0);
    let l = (0..w)
        .find(|&l| integral.rect_sum(0, 0, l, h - 1) >= target)
        .unwrap_or(w - 1);
    let r = (0..w)
        .rev()
        .find(|&r| integral.rect_sum(r, 0, w - 1, h - 1) >= target)
        .unwrap_or(0);

    debug_assert!(t <= b && l <= r, "theta <= 0.5 keeps the margins ordered");
    Ok(MarginRect { l, t, r, b })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BandKind {
    Top,
    Bottom,
    Left,
    Right,
}

/// One background strip. `rect` is `None` when the margin leaves the strip
/// with zero area; such a band is degenerate and drops out of the product.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Band {
    pub kind: BandKind,
    pub rect: Option<MarginRect>,
    pub mean_lab: [f64; 3],
    pub pixel_count: usize,
}

impl Band {
    pub fn is_degenerate(&self) -> bool {
        self.pixel_count == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackgroundBands {
    pub bands: Vec<Band>,
}

impl BackgroundBands {
    pub fn active(&self) -> impl Iterator<Item = &Band> {
        self.bands.iter().filter(|b| !b.is_degenerate())
    }
}

fn band_stats(lab: &LabImage, rect: Option<MarginRect>, kind: BandKind) -> Band {
    let Some(r) = rect else {
        return Band {
            kind,
            rect: None,
            mean_lab: [0.0; 3],
            pixel_count: 0,
        };
    };
    let mut sum = [0.0f64; 3];
    let mut count = 0usize;
    for y in r.t..=r.b {
        for x in r.l..=r.r {
            let px = lab.get(x, y);
            for c in 0..3 {
                sum[c] += px[c];
            }
            count += 1;
        }
    }
    Band {
        kind,
        rect,
        mean_lab: [
            sum[0] / count as f64,
            sum[1] / count as f64,
            sum[2] / count as f64,
        ],
        pixel_count: count,
    }
}

/// Partitions the frame outside the margins into four strips: top and bottom
/// run the full width, left and right fill the remaining rows between them.
pub fn background_bands(lab: &LabImage, margin: &MarginRect) -> Result<BackgroundBands> {
    let (w, h) = (lab.width(), lab.height());
    if margin.r >= w || margin.b >= h || margin.l > margin.r || margin.t > margin.b {
        return Err(Error::DimensionMismatch {
            expected: (w, h),
            actual: (margin.r + 1, margin.b + 1),
        });
    }
    let top = (margin.t > 0).then(|| MarginRect {
        l: 0,
        t: 0,
        r: w - 1,
        b: margin.t - 1,
    });
    let bottom = (margin.b < h - 1).then(|| MarginRect {
        l: 0,
        t: margin.b + 1,
        r: w - 1,
        b: h - 1,
    });
    let left = (margin.l > 0).then(|| MarginRect {
        l: 0,
        t: margin.t,
        r: margin.l - 1,
        b: margin.b,
    });
    let right = (margin.r < w - 1).then(|| MarginRect {
        l: margin.r + 1,
        t: margin.t,
        r: w - 1,
        b: margin.b,
    });
    Ok(BackgroundBands {
        bands: vec![
            band_stats(lab, top, BandKind::Top),
            band_stats(lab, bottom, BandKind::Bottom),
            band_stats(lab, left, BandKind::Left),
            band_stats(lab, right, BandKind::Right),
        ],
    })
}

/// Product of Lab distances to every active band mean, normalized to
/// `[0, 1]`. With no active band there is no background evidence at all and
/// the map degenerates to zero.
pub fn foreground_map(lab: &LabImage, bands: &BackgroundBands) -> ScalarMap {
    let means: Vec<[f64; 3]> = bands.active().map(|b| b.mean_lab).collect();
    if means.is_empty() {
        log::warn!("all background bands degenerate, foreground map is zero");
        return ScalarMap::zeros(lab.width(), lab.height());
    }
    let raw = ScalarMap::from_fn(lab.width(), lab.height(), |x, y| {
        let px = lab.get(x, y);
        means.iter().map(|&m| lab_distance(px, m)).product()
    });
    normalize01(&raw)
}
