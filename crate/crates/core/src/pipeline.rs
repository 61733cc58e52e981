//! End-to-end saliency pipeline.
//!
//! Stage order: objectness votes, background-contrast foreground, their
//! pointwise product, compactness propagation over superpixels, pointwise
//! fusion of all three cues, and a final contrast rescale. Each stage is
//! timed and failures carry the stage name.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::compactness::{
    centroid_of_interest, compactness_map, propagate_compactness, source_vertex, Centroid,
    RegionGraph,
};
use crate::error::{Error, Result};
use crate::foreground::{background_bands, estimate_margins, foreground_map, MarginRect};
use crate::imaging::{normalize01, rgb_to_lab, RgbImage, ScalarMap};
use crate::objectness::{compute_objectness_map, load_proposals, ProposalSource};
use crate::slic::{slic_superpixels, Segmentation};

/// Smallest frame the pipeline accepts on either axis.
pub const MIN_IMAGE_SIZE: u32 = 16;
/// SLIC spatial weight used by the compactness stage.
pub const SLIC_COMPACTNESS: f64 = 10.0;

/// Tunables for one detection run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Number of window hypotheses to accumulate.
    pub proposal_count: usize,
    /// Fraction of objectness mass each margin sweep must cover.
    pub margin_fraction: f64,
    /// Requested superpixel count.
    pub superpixel_count: usize,
    /// Padding added per side before proposal generation, as a fraction of
    /// the corresponding image dimension.
    pub border_ratio: f64,
    /// Percentile that must clear 0.5 after the final rescale. 90 means the
    /// top tenth of pixels.
    pub rescale_percentile: f64,
    /// External window CSV. `None` runs the built-in generator.
    pub proposals_file: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            proposal_count: 1000,
            margin_fraction: 0.1,
            superpixel_count: 100,
            border_ratio: 0.1,
            rescale_percentile: 90.0,
            proposals_file: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageTiming {
    pub stage: &'static str,
    pub ms: f64,
}

/// Everything `detect` produces, intermediate cues included.
#[derive(Debug, Clone)]
pub struct SaliencyResult {
    pub saliency: ScalarMap,
    pub objectness: ScalarMap,
    pub foreground: ScalarMap,
    /// Pointwise objectness * foreground (the map the centroid and the
    /// region supports are read from).
    pub combined: ScalarMap,
    pub compactness: ScalarMap,
    pub margin: Option<MarginRect>,
    pub centroid: Option<Centroid>,
    pub segmentation: Option<Segmentation>,
    /// Per-region mean of `combined`, indexed by region label.
    pub region_support: Vec<f64>,
    /// Per-region propagated compactness, indexed by region label.
    pub region_compactness: Vec<f64>,
    pub timings: Vec<StageTiming>,
    pub total_ms: f64,
}

/// Pointwise product of the objectness and foreground cues.
pub fn of_map(ob: &ScalarMap, fg: &ScalarMap) -> Result<ScalarMap> {
    if ob.dims() != fg.dims() {
        return Err(Error::DimensionMismatch {
            expected: ob.dims(),
            actual: fg.dims(),
        });
    }
    let (w, h) = ob.dims();
    Ok(ScalarMap::from_fn(w, h, |x, y| ob.get(x, y) * fg.get(x, y)))
}

/// Pointwise product of all three cues. Any cue at zero silences the pixel.
pub fn fuse(ob: &ScalarMap, fg: &ScalarMap, cn: &ScalarMap) -> Result<ScalarMap> {
    if ob.dims() != fg.dims() || ob.dims() != cn.dims() {
        return Err(Error::DimensionMismatch {
            expected: ob.dims(),
            actual: if ob.dims() != fg.dims() {
                fg.dims()
            } else {
                cn.dims()
            },
        });
    }
    let (w, h) = ob.dims();
    Ok(ScalarMap::from_fn(w, h, |x, y| {
        ob.get(x, y) * fg.get(x, y) * cn.get(x, y)
    }))
}

/// Normalizes, then brightens with a monotone power `v^gamma` until the
/// `(100 - percentile)` fraction of pixels reaches 0.5. Gamma is found by
/// bisection in `[0.01, 1]`; the transform never reorders pixels.
pub fn rescale_saliency(s: &ScalarMap, percentile: f64) -> Result<ScalarMap> {
    if !(percentile > 0.0 && percentile < 100.0) {
        return Err(Error::InvalidParameter(format!(
            "rescale percentile {percentile} outside (0, 100)"
        )));
    }
    let normalized = normalize01(s);
    let n = normalized.values().len();
    if n == 0 {
        return Ok(normalized);
    }
    let (_, max) = normalized.min_max();
    if max <= 0.0 {
        log::warn!("saliency map is empty, rescale is a no-op");
        return Ok(normalized);
    }

    let fraction = 1.0 - percentile / 100.0;
    let target = ((fraction * n as f64).ceil() as usize).max(1);

    let mut sorted = normalized.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    // Count with the exact transform that gets applied below; the algebraic
    // threshold 0.5^(1/gamma) can disagree with powf by one ulp right at the
    // boundary, which is enough to undercount coverage by a pixel.
    let count_at = |gamma: f64| n - sorted.partition_point(|&v| v.powf(gamma) < 0.5);

    if count_at(1.0) >= target {
        return Ok(normalized);
    }
    let gamma = if count_at(0.01) < target {
        log::warn!("rescale cannot reach the requested coverage, clamping gamma to 0.01");
        0.01
    } else {
        let mut lo = 0.01;
        let mut hi = 1.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if count_at(mid) >= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };

    let values = normalized.values().iter().map(|&v| v.powf(gamma)).collect();
    ScalarMap::from_values(normalized.width(), normalized.height(), values)
}

/// Runs the full pipeline, resolving the proposal source from the config.
pub fn detect(img: &RgbImage, cfg: &PipelineConfig) -> Result<SaliencyResult> {
    let source = match &cfg.proposals_file {
        Some(path) => {
            ProposalSource::External(load_proposals(path).map_err(|e| e.in_stage("objectness"))?)
        }
        None => ProposalSource::Generate {
            count: cfg.proposal_count,
        },
    };
    detect_with_source(img, cfg, &source)
}

/// Runs the full pipeline on an in-memory proposal source.
pub fn detect_with_source(
    img: &RgbImage,
    cfg: &PipelineConfig,
    source: &ProposalSource,
) -> Result<SaliencyResult> {
    if img.width() < MIN_IMAGE_SIZE || img.height() < MIN_IMAGE_SIZE {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            min: MIN_IMAGE_SIZE,
        });
    }
    let start = Instant::now();
    let mut timings = Vec::new();
    let mut mark = Instant::now();
    let lap = |stage: &'static str, timings: &mut Vec<StageTiming>, mark: &mut Instant| {
        let now = Instant::now();
        timings.push(StageTiming {
            stage,
            ms: now.duration_since(*mark).as_secs_f64() * 1e3,
        });
        *mark = now;
    };

    let objectness = compute_objectness_map(img, source, cfg.border_ratio)
        .map_err(|e| e.in_stage("objectness"))?;
    lap("objectness", &mut timings, &mut mark);

    let (w, h) = objectness.dims();
    if objectness.total() <= 0.0 {
        // No hypothesis contrast at all (e.g. a uniform frame). Every
        // downstream cue would collapse anyway, so finish here.
        log::warn!("objectness map is constant, emitting an all-zero saliency map");
        return Ok(SaliencyResult {
            saliency: ScalarMap::zeros(w, h),
            objectness,
            foreground: ScalarMap::zeros(w, h),
            combined: ScalarMap::zeros(w, h),
            compactness: ScalarMap::zeros(w, h),
            margin: None,
            centroid: None,
            segmentation: None,
            region_support: Vec::new(),
            region_compactness: Vec::new(),
            timings,
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }

    let lab = rgb_to_lab(img);
    lap("color", &mut timings, &mut mark);

    let margin =
        estimate_margins(&objectness, cfg.margin_fraction).map_err(|e| e.in_stage("foreground"))?;
    let bands = background_bands(&lab, &margin).map_err(|e| e.in_stage("foreground"))?;
    let foreground = foreground_map(&lab, &bands);
    lap("foreground", &mut timings, &mut mark);

    let combined = of_map(&objectness, &foreground).map_err(|e| e.in_stage("combine"))?;
    lap("combine", &mut timings, &mut mark);

    let centroid = centroid_of_interest(&combined);
    let segmentation = slic_superpixels(&lab, cfg.superpixel_count, SLIC_COMPACTNESS)
        .map_err(|e| e.in_stage("compactness"))?;
    let graph = RegionGraph::build(&segmentation, &combined).map_err(|e| e.in_stage("compactness"))?;
    let source_region = source_vertex(&segmentation, &centroid);
    let region_compactness = propagate_compactness(&graph, source_region as usize)
        .map_err(|e| e.in_stage("compactness"))?;
    let compactness =
        compactness_map(&segmentation, &region_compactness).map_err(|e| e.in_stage("compactness"))?;
    lap("compactness", &mut timings, &mut mark);

    let fused = fuse(&objectness, &foreground, &compactness).map_err(|e| e.in_stage("fuse"))?;
    lap("fuse", &mut timings, &mut mark);

    let saliency =
        rescale_saliency(&fused, cfg.rescale_percentile).map_err(|e| e.in_stage("rescale"))?;
    lap("rescale", &mut timings, &mut mark);

    Ok(SaliencyResult {
        saliency,
        objectness,
        foreground,
        combined,
        compactness,
        margin: Some(margin),
        centroid: Some(centroid),
        region_support: graph.vertex_of().to_vec(),
        segmentation: Some(segmentation),
        region_compactness,
        timings,
        total_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[derive(Serialize)]
struct Sidecar<'a> {
    margin: &'a Option<MarginRect>,
    centroid: &'a Option<Centroid>,
    timings: &'a [StageTiming],
    total_ms: f64,
    config: &'a PipelineConfig,
}

/// Writes the per-image JSON sidecar: margins, centroid, stage timings, and
/// the config the run used.
pub fn write_sidecar(
    path: impl AsRef<Path>,
    result: &SaliencyResult,
    cfg: &PipelineConfig,
) -> Result<()> {
    let path = path.as_ref();
    let sidecar = Sidecar {
        margin: &result.margin,
        centroid: &result.centroid,
        timings: &result.timings,
        total_ms: result.total_ms,
        config: cfg,
    };
    let text = serde_json::to_string_pretty(&sidecar)
        .map_err(|e| Error::InvalidParameter(format!("sidecar serialization: {e}")))?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
