//! Benchmark metrics and dataset plumbing.
//!
//! Fixed-threshold precision/recall sweeps run on the 8-bit quantized map,
//! `round(255 * s) >= t` for every `t` in `0..=255`, averaged per threshold
//! across images. The adaptive threshold is twice the map mean, applied in
//! continuous `[0, 1]` space with a strictly-greater comparison, so an
//! all-zero map yields an empty mask rather than an all-on one.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::imaging::ScalarMap;

/// Beta^2 in the F-measure, weighting precision over recall.
pub const BETA_SQUARED: f64 = 0.3;

/// Binary ground-truth annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruthMask {
    width: u32,
    height: u32,
    data: Vec<bool>,
}

impl GroundTruthMask {
    /// Binarizes 8-bit annotation levels at 128, the usual convention for
    /// masks stored as grayscale images.
    pub fn from_levels(width: u32, height: u32, levels: &[u8]) -> Result<Self> {
        Self::from_bools(width, height, levels.iter().map(|&v| v >= 128).collect())
    }

    pub fn from_bools(width: u32, height: u32, data: Vec<bool>) -> Result<Self> {
        if data.len() != (width as usize) * (height as usize) {
            return Err(Error::InvalidParameter(format!(
                "mask buffer holds {} entries, expected {}",
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

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let (w, h, levels) = crate::io::load_gray_u8(path)?;
        Self::from_levels(w, h, &levels)
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.data
    }

    pub fn positives(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }
}

/// Thresholded prediction mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: u32,
    height: u32,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.data
    }
}

/// Quantizes `s` to 8-bit levels and keeps pixels at or above `t`. The `u8`
/// threshold makes out-of-range levels like 256 unrepresentable.
pub fn binarize(s: &ScalarMap, t: u8) -> BinaryMask {
    let data = s
        .values()
        .iter()
        .map(|&v| (v * 255.0).round().clamp(0.0, 255.0) as u8 >= t)
        .collect();
    BinaryMask {
        width: s.width(),
        height: s.height(),
        data,
    }
}

/// Twice the map mean.
pub fn adaptive_threshold(s: &ScalarMap) -> f64 {
    2.0 * s.total() / s.values().len() as f64
}

/// Pixels strictly above the adaptive threshold, compared in `[0, 1]` space.
/// The threshold may exceed 1, in which case the mask is empty.
pub fn adaptive_mask(s: &ScalarMap) -> BinaryMask {
    let t = adaptive_threshold(s);
    BinaryMask {
        width: s.width(),
        height: s.height(),
        data: s.values().iter().map(|&v| v > t).collect(),
    }
}

/// Precision and recall with the usual degenerate conventions: no predicted
/// positives gives precision 1, no ground-truth positives gives recall 1.
pub fn precision_recall(pred: &BinaryMask, gt: &GroundTruthMask) -> Result<(f64, f64)> {
    if pred.dims() != gt.dims() {
        return Err(Error::DimensionMismatch {
            expected: gt.dims(),
            actual: pred.dims(),
        });
    }
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut fn_ = 0usize;
    for (&p, &g) in pred.data.iter().zip(&gt.data) {
        match (p, g) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    let precision = if tp + fp == 0 {
        1.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let recall = if tp + fn_ == 0 {
        1.0
    } else {
        tp as f64 / (tp + fn_) as f64
    };
    Ok((precision, recall))
}

/// Weighted harmonic mean of precision and recall; zero when both are zero.
pub fn f_measure(precision: f64, recall: f64, beta_squared: f64) -> f64 {
    let denom = beta_squared * precision + recall;
    if denom == 0.0 {
        return 0.0;
    }
    (1.0 + beta_squared) * precision * recall / denom
}

/// Mean absolute error between a `[0, 1]` map and a binary mask.
pub fn mae(s: &ScalarMap, gt: &GroundTruthMask) -> Result<f64> {
    if s.dims() != gt.dims() {
        return Err(Error::DimensionMismatch {
            expected: gt.dims(),
            actual: s.dims(),
        });
    }
    let sum: f64 = s
        .values()
        .iter()
        .zip(&gt.data)
        .map(|(&v, &g)| (v - if g { 1.0 } else { 0.0 }).abs())
        .sum();
    Ok(sum / s.values().len() as f64)
}

/// How images and masks are laid out on disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetLayout {
    /// One flat directory, `X.jpg` next to its `X.png` (or `X.bmp`) mask.
    Msra1000,
    /// `images/` and `ground_truth/` trees, paired by stem, searched
    /// recursively.
    Icoseg,
    /// `img/` and `gt/` directories, paired by stem.
    PairedDirs,
}

impl std::str::FromStr for DatasetLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "msra1000" => Ok(Self::Msra1000),
            "icoseg" => Ok(Self::Icoseg),
            "paired-dirs" => Ok(Self::PairedDirs),
            other => Err(Error::InvalidParameter(format!(
                "unknown dataset layout {other:?} (expected msra1000, icoseg, or paired-dirs)"
            ))),
        }
    }
}

/// One image/mask pair, named by the shared stem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetPair {
    pub name: String,
    pub image: PathBuf,
    pub mask: PathBuf,
}

const IMAGE_EXTENSIONS: [&str; 4] = ["jpg", "jpeg", "png", "bmp"];
const MASK_EXTENSIONS: [&str; 3] = ["png", "bmp", "jpg"];

fn collect_by_stem(dir: &Path, recursive: bool, exts: &[&str]) -> Result<BTreeMap<String, PathBuf>> {
    let mut out = BTreeMap::new();
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    paths.sort();
    for path in paths {
        if path.is_dir() {
            if recursive {
                out.extend(collect_by_stem(&path, true, exts)?);
            }
            continue;
        }
        let Some(ext) = path.extension().and_then(|e| e.to_str()) else {
            continue;
        };
        if !exts.iter().any(|e| ext.eq_ignore_ascii_case(e)) {
            continue;
        }
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            out.entry(stem.to_string()).or_insert(path);
        }
    }
    Ok(out)
}

/// Enumerates image/mask pairs under `root`, sorted by name. Images without
/// a mask are skipped with a log line.
pub fn load_dataset(root: impl AsRef<Path>, layout: DatasetLayout) -> Result<Vec<DatasetPair>> {
    let root = root.as_ref();
    let (images, masks) = match layout {
        DatasetLayout::Msra1000 => {
            let images = collect_by_stem(root, false, &["jpg", "jpeg"])?;
            // Masks share the directory, so only extensions that cannot be
            // the photograph itself qualify.
            let masks = collect_by_stem(root, false, &["png", "bmp"])?;
            (images, masks)
        }
        DatasetLayout::Icoseg => (
            collect_by_stem(&root.join("images"), true, &IMAGE_EXTENSIONS)?,
            collect_by_stem(&root.join("ground_truth"), true, &MASK_EXTENSIONS)?,
        ),
        DatasetLayout::PairedDirs => (
            collect_by_stem(&root.join("img"), false, &IMAGE_EXTENSIONS)?,
            collect_by_stem(&root.join("gt"), false, &MASK_EXTENSIONS)?,
        ),
    };
    let mut pairs = Vec::new();
    for (stem, image) in &images {
        match masks.get(stem) {
            Some(mask) => pairs.push(DatasetPair {
                name: stem.clone(),
                image: image.clone(),
                mask: mask.clone(),
            }),
            None => log::warn!("no mask for {}, skipping", image.display()),
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptyDataset { root: root.into() });
    }
    Ok(pairs)
}

/// Saliency map plus ground truth, ready to score.
pub struct EvalItem {
    pub name: String,
    pub saliency: ScalarMap,
    pub mask: GroundTruthMask,
}

#[derive(Debug, Clone, Serialize)]
pub struct ImageEval {
    pub name: String,
    pub mae: f64,
    pub adaptive_threshold: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_beta: f64,
}

/// Mean precision/recall over all images at one fixed threshold.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PRPoint {
    pub threshold: u8,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub image_count: usize,
    pub beta_squared: f64,
    pub mean_mae: f64,
    pub mean_precision: f64,
    pub mean_recall: f64,
    pub mean_f_beta: f64,
    pub per_image: Vec<ImageEval>,
    #[serde(skip)]
    pub curve: Vec<PRPoint>,
}

/// Per-image sweep in `O(pixels + 256)`: histogram the quantized levels over
/// ground-truth positives and negatives, then suffix-sum.
fn threshold_sweep(s: &ScalarMap, gt: &GroundTruthMask) -> ([f64; 256], [f64; 256]) {
    let mut hist_pos = [0u64; 256];
    let mut hist_neg = [0u64; 256];
    for (&v, &g) in s.values().iter().zip(gt.as_slice()) {
        let level = (v * 255.0).round().clamp(0.0, 255.0) as usize;
        if g {
            hist_pos[level] += 1;
        } else {
            hist_neg[level] += 1;
        }
    }
    let positives: u64 = hist_pos.iter().sum();
    let mut precision = [0.0f64; 256];
    let mut recall = [0.0f64; 256];
    let mut tp = 0u64;
    let mut fp = 0u64;
    for t in (0..256usize).rev() {
        tp += hist_pos[t];
        fp += hist_neg[t];
        precision[t] = if tp + fp == 0 {
            1.0
        } else {
            tp as f64 / (tp + fp) as f64
        };
        recall[t] = if positives == 0 {
            1.0
        } else {
            tp as f64 / positives as f64
        };
    }
    (precision, recall)
}

/// Scores every item and aggregates. Items are sorted by name first so the
/// reduction never depends on arrival order; mismatched pairs are skipped
/// with a log line.
pub fn evaluate(items: Vec<EvalItem>) -> Result<EvalReport> {
    let mut items = items;
    items.sort_by(|a, b| a.name.cmp(&b.name));

    let mut per_image = Vec::new();
    let mut curve_precision = [0.0f64; 256];
    let mut curve_recall = [0.0f64; 256];
    for item in &items {
        if item.saliency.dims() != item.mask.dims() {
            log::warn!(
                "{}: saliency {:?} vs mask {:?}, skipping",
                item.name,
                item.saliency.dims(),
                item.mask.dims()
            );
            continue;
        }
        let (precision, recall) = threshold_sweep(&item.saliency, &item.mask);
        for t in 0..256 {
            curve_precision[t] += precision[t];
            curve_recall[t] += recall[t];
        }
        let t_a = adaptive_threshold(&item.saliency);
        let (p, r) = precision_recall(&adaptive_mask(&item.saliency), &item.mask)?;
        per_image.push(ImageEval {
            name: item.name.clone(),
            mae: mae(&item.saliency, &item.mask)?,
            adaptive_threshold: t_a,
            precision: p,
            recall: r,
            f_beta: f_measure(p, r, BETA_SQUARED),
        });
    }
    if per_image.is_empty() {
        return Err(Error::InvalidParameter(
            "no scorable image/mask pairs".into(),
        ));
    }

    let n = per_image.len() as f64;
    let curve = (0..256)
        .map(|t| PRPoint {
            threshold: t as u8,
            precision: curve_precision[t] / n,
            recall: curve_recall[t] / n,
        })
        .collect();
    Ok(EvalReport {
        image_count: per_image.len(),
        beta_squared: BETA_SQUARED,
        mean_mae: per_image.iter().map(|e| e.mae).sum::<f64>() / n,
        mean_precision: per_image.iter().map(|e| e.precision).sum::<f64>() / n,
        mean_recall: per_image.iter().map(|e| e.recall).sum::<f64>() / n,
        mean_f_beta: per_image.iter().map(|e| e.f_beta).sum::<f64>() / n,
        per_image,
        curve,
    })
}

impl EvalReport {
    /// Per-image CSV: `name,mae,adaptive_threshold,precision,recall,f_beta`.
    pub fn per_image_csv(&self) -> String {
        let mut out = String::from("name,mae,adaptive_threshold,precision,recall,f_beta\n");
        for e in &self.per_image {
            out.push_str(&format!(
                "{},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                e.name, e.mae, e.adaptive_threshold, e.precision, e.recall, e.f_beta
            ));
        }
        out
    }

    /// Mean curve CSV, one row per threshold level.
    pub fn curve_csv(&self) -> String {
        let mut out = String::from("threshold,mean_precision,mean_recall\n");
        for p in &self.curve {
            out.push_str(&format!(
                "{},{:.6},{:.6}\n",
                p.threshold, p.precision, p.recall
            ));
        }
        out
    }

    /// Aggregate JSON, with the run configuration echoed alongside.
    pub fn to_json(&self, config_echo: &serde_json::Value) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        value["config"] = config_echo.clone();
        serde_json::to_string_pretty(&value).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mask(w: u32, h: u32, on: &[(u32, u32)]) -> GroundTruthMask {
        let mut data = vec![false; (w * h) as usize];
        for &(x, y) in on {
            data[(y * w + x) as usize] = true;
        }
        GroundTruthMask::from_bools(w, h, data).unwrap()
    }

    #[test]
    fn binarize_at_zero_keeps_everything() {
        let s = ScalarMap::from_values(2, 1, vec![0.0, 1.0]).unwrap();
        assert!(binarize(&s, 0).as_slice().iter().all(|&b| b));
    }

    #[test]
    fn binarize_uses_quantized_levels() {
        let s = ScalarMap::from_values(1, 1, vec![0.5]).unwrap();
        // round(255 * 0.5) = 128
        assert!(binarize(&s, 128).as_slice()[0]);
        assert!(!binarize(&s, 129).as_slice()[0]);
        assert!(binarize(&s, 255).as_slice().iter().all(|&b| !b));
    }

    #[test]
    fn precision_recall_counts_by_hand() {
        let gt = mask(2, 2, &[(0, 0)]);
        let pred = binarize(
            &ScalarMap::from_values(2, 2, vec![1.0, 0.0, 1.0, 0.0]).unwrap(),
            255,
        );
        let (p, r) = precision_recall(&pred, &gt).unwrap();
        assert_eq!(p, 0.5);
        assert_eq!(r, 1.0);
    }

    #[test]
    fn degenerate_masks_follow_conventions() {
        let gt = mask(2, 2, &[(0, 0)]);
        let none = binarize(&ScalarMap::zeros(2, 2), 255);
        let (p, r) = precision_recall(&none, &gt).unwrap();
        assert_eq!((p, r), (1.0, 0.0));

        let empty_gt = mask(2, 2, &[]);
        let some = binarize(&ScalarMap::from_fn(2, 2, |_, _| 1.0), 1);
        let (p, r) = precision_recall(&some, &empty_gt).unwrap();
        assert_eq!((p, r), (0.0, 1.0));
    }

    #[test]
    fn f_measure_hand_values() {
        assert!((f_measure(0.8, 0.4, 0.3) - 0.65).abs() < 1e-12);
        assert_eq!(f_measure(0.0, 0.0, 0.3), 0.0);
        for i in 1..=100 {
            let p = i as f64 / 100.0;
            assert!((f_measure(p, p, 0.3) - p).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn adaptive_threshold_is_twice_the_mean() {
        let s = ScalarMap::from_values(2, 1, vec![0.2, 0.6]).unwrap();
        assert!((adaptive_threshold(&s) - 0.8).abs() < 1e-12);

        let ones = ScalarMap::from_fn(3, 3, |_, _| 1.0);
        assert_eq!(adaptive_threshold(&ones), 2.0);
        // Threshold above the max: empty mask.
        assert!(adaptive_mask(&ones).as_slice().iter().all(|&b| !b));

        let zeros = ScalarMap::zeros(3, 3);
        assert_eq!(adaptive_threshold(&zeros), 0.0);
        // Strictly-greater comparison keeps the mask empty at threshold 0.
        assert!(adaptive_mask(&zeros).as_slice().iter().all(|&b| !b));
    }

    #[test]
    fn adaptive_mask_ignores_positive_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let s = ScalarMap::from_fn(17, 13, |_, _| rng.random());
        let base = adaptive_mask(&s);
        for alpha in [0.5, 2.0] {
            let scaled = ScalarMap::from_fn(17, 13, |x, y| alpha * s.get(x, y));
            assert_eq!(adaptive_mask(&scaled), base);
        }
    }

    #[test]
    fn mae_hand_values() {
        let s = ScalarMap::from_values(2, 2, vec![0.0, 0.5, 1.0, 0.25]).unwrap();
        let gt = mask(2, 2, &[(1, 0), (0, 1)]);
        // |0 - 0| + |0.5 - 1| + |1 - 1| + |0.25 - 0| = 0.75 over four pixels
        assert!((mae(&s, &gt).unwrap() - 0.1875).abs() < 1e-12);

        let perfect = ScalarMap::from_values(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(mae(&perfect, &gt).unwrap(), 0.0);

        let constant = ScalarMap::from_fn(2, 2, |_, _| 0.5);
        assert_eq!(mae(&constant, &mask(2, 2, &[(0, 0)])).unwrap(), 0.5);
    }

    #[test]
    fn recall_never_increases_with_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        for _ in 0..20 {
            let s = ScalarMap::from_fn(12, 9, |_, _| rng.random());
            let gt = GroundTruthMask::from_bools(
                12,
                9,
                (0..12 * 9).map(|_| rng.random_bool(0.3)).collect(),
            )
            .unwrap();
            let (_, recall) = threshold_sweep(&s, &gt);
            for t in 1..256 {
                assert!(recall[t] <= recall[t - 1] + 1e-15);
            }
        }
    }

    #[test]
    fn evaluate_perfect_maps_score_one() {
        let gt = mask(4, 4, &[(0, 0), (1, 0), (0, 1), (1, 1)]);
        let s = ScalarMap::from_fn(4, 4, |x, y| if x < 2 && y < 2 { 1.0 } else { 0.0 });
        let report = evaluate(vec![EvalItem {
            name: "a".into(),
            saliency: s,
            mask: gt,
        }])
        .unwrap();
        assert_eq!(report.image_count, 1);
        assert_eq!(report.mean_mae, 0.0);
        assert_eq!(report.mean_precision, 1.0);
        assert_eq!(report.mean_recall, 1.0);
        assert!((report.mean_f_beta - 1.0).abs() < 1e-12);
        assert_eq!(report.curve.len(), 256);
        assert_eq!(report.curve[0].recall, 1.0);
    }

    #[test]
    fn evaluate_averages_curves_per_threshold() {
        // Image A: constant 1 map, half-on mask -> precision 0.5 everywhere.
        // Image B: perfect map with quarter coverage.
        let a = EvalItem {
            name: "a".into(),
            saliency: ScalarMap::from_fn(2, 2, |_, _| 1.0),
            mask: mask(2, 2, &[(0, 0), (1, 0)]),
        };
        let b = EvalItem {
            name: "b".into(),
            saliency: ScalarMap::from_fn(2, 2, |x, y| if (x, y) == (0, 0) { 1.0 } else { 0.0 }),
            mask: mask(2, 2, &[(0, 0)]),
        };
        let report = evaluate(vec![a, b]).unwrap();
        let p255 = report.curve[255].precision;
        assert!((p255 - (0.5 + 1.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn evaluate_skips_mismatched_pairs() {
        let good = EvalItem {
            name: "good".into(),
            saliency: ScalarMap::from_fn(2, 2, |_, _| 1.0),
            mask: mask(2, 2, &[(0, 0)]),
        };
        let bad = EvalItem {
            name: "bad".into(),
            saliency: ScalarMap::zeros(3, 2),
            mask: mask(2, 2, &[(0, 0)]),
        };
        let report = evaluate(vec![good, bad]).unwrap();
        assert_eq!(report.image_count, 1);
        assert_eq!(report.per_image[0].name, "good");
    }

    #[test]
    fn evaluate_rejects_empty_input() {
        assert!(evaluate(Vec::new()).is_err());
    }

    #[test]
    fn csv_headers_match_contract() {
        let gt = mask(2, 2, &[(0, 0)]);
        let s = ScalarMap::from_fn(2, 2, |x, y| if (x, y) == (0, 0) { 1.0 } else { 0.0 });
        let report = evaluate(vec![EvalItem {
            name: "img".into(),
            saliency: s,
            mask: gt,
        }])
        .unwrap();
        assert!(report
            .per_image_csv()
            .starts_with("name,mae,adaptive_threshold,precision,recall,f_beta\n"));
        assert!(report
            .curve_csv()
            .starts_with("threshold,mean_precision,mean_recall\n"));
        assert_eq!(report.curve_csv().lines().count(), 257);

        let json = report.to_json(&serde_json::json!({"superpixel_count": 100}));
        assert!(json.contains("mean_f_beta"));
        assert!(json.contains("superpixel_count"));
    }

    #[test]
    fn dataset_layouts_pair_by_stem() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();

        // paired-dirs layout
        std::fs::create_dir_all(root.join("img")).unwrap();
        std::fs::create_dir_all(root.join("gt")).unwrap();
        let img = crate::imaging::RgbImage::new(4, 4, [1, 2, 3]);
        crate::io::save_rgb_png(root.join("img/a.png"), &img).unwrap();
        crate::io::save_rgb_png(root.join("img/b.png"), &img).unwrap();
        crate::io::save_gray_png(root.join("gt/a.png"), &ScalarMap::zeros(4, 4)).unwrap();
        let pairs = load_dataset(root, DatasetLayout::PairedDirs).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].name, "a");

        // msra1000 layout: jpg next to png mask
        let flat = dir.path().join("flat");
        std::fs::create_dir_all(&flat).unwrap();
        let buf: image::RgbImage = image::ImageBuffer::from_pixel(4, 4, image::Rgb([9, 9, 9]));
        buf.save(flat.join("x.jpg")).unwrap();
        crate::io::save_gray_png(flat.join("x.png"), &ScalarMap::zeros(4, 4)).unwrap();
        let pairs = load_dataset(&flat, DatasetLayout::Msra1000).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].name, "x");
        assert!(pairs[0].image.ends_with("x.jpg"));
        assert!(pairs[0].mask.ends_with("x.png"));

        // icoseg layout: nested subdirectories
        let ico = dir.path().join("ico");
        std::fs::create_dir_all(ico.join("images/group1")).unwrap();
        std::fs::create_dir_all(ico.join("ground_truth/group1")).unwrap();
        crate::io::save_rgb_png(ico.join("images/group1/p.png"), &img).unwrap();
        crate::io::save_gray_png(ico.join("ground_truth/group1/p.png"), &ScalarMap::zeros(4, 4))
            .unwrap();
        let pairs = load_dataset(&ico, DatasetLayout::Icoseg).unwrap();
        assert_eq!(pairs.len(), 1);

        // empty root errors
        let empty = dir.path().join("empty/img");
        std::fs::create_dir_all(&empty).unwrap();
        std::fs::create_dir_all(dir.path().join("empty/gt")).unwrap();
        assert!(matches!(
            load_dataset(dir.path().join("empty"), DatasetLayout::PairedDirs),
            Err(Error::EmptyDataset { .. })
        ));
    }

    #[test]
    fn layout_parses_from_str() {
        assert_eq!(
            "msra1000".parse::<DatasetLayout>().unwrap(),
            DatasetLayout::Msra1000
        );
        assert!("bogus".parse::<DatasetLayout>().is_err());
    }
}
