//! Objectness map from accumulated window hypotheses.
//!
//! Every hypothesis votes for all pixels it covers. Instead of rasterizing
//! each window, the accumulator adds signed increments at the four window
//! corners of a difference grid and integrates once, so the cost is
//! `O(n_windows + width * height)` regardless of window size.

use std::path::Path;

use crate::error::{Error, Result};
use crate::imaging::{normalize01, IntegralMap, RgbImage, ScalarMap};

/// Smallest frame edge the proposal generator can work with; also the
/// smallest window it emits.
pub const MIN_PROPOSAL_SIZE: u32 = 16;

/// One candidate object window, inclusive pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisWindow {
    pub l: u32,
    pub t: u32,
    pub r: u32,
    pub b: u32,
    /// Generator confidence. External windows may omit it.
    pub score: Option<f64>,
}

impl HypothesisWindow {
    pub fn new(l: u32, t: u32, r: u32, b: u32) -> Result<Self> {
        if r < l || b < t {
            return Err(Error::InvalidParameter(format!(
                "degenerate window ({l},{t},{r},{b})"
            )));
        }
        Ok(Self {
            l,
            t,
            r,
            b,
            score: None,
        })
    }

    pub fn with_score(l: u32, t: u32, r: u32, b: u32, score: f64) -> Result<Self> {
        if !score.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "non-finite score on window ({l},{t},{r},{b})"
            )));
        }
        let mut w = Self::new(l, t, r, b)?;
        w.score = Some(score);
        Ok(w)
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.r - self.l + 1
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.b - self.t + 1
    }

    #[inline]
    pub fn area(&self) -> u64 {
        self.width() as u64 * self.height() as u64
    }

    pub fn iou(&self, other: &HypothesisWindow) -> f64 {
        let il = self.l.max(other.l);
        let it = self.t.max(other.t);
        let ir = self.r.min(other.r);
        let ib = self.b.min(other.b);
        if ir < il || ib < it {
            return 0.0;
        }
        let inter = (ir - il + 1) as f64 * (ib - it + 1) as f64;
        inter / (self.area() as f64 + other.area() as f64 - inter)
    }

    fn check_bounds(&self, index: usize, width: u32, height: u32) -> Result<()> {
        if self.r >= width || self.b >= height {
            return Err(Error::WindowOutOfBounds {
                index,
                l: self.l,
                t: self.t,
                r: self.r,
                b: self.b,
                width,
                height,
            });
        }
        Ok(())
    }
}

/// A batch of hypothesis windows sharing one frame.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProposalSet {
    pub windows: Vec<HypothesisWindow>,
}

impl ProposalSet {
    pub fn new(windows: Vec<HypothesisWindow>) -> Self {
        Self { windows }
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }
}

/// Counts, per pixel, how many windows cover it. Scores are deliberately
/// ignored; every hypothesis carries one vote.
pub fn accumulate_hypotheses(set: &ProposalSet, width: u32, height: u32) -> Result<ScalarMap> {
    if set.is_empty() {
        return Err(Error::EmptyProposals);
    }
    let stride = width as usize + 1;
    let mut grid = vec![0.0f64; stride * (height as usize + 1)];
    for (index, w) in set.windows.iter().enumerate() {
        w.check_bounds(index, width, height)?;
        let (l, t) = (w.l as usize, w.t as usize);
        let (r1, b1) = (w.r as usize + 1, w.b as usize + 1);
        grid[t * stride + l] += 1.0;
        grid[t * stride + r1] -= 1.0;
        grid[b1 * stride + l] -= 1.0;
        grid[b1 * stride + r1] += 1.0;
    }
    // Integrate the difference grid: rows first, then columns.
    for y in 0..=height as usize {
        for x in 1..=width as usize {
            grid[y * stride + x] += grid[y * stride + x - 1];
        }
    }
    for y in 1..=height as usize {
        for x in 0..=width as usize {
            grid[y * stride + x] += grid[(y - 1) * stride + x];
        }
    }
    Ok(ScalarMap::from_fn(width, height, |x, y| {
        grid[y as usize * stride + x as usize]
    }))
}

/// Pads the frame on all four sides with the mean color, so near-border
/// objects gain room for windows that would otherwise be clipped. Returns the
/// padded frame and the offset of the original top-left corner inside it.
pub fn extend_image(img: &RgbImage, ratio: f64) -> Result<(RgbImage, (u32, u32))> {
    if !ratio.is_finite() || ratio < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "border ratio {ratio} out of range"
        )));
    }
    let bw = (ratio * img.width() as f64).ceil() as u32;
    let bh = (ratio * img.height() as f64).ceil() as u32;
    let mean = img.mean_color();
    let mut out = RgbImage::new(img.width() + 2 * bw, img.height() + 2 * bh, mean);
    for y in 0..img.height() {
        for x in 0..img.width() {
            out.set(x + bw, y + bh, img.get(x, y));
        }
    }
    Ok((out, (bw, bh)))
}

// Quantized window edge lengths, shared by width and height. Intersecting
// the grid with the frame keeps at most 36 scale/aspect combinations.
const SCALE_STEPS: [u32; 6] = [16, 32, 64, 128, 256, 512];
// 8x8 boundary template: full weight on the outer ring, a little on the next
// ring, and a penalty inside. Windows whose border rides an edge score high;
// windows straddling an edge through their middle score low.
const TEMPLATE_RING_WEIGHTS: [f64; 4] = [1.0, 0.25, -0.25, -0.25];
const PER_SCALE_CANDIDATE_CAP: usize = 512;
const NMS_IOU_THRESHOLD: f64 = 0.7;

fn gradient_magnitude(img: &RgbImage) -> ScalarMap {
    let (w, h) = (img.width(), img.height());
    let luma = ScalarMap::from_fn(w, h, |x, y| {
        let [r, g, b] = img.get(x, y);
        0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64
    });
    ScalarMap::from_fn(w, h, |x, y| {
        let gx = luma.get((x + 1).min(w - 1), y) - luma.get(x.saturating_sub(1), y);
        let gy = luma.get(x, (y + 1).min(h - 1)) - luma.get(x, y.saturating_sub(1));
        (gx.abs() + gy.abs()).min(255.0)
    })
}

#[inline]
fn template_weight(i: usize, j: usize) -> f64 {
    let ring = i.min(j).min(7 - i).min(7 - j);
    TEMPLATE_RING_WEIGHTS[ring]
}

/// Mean template-weighted gradient over the window's 8x8 downsampled cells.
fn score_window(grad: &IntegralMap, l: u32, t: u32, w: u32, h: u32) -> f64 {
    let mut score = 0.0;
    for j in 0..8u32 {
        let y0 = t + j * h / 8;
        let y1 = t + (j + 1) * h / 8 - 1;
        for i in 0..8u32 {
            let x0 = l + i * w / 8;
            let x1 = l + (i + 1) * w / 8 - 1;
            let area = ((x1 - x0 + 1) * (y1 - y0 + 1)) as f64;
            let mean = grad.rect_sum(x0, y0, x1, y1) / area;
            score += template_weight(i as usize, j as usize) * mean;
        }
    }
    score / 64.0
}

/// Ranks sliding windows over a quantized scale/aspect grid by how much
/// closed-boundary gradient they enclose. Untrained, deterministic, biased
/// toward windows that fit tightly around connected contours.
pub fn generate_proposals(img: &RgbImage, n_p: usize) -> Result<ProposalSet> {
    if n_p == 0 {
        return Err(Error::InvalidParameter("proposal count must be >= 1".into()));
    }
    let (width, height) = (img.width(), img.height());
    if width < MIN_PROPOSAL_SIZE || height < MIN_PROPOSAL_SIZE {
        return Err(Error::ImageTooSmall {
            width,
            height,
            min: MIN_PROPOSAL_SIZE,
        });
    }
    let grad = IntegralMap::build(&gradient_magnitude(img));

    // (combo order, grid order) stamps make every later sort total.
    struct Candidate {
        window: HypothesisWindow,
        score: f64,
        combo: usize,
        grid: usize,
    }
    let mut pool: Vec<Candidate> = Vec::new();
    let mut combo = 0usize;
    for &w in SCALE_STEPS.iter().filter(|&&w| w <= width) {
        for &h in SCALE_STEPS.iter().filter(|&&h| h <= height) {
            let sx = (w / 8).max(1);
            let sy = (h / 8).max(1);
            let mut cands: Vec<Candidate> = Vec::new();
            let mut grid = 0usize;
            let mut t = 0;
            while t + h <= height {
                let mut l = 0;
                while l + w <= width {
                    let score = score_window(&grad, l, t, w, h);
                    cands.push(Candidate {
                        window: HypothesisWindow {
                            l,
                            t,
                            r: l + w - 1,
                            b: t + h - 1,
                            score: Some(score),
                        },
                        score,
                        combo,
                        grid,
                    });
                    grid += 1;
                    l += sx;
                }
                t += sy;
            }
            cands.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.grid.cmp(&b.grid)));
            cands.truncate(PER_SCALE_CANDIDATE_CAP);
            // Same-scale NMS on the capped shortlist.
            let mut kept: Vec<Candidate> = Vec::new();
            for c in cands {
                if kept
                    .iter()
                    .all(|k| k.window.iou(&c.window) <= NMS_IOU_THRESHOLD)
                {
                    kept.push(c);
                }
            }
            pool.extend(kept);
            combo += 1;
        }
    }
    pool.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.combo.cmp(&b.combo))
            .then(a.grid.cmp(&b.grid))
    });
    pool.truncate(n_p);
    Ok(ProposalSet::new(pool.into_iter().map(|c| c.window).collect()))
}

/// Parses a proposal CSV: one `l,t,r,b[,score]` line per window, zero-based
/// inclusive coordinates in the unpadded frame, `#` starts a comment.
pub fn load_proposals(path: impl AsRef<Path>) -> Result<ProposalSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut windows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if fields.len() != 4 && fields.len() != 5 {
            return Err(Error::ProposalParse {
                path: path.into(),
                line,
                message: format!("expected 4 or 5 fields, found {}", fields.len()),
            });
        }
        let mut coords = [0u32; 4];
        for (k, field) in fields[..4].iter().enumerate() {
            coords[k] = field.parse().map_err(|_| Error::ProposalParse {
                path: path.into(),
                line,
                message: format!("invalid coordinate {field:?}"),
            })?;
        }
        let [l, t, r, b] = coords;
        if r < l || b < t {
            return Err(Error::ProposalParse {
                path: path.into(),
                line,
                message: format!("window ({l},{t},{r},{b}) has negative extent"),
            });
        }
        let window = if fields.len() == 5 {
            let score: f64 = fields[4].parse().map_err(|_| Error::ProposalParse {
                path: path.into(),
                line,
                message: format!("invalid score {:?}", fields[4]),
            })?;
            HypothesisWindow::with_score(l, t, r, b, score).map_err(|e| Error::ProposalParse {
                path: path.into(),
                line,
                message: e.to_string(),
            })?
        } else {
            HypothesisWindow::new(l, t, r, b).expect("extent already checked")
        };
        windows.push(window);
    }
    Ok(ProposalSet::new(windows))
}

/// Serializes a proposal set in the same CSV dialect `load_proposals` reads.
pub fn proposals_to_csv(set: &ProposalSet) -> String {
    let mut out = String::from("# l,t,r,b,score\n");
    for w in &set.windows {
        match w.score {
            Some(s) => out.push_str(&format!("{},{},{},{},{s:.6}\n", w.l, w.t, w.r, w.b)),
            None => out.push_str(&format!("{},{},{},{}\n", w.l, w.t, w.r, w.b)),
        }
    }
    out
}

/// Where the hypothesis windows come from.
#[derive(Debug, Clone)]
pub enum ProposalSource {
    /// Run the built-in generator on the padded frame.
    Generate { count: usize },
    /// Caller-supplied windows in unpadded frame coordinates.
    External(ProposalSet),
}

/// Full objectness stage: pad the frame, gather hypotheses, accumulate votes,
/// crop back to the input frame, and normalize to `[0, 1]`.
pub fn compute_objectness_map(
    img: &RgbImage,
    source: &ProposalSource,
    border_ratio: f64,
) -> Result<ScalarMap> {
    let (extended, (ox, oy)) = extend_image(img, border_ratio)?;
    let proposals = match source {
        ProposalSource::Generate { count } => generate_proposals(&extended, *count)?,
        ProposalSource::External(set) => {
            if set.is_empty() {
                return Err(Error::EmptyProposals);
            }
            let mut shifted = Vec::with_capacity(set.len());
            for (index, w) in set.windows.iter().enumerate() {
                w.check_bounds(index, img.width(), img.height())?;
                shifted.push(HypothesisWindow {
                    l: w.l + ox,
                    t: w.t + oy,
                    r: w.r + ox,
                    b: w.b + oy,
                    score: w.score,
                });
            }
            ProposalSet::new(shifted)
        }
    };
    let votes = accumulate_hypotheses(&proposals, extended.width(), extended.height())?;
    let cropped = votes.crop(ox, oy, img.width(), img.height())?;
    Ok(normalize01(&cropped))
}
