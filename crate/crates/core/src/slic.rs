//! SLIC superpixel segmentation.
//!
//! Local k-means over joint (L, a, b, x, y) features: seeds on a regular
//! grid with spacing `S = sqrt(W * H / n)`, each seed competing for pixels in
//! a `2S x 2S` window, spatial distance weighted by `m / S`. Ten assignment
//! rounds, then a connectivity pass that keeps the largest component of every
//! label and folds each orphan component into its largest adjacent region.

use crate::error::{Error, Result};
use crate::imaging::LabImage;

const SLIC_ITERATIONS: usize = 10;

/// Per-region aggregates computed after connectivity enforcement.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionStats {
    pub pixel_count: usize,
    pub mean_lab: [f64; 3],
    /// Mean pixel position, `(x, y)`.
    pub centroid: (f64, f64),
}

/// Dense label field plus per-region stats. Labels are compact indices in
/// `0..region_count()`, every region 4-connected.
#[derive(Debug, Clone, PartialEq)]
pub struct Segmentation {
    width: u32,
    height: u32,
    labels: Vec<u32>,
    regions: Vec<RegionStats>,
}

impl Segmentation {
    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn label(&self, x: u32, y: u32) -> u32 {
        self.labels[(y * self.width + x) as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn regions(&self) -> &[RegionStats] {
        &self.regions
    }

    pub fn region_count(&self) -> usize {
        self.regions.len()
    }
}

struct Center {
    lab: [f64; 3],
    x: f64,
    y: f64,
}

/// Segments the frame into roughly `n` superpixels. `compactness` is the
/// usual SLIC `m`: larger values trade color adherence for rounder regions.
pub fn slic_superpixels(lab: &LabImage, n: usize, compactness: f64) -> Result<Segmentation> {
    let (width, height) = (lab.width(), lab.height());
    let pixels = (width as usize) * (height as usize);
    if n == 0 {
        return Err(Error::InvalidParameter("superpixel count must be >= 1".into()));
    }
    if n > pixels {
        return Err(Error::TooManySuperpixels {
            requested: n,
            pixels,
        });
    }
    if !(compactness.is_finite() && compactness > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "compactness weight {compactness} out of range"
        )));
    }

    let spacing = ((pixels as f64) / n as f64).sqrt();
    let nx = ((width as f64 / spacing).round() as usize).max(1);
    let ny = ((height as f64 / spacing).round() as usize).max(1);

    let mut centers: Vec<Center> = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let cx = (i as f64 + 0.5) * width as f64 / nx as f64;
            let cy = (j as f64 + 0.5) * height as f64 / ny as f64;
            let px = lab.get(
                (cx as u32).min(width - 1),
                (cy as u32).min(height - 1),
            );
            centers.push(Center {
                lab: px,
                x: cx,
                y: cy,
            });
        }
    }

    // Seed labels by grid cell so every pixel starts owned.
    let mut labels: Vec<u32> = Vec::with_capacity(pixels);
    for y in 0..height as usize {
        let j = (y * ny / height as usize).min(ny - 1);
        for x in 0..width as usize {
            let i = (x * nx / width as usize).min(nx - 1);
            labels.push((j * nx + i) as u32);
        }
    }

    let spatial_weight = (compactness / spacing) * (compactness / spacing);
    let mut dist = vec![f64::INFINITY; pixels];
    for _ in 0..SLIC_ITERATIONS {
        dist.fill(f64::INFINITY);
        for (k, c) in centers.iter().enumerate() {
            let x0 = ((c.x - spacing).floor().max(0.0)) as u32;
            let x1 = ((c.x + spacing).ceil() as u32).min(width - 1);
            let y0 = ((c.y - spacing).floor().max(0.0)) as u32;
            let y1 = ((c.y + spacing).ceil() as u32).min(height - 1);
            for y in y0..=y1 {
                for x in x0..=x1 {
                    let p = lab.get(x, y);
                    let dl = p[0] - c.lab[0];
                    let da = p[1] - c.lab[1];
                    let db = p[2] - c.lab[2];
                    let dx = x as f64 - c.x;
                    let dy = y as f64 - c.y;
                    let d = dl * dl + da * da + db * db + spatial_weight * (dx * dx + dy * dy);
                    let idx = (y * width + x) as usize;
                    if d < dist[idx] {
                        dist[idx] = d;
                        labels[idx] = k as u32;
                    }
                }
            }
        }

        // Move each center to the mean of its pixels; empty centers stay put.
        let mut sums = vec![[0.0f64; 5]; centers.len()];
        let mut counts = vec![0usize; centers.len()];
        for y in 0..height {
            for x in 0..width {
                let idx = (y * width + x) as usize;
                let k = labels[idx] as usize;
                let p = lab.get(x, y);
                sums[k][0] += p[0];
                sums[k][1] += p[1];
                sums[k][2] += p[2];
                sums[k][3] += x as f64;
                sums[k][4] += y as f64;
                counts[k] += 1;
            }
        }
        for (k, c) in centers.iter_mut().enumerate() {
            if counts[k] > 0 {
                let inv = 1.0 / counts[k] as f64;
                c.lab = [sums[k][0] * inv, sums[k][1] * inv, sums[k][2] * inv];
                c.x = sums[k][3] * inv;
                c.y = sums[k][4] * inv;
            }
        }
    }

    let labels = enforce_connectivity(&labels, width, height);
    Ok(finalize(lab, labels))
}

/// Connected-component cleanup: the largest component of each k-means label
/// keeps it, every other component is merged into whichever adjacent region
/// is currently largest. Output labels are compacted in scan order.
fn enforce_connectivity(labels: &[u32], width: u32, height: u32) -> Vec<u32> {
    let w = width as usize;
    let h = height as usize;
    let pixels = w * h;

    // Component discovery in scan order.
    let mut comp_of = vec![usize::MAX; pixels];
    let mut comp_label: Vec<u32> = Vec::new();
    let mut comp_size: Vec<usize> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for start in 0..pixels {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let id = comp_label.len();
        let label = labels[start];
        comp_label.push(label);
        comp_size.push(0);
        stack.push(start);
        comp_of[start] = id;
        while let Some(p) = stack.pop() {
            comp_size[id] += 1;
            let (x, y) = (p % w, p / w);
            let mut visit = |q: usize| {
                if comp_of[q] == usize::MAX && labels[q] == label {
                    comp_of[q] = id;
                    stack.push(q);
                }
            };
            if x > 0 {
                visit(p - 1);
            }
            if x + 1 < w {
                visit(p + 1);
            }
            if y > 0 {
                visit(p - w);
            }
            if y + 1 < h {
                visit(p + w);
            }
        }
    }
    let n_comps = comp_label.len();

    // Largest component per label survives; ties go to the earliest one.
    let mut primary: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    for id in 0..n_comps {
        let entry = primary.entry(comp_label[id]).or_insert(id);
        if comp_size[id] > comp_size[*entry] {
            *entry = id;
        }
    }
    let is_primary: Vec<bool> = (0..n_comps)
        .map(|id| primary[&comp_label[id]] == id)
        .collect();

    // Static component adjacency from 4-neighbor boundary pairs.
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n_comps];
    let push_edge = |a: usize, b: usize, adjacency: &mut Vec<Vec<usize>>| {
        if a != b {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
    };
    for y in 0..h {
        for x in 0..w {
            let p = y * w + x;
            if x + 1 < w {
                push_edge(comp_of[p], comp_of[p + 1], &mut adjacency);
            }
            if y + 1 < h {
                push_edge(comp_of[p], comp_of[p + w], &mut adjacency);
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }

    // Union-find over components, orphans folded in discovery order.
    let mut parent: Vec<usize> = (0..n_comps).collect();
    let mut merged_size = comp_size.clone();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for id in 0..n_comps {
        if is_primary[id] {
            continue;
        }
        let my_root = find(&mut parent, id);
        let mut best: Option<usize> = None;
        for &nb in &adjacency[id] {
            let root = find(&mut parent, nb);
            if root == my_root {
                continue;
            }
            best = match best {
                None => Some(root),
                Some(cur) => {
                    if merged_size[root] > merged_size[cur]
                        || (merged_size[root] == merged_size[cur] && root < cur)
                    {
                        Some(root)
                    } else {
                        Some(cur)
                    }
                }
            };
        }
        if let Some(target) = best {
            parent[my_root] = target;
            merged_size[target] += merged_size[my_root];
        }
    }

    // Compact surviving roots in scan order.
    let mut new_label = vec![u32::MAX; n_comps];
    let mut next = 0u32;
    let mut out = vec![0u32; pixels];
    for p in 0..pixels {
        let root = find(&mut parent, comp_of[p]);
        if new_label[root] == u32::MAX {
            new_label[root] = next;
            next += 1;
        }
        out[p] = new_label[root];
    }
    out
}

fn finalize(lab: &LabImage, labels: Vec<u32>) -> Segmentation {
    let (width, height) = (lab.width(), lab.height());
    let count = labels.iter().map(|&l| l as usize).max().unwrap_or(0) + 1;
    let mut sums = vec![[0.0f64; 5]; count];
    let mut counts = vec![0usize; count];
    for y in 0..height {
        for x in 0..width {
            let k = labels[(y * width + x) as usize] as usize;
            let p = lab.get(x, y);
            sums[k][0] += p[0];
            sums[k][1] += p[1];
            sums[k][2] += p[2];
            sums[k][3] += x as f64;
            sums[k][4] += y as f64;
            counts[k] += 1;
        }
    }
    let regions = (0..count)
        .map(|k| {
            let inv = 1.0 / counts[k] as f64;
            RegionStats {
                pixel_count: counts[k],
                mean_lab: [sums[k][0] * inv, sums[k][1] * inv, sums[k][2] * inv],
                centroid: (sums[k][3] * inv, sums[k][4] * inv),
            }
        })
        .collect();
    Segmentation {
        width,
        height,
        labels,
        regions,
    }
}
