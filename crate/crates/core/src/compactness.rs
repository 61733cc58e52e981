//! Compactness cue: combined objectness-foreground support spreads outward
//! from the region under the map's centroid of interest.
//!
//! Variables, with `OF` the per-region mean of the combined map:
//!   c(v)     propagated compactness of region v
//!   v_c      region containing the rounded centroid of interest
//!
//! Worklist relaxation over the region adjacency graph:
//!   c(v_c) = OF(v_c), every other c = 0
//!   relax edge (v_i, v_j):  c(v_j) <- sqrt(c(v_i) * OF(v_j))  when larger
//!
//! Each hop mixes the neighbor's own support with the chain back to the
//! centroid, so compact high-support blobs around the centroid keep high
//! values while far-flung regions decay. Seeding c(v_c) with OF(v_c) matters:
//! with an all-zero start no relaxation could ever fire, since
//! sqrt(0 * OF) = 0 never beats anything.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::imaging::{normalize01, ScalarMap};
use crate::slic::Segmentation;

/// Change threshold that ends the relaxation: an update must beat the stored
/// value by more than this to count. Keeps termination prompt on graphs with
/// cycles, where exact convergence is only asymptotic.
pub const PROPAGATION_TOLERANCE: f64 = 1e-9;

/// Support-weighted mean pixel position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Centroid {
    pub x: f64,
    pub y: f64,
}

/// Weighted mean position of the map. A map with no mass has no centroid to
/// speak of; the frame center is the documented fallback.
pub fn centroid_of_interest(of: &ScalarMap) -> Centroid {
    let (w, h) = of.dims();
    let total = of.total();
    if total <= 0.0 {
        log::warn!("combined map has no mass, centroid falls back to frame center");
        return Centroid {
            x: (w - 1) as f64 / 2.0,
            y: (h - 1) as f64 / 2.0,
        };
    }
    let mut sx = 0.0;
    let mut sy = 0.0;
    for y in 0..h {
        for x in 0..w {
            let v = of.get(x, y);
            sx += x as f64 * v;
            sy += y as f64 * v;
        }
    }
    Centroid {
        x: sx / total,
        y: sy / total,
    }
}

/// Region adjacency graph with one support value per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionGraph {
    vertex_of: Vec<f64>,
    adjacency: Vec<Vec<u32>>,
}

impl RegionGraph {
    /// Builds the graph from a segmentation: per-region mean of `of`,
    /// undirected edges wherever two regions touch (4-neighborhood).
    pub fn build(seg: &Segmentation, of: &ScalarMap) -> Result<RegionGraph> {
        if (seg.width(), seg.height()) != of.dims() {
            return Err(Error::DimensionMismatch {
                expected: (seg.width(), seg.height()),
                actual: of.dims(),
            });
        }
        let n = seg.region_count();
        let mut sums = vec![0.0f64; n];
        for y in 0..seg.height() {
            for x in 0..seg.width() {
                sums[seg.label(x, y) as usize] += of.get(x, y);
            }
        }
        let vertex_of: Vec<f64> = sums
            .iter()
            .zip(seg.regions())
            .map(|(s, r)| s / r.pixel_count as f64)
            .collect();

        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
        let connect = |a: u32, b: u32, adjacency: &mut Vec<Vec<u32>>| {
            if a != b {
                adjacency[a as usize].push(b);
                adjacency[b as usize].push(a);
            }
        };
        for y in 0..seg.height() {
            for x in 0..seg.width() {
                let here = seg.label(x, y);
                if x + 1 < seg.width() {
                    connect(here, seg.label(x + 1, y), &mut adjacency);
                }
                if y + 1 < seg.height() {
                    connect(here, seg.label(x, y + 1), &mut adjacency);
                }
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(RegionGraph {
            vertex_of,
            adjacency,
        })
    }

    /// Assembles a graph directly from vertex supports and undirected edges.
    pub fn from_parts(vertex_of: Vec<f64>, edges: &[(u32, u32)]) -> Result<RegionGraph> {
        let n = vertex_of.len();
        if let Some(&v) = vertex_of
            .iter()
            .find(|v| !(v.is_finite() && (0.0..=1.0).contains(*v)))
        {
            return Err(Error::InvalidParameter(format!(
                "vertex support {v} outside [0, 1]"
            )));
        }
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: a.max(b) as usize,
                    vertices: n,
                });
            }
            if a != b {
                adjacency[a as usize].push(b);
                adjacency[b as usize].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(RegionGraph {
            vertex_of,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_of.len()
    }

    pub fn vertex_of(&self) -> &[f64] {
        &self.vertex_of
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }
}

/// Region whose pixel set contains the rounded centroid.
pub fn source_vertex(seg: &Segmentation, centroid: &Centroid) -> u32 {
    let x = (centroid.x.round().max(0.0) as u32).min(seg.width() - 1);
    let y = (centroid.y.round().max(0.0) as u32).min(seg.height() - 1);
    seg.label(x, y)
}

/// Worklist relaxation from `source` with the default change threshold.
pub fn propagate_compactness(graph: &RegionGraph, source: usize) -> Result<Vec<f64>> {
    propagate_compactness_with_tol(graph, source, PROPAGATION_TOLERANCE).map(|(c, _)| c)
}

/// Same relaxation with an explicit threshold; also reports how many frontier
/// rounds ran. `tol = 0` relaxes until no update improves any vertex at all.
pub fn propagate_compactness_with_tol(
    graph: &RegionGraph,
    source: usize,
    tol: f64,
) -> Result<(Vec<f64>, usize)> {
    let n = graph.vertex_count();
    if source >= n {
        return Err(Error::VertexOutOfRange {
            vertex: source,
            vertices: n,
        });
    }
    let mut c = vec![0.0f64; n];
    c[source] = graph.vertex_of[source];
    let mut frontier = vec![source];
    let mut queued = vec![false; n];
    let mut rounds = 0usize;
    while !frontier.is_empty() {
        rounds += 1;
        let mut next = Vec::new();
        for &i in &frontier {
            for &j in graph.neighbors(i) {
                let j = j as usize;
                let candidate = (c[i] * graph.vertex_of[j]).sqrt();
                if candidate > c[j] + tol {
                    c[j] = candidate;
                    if !queued[j] {
                        queued[j] = true;
                        next.push(j);
                    }
                }
            }
        }
        for &j in &next {
            queued[j] = false;
        }
        frontier = next;
    }
    Ok((c, rounds))
}

/// Paints each pixel with its region's propagated value and normalizes.
pub fn compactness_map(seg: &Segmentation, c: &[f64]) -> Result<ScalarMap> {
    if c.len() != seg.region_count() {
        return Err(Error::VertexOutOfRange {
            vertex: c.len(),
            vertices: seg.region_count(),
        });
    }
    let raw = ScalarMap::from_fn(seg.width(), seg.height(), |x, y| {
        c[seg.label(x, y) as usize]
    });
    Ok(normalize01(&raw))
}
