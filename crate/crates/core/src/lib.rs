//! Salient-object detection from window hypotheses.
//!
//! The pipeline composes three per-pixel cues and keeps every intermediate
//! inspectable:
//!
//! 1. [`objectness`] accumulates scored window proposals into a per-pixel
//!    objectness map, with the frame padded by a mean-color border first so
//!    boundary pixels can be covered by windows that overhang the frame.
//! 2. [`foreground`] estimates the object's margins from the objectness
//!    mass, samples background color statistics from the bands outside the
//!    margins, and scores each pixel by its CIELAB distance to them.
//! 3. [`compactness`] spreads support outward from the most object-like
//!    superpixel over the region adjacency graph, damping regions whose
//!    support is not contiguous with the object's core.
//!
//! The final saliency map is the pointwise product of the three cues,
//! contrast-stretched so the salient side of the histogram lands above 0.5.
//! [`eval`] scores maps against ground truth (PR curves, adaptive-threshold
//! F-measure, MAE) and [`synth`] fabricates benchmark frames with exact
//! masks.
//!
//! ```
//! use saldet::pipeline::{detect, PipelineConfig};
//! use saldet::synth::synth_image;
//!
//! let (frame, _mask) = synth_image(7, 0, 160, 120)?;
//! let result = detect(&frame, &PipelineConfig::default())?;
//! assert_eq!(result.saliency.dims(), (160, 120));
//! # Ok::<(), saldet::Error>(())
//! ```

pub mod compactness;
pub mod error;
pub mod eval;
pub mod foreground;
pub mod imaging;
pub mod io;
pub mod objectness;
pub mod pipeline;
pub mod slic;
pub mod synth;

pub use error::{Error, Result};
pub use imaging::{IntegralMap, LabImage, RgbImage, ScalarMap};
pub use pipeline::{detect, PipelineConfig, SaliencyResult};
