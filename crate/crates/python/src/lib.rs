//! Python bindings for the saliency pipeline: load images, run detection,
//! inspect the cue maps, and score results, all from Python.
//!
//! Built as `saldet_py`; see python/smoke_test.py for usage.

use std::collections::HashMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

fn to_py_err(err: saldet::Error) -> PyErr {
    match err {
        saldet::Error::Io { .. } | saldet::Error::Image { .. } => {
            PyIOError::new_err(err.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

/// An 8-bit RGB image.
#[pyclass(module = "saldet_py")]
struct Image {
    inner: saldet::RgbImage,
}

#[pymethods]
impl Image {
    /// Reads a PNG/JPEG/BMP file.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: saldet::io::load_rgb(path).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn width(&self) -> u32 {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> u32 {
        self.inner.height()
    }

    fn __repr__(&self) -> String {
        format!("Image({}x{})", self.inner.width(), self.inner.height())
    }
}

/// Pipeline knobs, mirroring the Rust defaults.
#[pyclass(module = "saldet_py", skip_from_py_object)]
#[derive(Clone)]
struct PipelineConfig {
    inner: saldet::PipelineConfig,
}

#[pymethods]
impl PipelineConfig {
    #[new]
    #[pyo3(signature = (
        proposal_count = 1000,
        margin_fraction = 0.1,
        superpixel_count = 100,
        border_ratio = 0.1,
        rescale_percentile = 90.0,
        proposals_file = None,
    ))]
    fn new(
        proposal_count: usize,
        margin_fraction: f64,
        superpixel_count: usize,
        border_ratio: f64,
        rescale_percentile: f64,
        proposals_file: Option<PathBuf>,
    ) -> Self {
        Self {
            inner: saldet::PipelineConfig {
                proposal_count,
                margin_fraction,
                superpixel_count,
                border_ratio,
                rescale_percentile,
                proposals_file,
            },
        }
    }

    #[getter]
    fn proposal_count(&self) -> usize {
        self.inner.proposal_count
    }

    #[getter]
    fn superpixel_count(&self) -> usize {
        self.inner.superpixel_count
    }

    fn __repr__(&self) -> String {
        format!(
            "PipelineConfig(proposal_count={}, margin_fraction={}, superpixel_count={}, \
             border_ratio={}, rescale_percentile={})",
            self.inner.proposal_count,
            self.inner.margin_fraction,
            self.inner.superpixel_count,
            self.inner.border_ratio,
            self.inner.rescale_percentile
        )
    }
}

/// Detection output: the saliency map plus every intermediate cue.
#[pyclass(module = "saldet_py")]
struct SaliencyResult {
    inner: saldet::SaliencyResult,
}

fn map_values(m: &saldet::ScalarMap) -> Vec<f64> {
    m.values().to_vec()
}

#[pymethods]
impl SaliencyResult {
    #[getter]
    fn width(&self) -> u32 {
        self.inner.saliency.width()
    }

    #[getter]
    fn height(&self) -> u32 {
        self.inner.saliency.height()
    }

    /// Final saliency values in row-major order, each in [0, 1].
    #[getter]
    fn saliency(&self) -> Vec<f64> {
        map_values(&self.inner.saliency)
    }

    #[getter]
    fn objectness(&self) -> Vec<f64> {
        map_values(&self.inner.objectness)
    }

    #[getter]
    fn foreground(&self) -> Vec<f64> {
        map_values(&self.inner.foreground)
    }

    #[getter]
    fn compactness(&self) -> Vec<f64> {
        map_values(&self.inner.compactness)
    }

    /// Margin rectangle as (l, t, r, b), or None for a degenerate frame.
    #[getter]
    fn margin(&self) -> Option<(u32, u32, u32, u32)> {
        self.inner.margin.as_ref().map(|m| (m.l, m.t, m.r, m.b))
    }

    /// Object-of-interest centroid as (x, y), or None.
    #[getter]
    fn centroid(&self) -> Option<(f64, f64)> {
        self.inner.centroid.as_ref().map(|c| (c.x, c.y))
    }

    /// Per-stage wall time in milliseconds.
    #[getter]
    fn stage_timings(&self) -> HashMap<String, f64> {
        self.inner
            .timings
            .iter()
            .map(|t| (t.stage.to_string(), t.ms))
            .collect()
    }

    #[getter]
    fn total_ms(&self) -> f64 {
        self.inner.total_ms
    }

    /// Quantizes the saliency map at `threshold` (a 0..=255 level).
    fn binary_mask(&self, threshold: u8) -> Vec<bool> {
        saldet::eval::binarize(&self.inner.saliency, threshold)
            .as_slice()
            .to_vec()
    }

    /// Writes the saliency map as an 8-bit grayscale PNG.
    fn save_png(&self, path: PathBuf) -> PyResult<()> {
        saldet::io::save_gray_png(path, &self.inner.saliency).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "SaliencyResult({}x{}, {:.1} ms)",
            self.inner.saliency.width(),
            self.inner.saliency.height(),
            self.inner.total_ms
        )
    }
}

/// Runs the full pipeline on an image.
#[pyfunction]
#[pyo3(signature = (image, config = None))]
fn detect(image: &Image, config: Option<&PipelineConfig>) -> PyResult<SaliencyResult> {
    let cfg = config
        .map(|c| c.inner.clone())
        .unwrap_or_default();
    let inner = saldet::detect(&image.inner, &cfg).map_err(to_py_err)?;
    Ok(SaliencyResult { inner })
}

/// Shortcut: `Image.load` without touching the class.
#[pyfunction]
fn load_image(path: PathBuf) -> PyResult<Image> {
    Image::load(path)
}

/// Weighted harmonic mean of precision and recall (0 when both are 0).
#[pyfunction]
#[pyo3(signature = (precision, recall, beta_squared = 0.3))]
fn f_measure(precision: f64, recall: f64, beta_squared: f64) -> f64 {
    saldet::eval::f_measure(precision, recall, beta_squared)
}

/// Scores one saliency PNG against one ground-truth mask PNG. Returns a
/// dict with mae, adaptive_threshold, precision, recall, and f_beta.
#[pyfunction]
fn eval_pair(saliency_png: PathBuf, mask_png: PathBuf) -> PyResult<HashMap<String, f64>> {
    let saliency = saldet::io::load_gray_map(saliency_png).map_err(to_py_err)?;
    let mask = saldet::eval::GroundTruthMask::load(mask_png).map_err(to_py_err)?;
    let mae = saldet::eval::mae(&saliency, &mask).map_err(to_py_err)?;
    let t_a = saldet::eval::adaptive_threshold(&saliency);
    let (precision, recall) =
        saldet::eval::precision_recall(&saldet::eval::adaptive_mask(&saliency), &mask)
            .map_err(to_py_err)?;
    let f_beta = saldet::eval::f_measure(precision, recall, saldet::eval::BETA_SQUARED);
    Ok(HashMap::from([
        ("mae".to_string(), mae),
        ("adaptive_threshold".to_string(), t_a),
        ("precision".to_string(), precision),
        ("recall".to_string(), recall),
        ("f_beta".to_string(), f_beta),
    ]))
}

/// Writes a synthetic dataset (img/ and gt/ subdirectories) under `dir`.
#[pyfunction]
#[pyo3(signature = (dir, count, seed = 2024, width = 160, height = 120))]
fn generate_synthetic(dir: PathBuf, count: u32, seed: u64, width: u32, height: u32) -> PyResult<()> {
    saldet::synth::generate(dir, count, seed, width, height).map_err(to_py_err)
}

#[pymodule]
fn saldet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Image>()?;
    m.add_class::<PipelineConfig>()?;
    m.add_class::<SaliencyResult>()?;
    m.add_function(wrap_pyfunction!(detect, m)?)?;
    m.add_function(wrap_pyfunction!(load_image, m)?)?;
    m.add_function(wrap_pyfunction!(f_measure, m)?)?;
    m.add_function(wrap_pyfunction!(eval_pair, m)?)?;
    m.add_function(wrap_pyfunction!(generate_synthetic, m)?)?;
    m.add("BETA_SQUARED", saldet::eval::BETA_SQUARED)?;
    Ok(())
}
