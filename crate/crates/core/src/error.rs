use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the detection pipeline and its stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("proposal set is empty")]
    EmptyProposals,

    #[error("window {index} ({l},{t},{r},{b}) exceeds frame {width}x{height}")]
    WindowOutOfBounds {
        index: usize,
        l: u32,
        t: u32,
        r: u32,
        b: u32,
        width: u32,
        height: u32,
    },

    #[error("{path}:{line}: {message}")]
    ProposalParse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("objectness map is empty (all zero)")]
    EmptyObjectness,

    #[error("image {width}x{height} is smaller than the minimum {min}x{min}")]
    ImageTooSmall { width: u32, height: u32, min: u32 },

    #[error("dimension mismatch: {expected:?} vs {actual:?}")]
    DimensionMismatch {
        expected: (u32, u32),
        actual: (u32, u32),
    },

    #[error("requested {requested} superpixels for {pixels} pixels")]
    TooManySuperpixels { requested: usize, pixels: usize },

    #[error("vertex {vertex} not in graph of {vertices} vertices")]
    VertexOutOfRange { vertex: usize, vertices: usize },

    #[error("map contains a non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no usable image/mask pairs under {root}")]
    EmptyDataset { root: PathBuf },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps an error with the pipeline stage it occurred in.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Error {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn image(path: impl Into<PathBuf>, source: image::ImageError) -> Error {
        Error::Image {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
