use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class, used by frontends to pick an exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Bad configuration, input files or arguments.
    Config,
    /// The physics has no answer for the requested parameters.
    Domain,
    /// A numerical routine failed or received degenerate data.
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("wavelength {wavelength_um} um is outside the {axis} validity window [{min_um}, {max_um}] um")]
    OutOfWindow {
        axis: String,
        wavelength_um: f64,
        min_um: f64,
        max_um: f64,
    },

    #[error("{count} grid cell(s) fall outside the dispersion windows, e.g. (signal, idler) = {examples:?} nm")]
    GridOutOfWindow {
        count: usize,
        examples: Vec<(f64, f64)>,
    },

    #[error("no physical solution: {0}")]
    NoPhysicalSolution(String),

    #[error("pump and idler inverse group velocities coincide; the phase-matching ridge is vertical")]
    DegenerateOrientation,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("filter FWHM {fwhm} is narrower than two grid steps ({step}); use a finer grid")]
    Unresolvable { fwhm: f64, step: f64 },

    #[error("spectrum is not normalized: {0}")]
    NotNormalized(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("half maximum is not bracketed inside the sampled range ({side} edge)")]
    SpanTooNarrow { side: &'static str },

    #[error("grid of {points} points per axis exceeds the oracle limit of {max}; downsample to <= {max}")]
    GridTooLarge { points: usize, max: usize },

    #[error("optimization failed: {reason} (bracket [{lower}, {upper}])")]
    OptimizationFailed {
        reason: String,
        lower: f64,
        upper: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidParameter(_)
            | Error::InvalidGrid(_)
            | Error::GridTooLarge { .. }
            | Error::Parse(_)
            | Error::Io { .. } => ErrorCategory::Config,
            Error::OutOfWindow { .. }
            | Error::GridOutOfWindow { .. }
            | Error::NoPhysicalSolution(_)
            | Error::DegenerateOrientation
            | Error::Unresolvable { .. } => ErrorCategory::Domain,
            Error::NotNormalized(_)
            | Error::DegenerateInput(_)
            | Error::SpanTooNarrow { .. }
            | Error::OptimizationFailed { .. } => ErrorCategory::Numerical,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
