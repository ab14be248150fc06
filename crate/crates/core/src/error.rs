use std::path::PathBuf;

use thiserror::Error;

/// Failures raised while building, checking or exporting surfaces.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown knot `{0}`")]
    UnknownKnot(String),
    #[error("refinement did not converge: {0}")]
    NonConvergence(String),
    #[error("bad arc boundary: {0}")]
    BadBoundary(String),
    #[error("curve has no crossings")]
    NoCrossings,
    #[error("degenerate crossing: {0}")]
    DegenerateCrossing(String),
    #[error("no admissible twist axis: {0}")]
    NoAxis(String),
    #[error("twist axis too low: rotated arc reaches height {min_height:.6}")]
    AxisTooLow { min_height: f64 },
    #[error("bump does not match the axis layout: {0}")]
    BumpMismatch(String),
    #[error("crossing intervals overlap: {0}")]
    IntervalOverlap(String),
    #[error("trigonometric substitution requested on an unbounded interval")]
    UnboundedDomain,
    #[error("knot has the wrong form: {0}")]
    BadKnotForm(String),
    #[error("partial derivatives are unbounded below: {0}")]
    Unbounded(String),
    #[error("pieces disagree across seam s = {seam}: mismatch {mismatch:e}")]
    SeamMismatch { seam: f64, mismatch: f64 },
    #[error("sampling window for an unbounded domain is not resolved")]
    DomainUnbounded,
    #[error("R = {given} is below the monotonicity threshold {required}")]
    RadiusTooSmall { given: f64, required: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
