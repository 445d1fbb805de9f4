//! Puiseux-parametrized curve germs: evaluation, multiplicity, tangent
//! directions, real-trace sampling and the straight-path geodesic surrogate.

mod branch;
mod geodesic;
mod germ;
mod germ_file;
mod sampling;
mod series;

use thiserror::Error;

use crate::kv::ParseError;
use crate::quadrature::QuadratureError;

pub use branch::{multiplicity_of, PuiseuxBranch};
pub use geodesic::{geodesic_distance, norm_lower_bound_check, NormLowerBoundReport, DEFAULT_RHO};
pub use germ::{builtin_germ, CurveGerm, PointClass, Side, StarSet, BUILTIN_GERMS};
pub use germ_file::{parse_germ, read_germ_file, write_germ};
pub use sampling::{
    chebyshev_grid, chebyshev_interval_points, is_real_point, sample_real_trace, SampleGenerator, SamplePoint,
    SampleSet, REAL_TOLERANCE,
};
pub use series::TruncatedSeries;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("invalid branch: {0}")]
    InvalidBranch(String),
    #[error("invalid star set: {0}")]
    InvalidStarSet(String),
    #[error("invalid germ: {0}")]
    InvalidGerm(String),
    #[error("unknown germ `{id}` (valid ids: {valid})")]
    UnknownGerm { id: String, valid: String },
    #[error("parameter |z| = {0} lies outside the closed unit disk")]
    OutsideDisk(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("inconsistent germ: image at angle {angle} and radius {parameter} has imaginary norm {imaginary_norm:e}")]
    InconsistentGerm {
        angle: f64,
        parameter: f64,
        imaginary_norm: f64,
    },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("germ file: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Io(String),
}
