//! Analysis of one-dimensional ReLU networks and approximation rates.
//!
//! * [`exact_pwl`] turns a scalar network into its piecewise-linear form;
//!   [`count_linear_regions`] counts its pieces against `(2W)^L`.
//! * [`error_report`] measures sup and L² errors against a reference.
//! * [`min_pieces`] and [`frenzen_constant`] give the piece count needed by
//!   any piecewise-linear approximant and its asymptotic constant.
//! * [`cover_interval`], [`pack_interval`] and [`pack_exp_family`] are the
//!   small metric-entropy calculators.

mod entropy;
mod error;
mod measure;
mod pieces;
mod pwl;

pub use entropy::{cover_interval, pack_exp_family, pack_interval};
pub use error::AnalysisError;
pub use measure::{error_report, fmt_real, l2_error, sup_error, write_csv, Domain, ErrorReport, BREAKPOINT_BUDGET};
pub use pieces::{frenzen_constant, integrate, min_pieces, minimax_line_error, MIN_POINTS_PER_PIECE};
pub use pwl::{
    count_composed_regions, count_linear_regions, exact_pwl, exact_pwl_limited, PwlFunction, RegionCount,
    DEFAULT_MAX_KNOTS, MERGE_TOL, SLOPE_TOL,
};

pub type Result<T, E = AnalysisError> = std::result::Result<T, E>;
