//! The `alpha -> 2` experiment: data families with a prescribed rate, error
//! functionals between trajectories, and log-log rate fits.

mod errors;
mod family;
mod fit;
mod study;

pub use errors::{mixed_norm_error, sup_error, MixedNormError};
pub use family::{make_data_family, DataFamily, DataFamilySpec, Profile};
pub use fit::{fit_rate, RateFit, ZERO_ERROR_FLOOR};
pub use study::{
    run_rate_study, FittedRate, FloorCheck, NormSpec, RateStudy, RateStudySpec, DEFAULT_SWEEP, SEGMENT_WARNING,
};
