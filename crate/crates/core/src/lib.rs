//! Pseudo-spectral tools for the fractional heat equation with a nonlinear
//! drift,
//!
//! ```text
//! u_t + (-Δ)^{alpha/2} u + eta . grad(u^b) = 0,   1 < alpha <= 2,
//! ```
//!
//! and for measuring how its solutions approach the `alpha = 2` solution.
//!
//! - [`spectral`]: periodic grids, the discrete Fourier pair, `L^p`/`H^s` norms.
//! - [`kernel`]: the semigroup `p_alpha(t)`, its distance to the heat kernel.
//! - [`solver`]: mild solutions by Picard iteration and interval chaining.
//! - [`lab`]: data families, error functionals, rate studies.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod kernel;
pub mod lab;
pub mod quadrature;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use kernel::{HsDistance, KernelSpec, KernelVariant};
pub use lab::{DataFamilySpec, NormSpec, Profile, RateFit, RateStudy, RateStudySpec};
pub use quadrature::QuadratureSpec;
pub use solver::{SolveConfig, Trajectory};
pub use spectral::{Field, Grid, GridSpec, Representation, SobolevFlavor};
