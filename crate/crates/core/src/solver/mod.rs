//! Mild solutions of `u_t + (-Δ)^{alpha/2} u + eta . grad(u^b) = 0` on the
//! periodic box.
//!
//! The linear part is applied exactly in Fourier space; the Duhamel integral
//! is discretized with the interaction-picture trapezoid rule. [`solve`]
//! covers the horizon with Picard segments sized by [`existence_time`];
//! [`march`] is the explicit predictor/corrector counterpart.

mod calibrate;
mod config;
mod existence;
mod nonlinear;
mod solve;
mod stepper;
pub mod validation;

pub use calibrate::{calibrate_scheme_constant, Calibration, CalibrationMatrix};
pub use config::{SolveConfig, DEFAULT_SCHEME_CONSTANT};
pub use existence::{existence_time, t0_from_base, t0_lower_bound, T0Bound};
pub use nonlinear::nonlinear_term;
pub use solve::{march, solve, uniform_hs_bound_probe, Diagnostics, HsBoundProbe, SegmentRecord, Trajectory};
pub use stepper::{duhamel_step, picard_solve_segment, SegmentSolution};
