//! The fractional heat semigroup `p_alpha(t)`, with Fourier symbol
//! `exp(-t |xi|^alpha)` (the `alpha = 2` member is the heat kernel `h`).
//!
//! [`semigroup`] works on the periodic lattice: physical kernels, semigroup
//! and gradient-semigroup application. [`distance`] works on the continuous
//! frequency space: the `H^{-s}` distance between `p_alpha` and `h`, its
//! supremum in time and the log-log rate fit over an `alpha` sweep.

pub mod distance;
pub mod properties;
pub mod semigroup;

pub use distance::{
    fprime_bound_check, fprime_sup_over_alpha, kernel_hs_distance, kernel_rate_sweep, sup_over_time, FprimeBound,
    HsDistance, KernelRateSweep, KernelVariant, SupSample, SweepOptions,
};
pub use semigroup::{
    apply_gradient_semigroup, apply_semigroup, kernel_field, self_similarity_check, symbol, KernelSpec, SymbolTable,
    RESOLUTION_GUARD,
};
