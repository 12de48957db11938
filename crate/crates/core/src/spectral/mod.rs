//! Periodic grids, the discrete Fourier transform pair and the norm
//! functionals (`L^p`, `H^s`, `Ḣ^s`, `H^{-s}`) used by every other module.
//!
//! The whole space is approximated by the periodic box `[-L, L)^n`. The
//! transform is the Riemann-sum discretization of the unitary Fourier
//! transform, so Plancherel holds exactly in the form
//! `sum |u|^2 dx^n = sum |u_hat|^2 dxi^n`.

mod field;
mod grid;
mod norms;

pub use field::{Field, Representation};
pub use grid::{Grid, GridSpec};
pub use norms::{lp_norm, sobolev_norm, SobolevFlavor};
