use serde::{Deserialize, Serialize};

use super::field::{Field, Representation};
use crate::error::{Error, Result};

/// Which Sobolev weight to apply to `|u_hat(xi)|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SobolevFlavor {
    /// `(1 + |xi|^2)^s`
    Inhomogeneous,
    /// `|xi|^{2s}`
    Homogeneous,
    /// `(1 + |xi|^2)^{-s}`, i.e. the `H^{-s}` norm for a given `s >= 0`.
    Negative,
}

/// Discrete `L^p` norm of a physical field: `(sum |u|^p dx^n)^{1/p}`, or the
/// grid maximum when `p` is infinite.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    f.expect(Representation::Physical)?;
    if !(p >= 1.0) {
        return Err(Error::invalid("p", format!("need p >= 1, got {p}")));
    }
    let values = f.values();
    if p.is_infinite() {
        return Ok(values.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    let w = f.grid().cell_volume();
    let sum: f64 = if p == 1.0 {
        values.iter().map(|v| v.norm()).sum()
    } else if p == 2.0 {
        values.iter().map(|v| v.norm_sqr()).sum()
    } else {
        values.iter().map(|v| v.norm().powf(p)).sum()
    };
    Ok((sum * w).powf(1.0 / p))
}

/// Sobolev norm `(sum w(xi) |u_hat(xi)|^2 dxi^n)^{1/2}` computed from the
/// spectral coefficients. Physical fields are transformed first.
///
/// With the transform normalization of [`Grid`](super::Grid) every flavor
/// reduces to the discrete `L^2` norm at `s = 0`.
pub fn sobolev_norm(f: &Field, s: f64, flavor: SobolevFlavor) -> Result<f64> {
    let spec = f.to_spectral();
    let grid = spec.grid();
    let mut sum = 0.0;
    for (k, v) in spec.values().iter().enumerate() {
        let xi2 = {
            let [a, b] = grid.wavevector(k);
            a * a + b * b
        };
        let weight = match flavor {
            SobolevFlavor::Inhomogeneous => (1.0 + xi2).powf(s),
            SobolevFlavor::Negative => (1.0 + xi2).powf(-s),
            SobolevFlavor::Homogeneous => {
                if s == 0.0 {
                    1.0
                } else if xi2 == 0.0 {
                    if s < 0.0 {
                        let zero_mode = v.norm();
                        if zero_mode >= 1e-12 {
                            return Err(Error::SingularHomogeneous { s, zero_mode });
                        }
                        continue;
                    }
                    0.0
                } else {
                    xi2.powf(s)
                }
            }
        };
        sum += weight * v.norm_sqr();
    }
    Ok((sum * grid.xi_cell_volume()).sqrt())
}
