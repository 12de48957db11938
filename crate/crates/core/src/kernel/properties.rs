//! Measurements of the classical semigroup facts: unit mass, positivity,
//! algebraic tail, `L^p` time decay, the exponential law and half-Hölder
//! continuity in time. Each function reports the measured quantity; the
//! caller decides on tolerances.

use serde::{Deserialize, Serialize};

use super::semigroup::{apply_semigroup, kernel_field, KernelSpec};
use crate::error::{Error, Result};
use crate::lab::{fit_rate, RateFit};
use crate::spectral::{lp_norm, sobolev_norm, Field, Grid, SobolevFlavor};

/// `| ||p_alpha(t)||_{L^1} - 1 |`
pub fn mass_defect(spec: &KernelSpec, grid: &Grid) -> Result<f64> {
    let k = kernel_field(spec, grid)?;
    Ok((lp_norm(&k, 1.0)? - 1.0).abs())
}

/// Smallest kernel sample divided by the peak value.
pub fn min_relative_value(spec: &KernelSpec, grid: &Grid) -> Result<f64> {
    let vals = kernel_field(spec, grid)?.real_values();
    let peak = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let low = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(low / peak)
}

/// Envelope constants for `P_alpha(x) <= C (1 + |x|)^{-(n + alpha)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayEnvelope {
    pub alpha: f64,
    /// `max P_alpha(x) (1+|x|)^{n+alpha}` over `1 <= |x| <= L/2`
    pub constant: f64,
    /// the same maximum restricted to `1 <= |x| <= L/4`
    pub inner_constant: f64,
    /// smallest scaled value over `L/4 <= |x| <= L/2`
    pub outer_min: f64,
}

/// Coefficient of the algebraic tail `P_alpha(x) ~ c_alpha |x|^{-1-alpha}`
/// in one dimension, `c_alpha = Gamma(1 + alpha) sin(pi alpha / 2) / pi`.
/// Vanishes at `alpha = 2`, where the tail is Gaussian.
pub fn tail_coefficient(alpha: f64) -> f64 {
    let pi = std::f64::consts::PI;
    statrs::function::gamma::gamma(1.0 + alpha) * (pi * alpha / 2.0).sin() / pi
}

pub fn decay_envelope(alpha: f64, grid: &Grid) -> Result<DecayEnvelope> {
    let k = kernel_field(&KernelSpec::new(alpha, 1.0)?, grid)?;
    let n = grid.dim() as f64;
    let l = grid.half_length();
    let mut constant: f64 = 0.0;
    let mut inner: f64 = 0.0;
    let mut outer_min = f64::INFINITY;
    for (idx, v) in k.values().iter().enumerate() {
        let [a, b] = grid.coordinates(idx);
        let r = a.hypot(b);
        if !(1.0..=l / 2.0).contains(&r) {
            continue;
        }
        let scaled = v.re * (1.0 + r).powf(n + alpha);
        constant = constant.max(scaled);
        if r <= l / 4.0 {
            inner = inner.max(scaled);
        } else {
            outer_min = outer_min.min(scaled);
        }
    }
    if constant == 0.0 {
        return Err(Error::invalid("grid", "no samples with 1 <= |x| <= L/2"));
    }
    Ok(DecayEnvelope {
        alpha,
        constant,
        inner_constant: inner,
        outer_min,
    })
}

/// Log-log fit of `||p_alpha(t)||_{L^p}` against `t`; the slope is the decay
/// exponent.
pub fn lp_decay_fit(alpha: f64, p: f64, times: &[f64], grid: &Grid) -> Result<RateFit> {
    let norms = times
        .iter()
        .map(|&t| lp_norm(&kernel_field(&KernelSpec::new(alpha, t)?, grid)?, p))
        .collect::<Result<Vec<f64>>>()?;
    fit_rate(&format!("kernel_L{p}"), times, &norms)
}

/// Relative sup-norm defect of `P(t1) P(t2) u` against `P(t1 + t2) u`.
pub fn semigroup_defect(u: &Field, alpha: f64, t1: f64, t2: f64) -> Result<f64> {
    let a = apply_semigroup(
        &apply_semigroup(u, &KernelSpec::new(alpha, t2)?),
        &KernelSpec::new(alpha, t1)?,
    );
    let b = apply_semigroup(u, &KernelSpec::new(alpha, t1 + t2)?);
    let a = a.to_physical();
    let b = b.to_physical();
    let diff = lp_norm(&a.sub(&b)?, f64::INFINITY)?;
    let scale = lp_norm(&b, f64::INFINITY)?;
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

/// `||P(t1) phi - P(t2) phi||_{H^s} / (|t1 - t2|^{1/2} ||phi||_{H^s})` for
/// each pair.
pub fn holder_ratios(phi: &Field, alpha: f64, s: f64, pairs: &[(f64, f64)]) -> Result<Vec<f64>> {
    let base = sobolev_norm(phi, s, SobolevFlavor::Inhomogeneous)?;
    pairs
        .iter()
        .map(|&(t1, t2)| {
            if t1 == t2 {
                return Err(Error::invalid("pairs", "times of a pair must differ"));
            }
            let a = apply_semigroup(phi, &KernelSpec::new(alpha, t1)?);
            let b = apply_semigroup(phi, &KernelSpec::new(alpha, t2)?);
            let num = sobolev_norm(&a.sub(&b)?, s, SobolevFlavor::Inhomogeneous)?;
            Ok(num / ((t1 - t2).abs().sqrt() * base))
        })
        .collect()
}

/// Multiplier bound behind [`holder_ratios`] for times at least `eps`:
/// `sup_a exp(-eps a) min(1, a dt) / dt^{1/2} <= (2 e eps)^{-1/2}`.
pub fn holder_constant_bound(eps: f64) -> f64 {
    (2.0 * std::f64::consts::E * eps).powf(-0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_coefficient_known_values() {
        // alpha = 1 is the Cauchy kernel 1 / (pi (1 + x^2))
        assert!((tail_coefficient(1.0) - 1.0 / std::f64::consts::PI).abs() < 1e-14);
        let g = 1.329_340_388_179_137; // Gamma(5/2)
        let want = g * std::f64::consts::FRAC_1_SQRT_2 / std::f64::consts::PI;
        assert!((tail_coefficient(1.5) - want).abs() < 1e-13);
        assert!(tail_coefficient(2.0).abs() < 1e-15);
    }
}
