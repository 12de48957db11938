use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::semigroup::{check_alpha, xi_pow};
use crate::error::{Error, Result};
use crate::lab::{fit_rate, RateFit};
use crate::quadrature::{integrate, QuadratureSpec};

/// Which kernel the `H^{-s}` distance is taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelVariant {
    /// `p_alpha - h`
    Value,
    /// `grad p_alpha - grad h`
    Gradient,
}

impl KernelVariant {
    pub fn id(&self) -> &'static str {
        match self {
            KernelVariant::Value => "kernel_h-s",
            KernelVariant::Gradient => "grad_kernel_h-s",
        }
    }
}

/// Parameters of one whole-space distance `||p_alpha(t) - h(t)||_{H^{-s}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HsDistance {
    pub alpha: f64,
    pub time: f64,
    pub s: f64,
    pub dim: usize,
    pub variant: KernelVariant,
}

impl HsDistance {
    pub fn new(alpha: f64, time: f64, s: f64) -> Self {
        HsDistance {
            alpha,
            time,
            s,
            dim: 1,
            variant: KernelVariant::Value,
        }
    }

    pub fn gradient(mut self) -> Self {
        self.variant = KernelVariant::Gradient;
        self
    }

    pub fn in_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !(1..=2).contains(&self.dim) {
            return Err(Error::invalid(
                "dim",
                format!("only 1 and 2 supported, got {}", self.dim),
            ));
        }
        if !(self.s > self.dim as f64 / 2.0) {
            return Err(Error::invalid(
                "s",
                format!("need s > n/2 = {}, got {}", self.dim as f64 / 2.0, self.s),
            ));
        }
        if !(self.time >= 0.0 && self.time.is_finite()) {
            return Err(Error::invalid("time", format!("must be >= 0, got {}", self.time)));
        }
        Ok(())
    }

    /// Power of `r` multiplying the squared symbol difference in the radial
    /// integrand: Sobolev weight, gradient factor and polar Jacobian.
    fn radial_power(&self) -> f64 {
        let grad = match self.variant {
            KernelVariant::Value => 0.0,
            KernelVariant::Gradient => 2.0,
        };
        grad + (self.dim as f64 - 1.0) - 2.0 * self.s
    }

    /// Whether the weight makes the integrand integrable without help from
    /// the exponential factors, i.e. whether the distance stays bounded as
    /// `t -> 0`.
    pub fn bounded_near_zero_time(&self) -> bool {
        self.radial_power() < -1.0
    }

    fn angular(&self) -> f64 {
        // even integrand on the line, or the circle length in the plane
        if self.dim == 1 {
            2.0
        } else {
            2.0 * PI
        }
    }

    /// Squared radial integrand.
    fn integrand(&self, r: f64) -> f64 {
        let t = self.time;
        let ra = xi_pow(r, self.alpha);
        // exp(-t r^a) - exp(-t r^2) = exp(-t r^2) expm1(t (r^2 - r^a)), with
        // r^2 - r^a = r^a expm1((2 - a) ln r); avoids cancellation near a = 2
        let gap = if r == 0.0 {
            0.0
        } else {
            ra * ((2.0 - self.alpha) * r.ln()).exp_m1()
        };
        let diff = if t * gap < 30.0 {
            (-t * r * r).exp() * (t * gap).exp_m1()
        } else {
            (-t * ra).exp() - (-t * r * r).exp()
        };
        let mut w = (1.0 + r * r).powf(-self.s);
        if self.variant == KernelVariant::Gradient {
            w *= r * r;
        }
        if self.dim == 2 {
            w *= r;
        }
        self.angular() * diff * diff * w
    }

    /// Upper bound of the integral over `r > cut` (needs `cut >= 1`), or
    /// `None` when the bound is not yet valid at this cut.
    fn tail_bound(&self, cut: f64) -> Option<f64> {
        // For r >= cut >= 1: |diff| <= exp(-t r^a) <= exp(-t cut^{a-1} r) and
        // the algebraic factor is at most r^m (1 + r^2)^{-s} <= r^{m}.
        let m = self.radial_power();
        let lambda = 2.0 * self.time * cut.powf(self.alpha - 1.0);
        if lambda <= 0.0 {
            return None;
        }
        if m > 0.0 && cut < 2.0 * m / lambda {
            return None;
        }
        Some(self.angular() * 2.0 * cut.powf(m) * (-lambda * cut).exp() / lambda)
    }
}

/// `||p_alpha(t) - h(t)||_{H^{-s}}` over the whole space (no lattice): the
/// square root of the radial integral of
/// `|exp(-t|xi|^alpha) - exp(-t|xi|^2)|^2 (1+|xi|^2)^{-s}`.
///
/// The integral is accumulated over dyadic shells `[2^k, 2^{k+1}]` until an
/// analytic tail bound falls below the requested relative tolerance.
pub fn kernel_hs_distance(query: &HsDistance, quad: &QuadratureSpec) -> Result<f64> {
    query.validate()?;
    if query.alpha == 2.0 || query.time == 0.0 {
        return Ok(0.0);
    }
    let f = |r: f64| query.integrand(r);
    let mut total = integrate(f, 0.0, 1.0, quad)?;
    let mut lo = 1.0;
    loop {
        let hi = 2.0 * lo;
        total += integrate(f, lo, hi, quad)?;
        lo = hi;
        if let Some(tail) = query.tail_bound(lo) {
            if tail <= quad.rel_tol * total || tail <= quad.abs_tol {
                break;
            }
        }
        if lo > 1e12 {
            return Err(Error::QuadratureNotConverged(format!(
                "tail of the H^-s integrand still significant at |xi| = {lo:e}"
            )));
        }
    }
    Ok(total.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepOptions {
    pub dim: usize,
    pub variant: KernelVariant,
    /// Uniform time samples on `[0, T]` are `0, T/samples, ..., T`.
    pub time_samples: usize,
    pub quadrature: QuadratureSpec,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            dim: 1,
            variant: KernelVariant::Value,
            time_samples: 64,
            quadrature: QuadratureSpec::default(),
        }
    }
}

/// Supremum over `t in [0, T]` of the kernel distance for one `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupSample {
    pub alpha: f64,
    pub sup: f64,
    pub argmax_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelRateSweep {
    pub samples: Vec<SupSample>,
    pub fit: RateFit,
    /// Smallest time admitted to the supremum.
    pub time_floor: f64,
}

/// Locates `sup_t` of the kernel distance by uniform sampling and a
/// golden-section refinement around the discrete argmax.
///
/// When the weight does not tame the integrand as `t -> 0` (gradient variant
/// with `s <= n/2 + 1`) the distance is unbounded near zero time, so the
/// supremum is restricted to `[T/samples, T]`.
pub fn sup_over_time(alpha: f64, horizon: f64, s: f64, options: &SweepOptions) -> Result<SupSample> {
    let m = options.time_samples.max(2);
    let base = HsDistance {
        alpha,
        time: 0.0,
        s,
        dim: options.dim,
        variant: options.variant,
    };
    base.validate()?;
    let floor = if base.bounded_near_zero_time() {
        0.0
    } else {
        horizon / m as f64
    };
    let eval = |t: f64| kernel_hs_distance(&HsDistance { time: t, ..base }, &options.quadrature);
    let times: Vec<f64> = (0..=m)
        .map(|k| horizon * k as f64 / m as f64)
        .filter(|&t| t >= floor)
        .collect();
    let values = times.iter().map(|&t| eval(t)).collect::<Result<Vec<f64>>>()?;
    let (k, &best) = values.iter().enumerate().fold(
        (0, &f64::NEG_INFINITY),
        |acc, (i, v)| if *v > *acc.1 { (i, v) } else { acc },
    );
    let lo = times[k.saturating_sub(1)];
    let hi = times[(k + 1).min(times.len() - 1)];
    let (t_ref, v_ref) = golden_max(&eval, lo, hi, 1e-9 * horizon)?;
    let (sup, argmax_time) = if v_ref > best { (v_ref, t_ref) } else { (best, times[k]) };
    Ok(SupSample {
        alpha,
        sup,
        argmax_time,
    })
}

fn golden_max(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc > fd { (c, fc) } else { (d, fd) })
}

/// Fits `log sup_t ||p_alpha - h||_{H^{-s}}` against `log(2 - alpha)`.
///
/// Each `alpha` is independent and evaluated in parallel; results are sorted
/// by `alpha` before fitting so the outcome does not depend on scheduling.
pub fn kernel_rate_sweep(alphas: &[f64], horizon: f64, s: f64, options: &SweepOptions) -> Result<KernelRateSweep> {
    let mut distinct: Vec<f64> = alphas.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::DegenerateSweep(format!(
            "{} distinct alpha values, need at least 3",
            distinct.len()
        )));
    }
    if let Some(a) = distinct.iter().find(|a| !(**a > 1.0 && **a < 2.0)) {
        return Err(Error::invalid(
            "alphas",
            format!("sweep values must lie in (1, 2), got {a}"),
        ));
    }
    if !(horizon > 0.0) {
        return Err(Error::invalid("horizon", format!("must be positive, got {horizon}")));
    }
    let samples = distinct
        .par_iter()
        .map(|&a| sup_over_time(a, horizon, s, options))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = samples.iter().map(|p| 2.0 - p.alpha).collect();
    let ys: Vec<f64> = samples.iter().map(|p| p.sup).collect();
    let fit = fit_rate(options.variant.id(), &xs, &ys)?;
    let probe = HsDistance {
        alpha: distinct[0],
        time: 0.0,
        s,
        dim: options.dim,
        variant: options.variant,
    };
    let time_floor = if probe.bounded_near_zero_time() {
        0.0
    } else {
        horizon / options.time_samples.max(2) as f64
    };
    Ok(KernelRateSweep {
        samples,
        fit,
        time_floor,
    })
}

/// Suprema of `|f'_xi(alpha)| = t1 exp(-t1 |xi|^alpha) |xi|^alpha |ln|xi||`
/// over `alpha in [1, alpha_max]`, split into `|xi| <= 1` and `|xi| > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FprimeBound {
    pub sup_small: f64,
    pub sup_large: f64,
    /// `max(sup_small, sup_large) / t1`
    pub constant: f64,
}

/// `max_{alpha in [1, alpha_max]} |f'_xi(alpha)|` for one `|xi|`.
///
/// With `y = |xi|^alpha` the factor `y exp(-t1 y)` is unimodal with its peak
/// at `y = 1/t1`, and `y` sweeps monotonically between `|xi|` and
/// `|xi|^{alpha_max}`, so the maximum sits at the clamped peak.
pub fn fprime_sup_over_alpha(xi_abs: f64, t1: f64, alpha_max: f64) -> f64 {
    // |xi| ln|xi| -> 0 as |xi| -> 0, and ln 1 = 0
    if xi_abs == 0.0 || xi_abs == 1.0 {
        return 0.0;
    }
    let a = xi_abs;
    let b = xi_abs.powf(alpha_max);
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let y = (1.0 / t1).clamp(lo, hi);
    t1 * y * (-t1 * y).exp() * xi_abs.ln().abs()
}

pub fn fprime_bound_check(alpha_max: f64, t1: f64, xi_grid: &[f64]) -> Result<FprimeBound> {
    if !(alpha_max >= 2.0 && alpha_max.is_finite()) {
        return Err(Error::invalid(
            "alpha_max",
            format!("need 2 + delta with delta >= 0, got {alpha_max}"),
        ));
    }
    if !(t1 > 0.0 && t1.is_finite()) {
        return Err(Error::invalid("t1", format!("must be positive, got {t1}")));
    }
    let mut sup_small: f64 = 0.0;
    let mut sup_large: f64 = 0.0;
    for &xi in xi_grid {
        if !(xi >= 0.0) {
            return Err(Error::invalid("xi_grid", format!("entries must be >= 0, got {xi}")));
        }
        let v = fprime_sup_over_alpha(xi, t1, alpha_max);
        if xi <= 1.0 {
            sup_small = sup_small.max(v);
        } else {
            sup_large = sup_large.max(v);
        }
    }
    Ok(FprimeBound {
        sup_small,
        sup_large,
        constant: sup_small.max(sup_large) / t1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_zeros() {
        let q = QuadratureSpec::default();
        assert_eq!(kernel_hs_distance(&HsDistance::new(2.0, 1.0, 1.0), &q).unwrap(), 0.0);
        assert_eq!(kernel_hs_distance(&HsDistance::new(1.7, 0.0, 1.0), &q).unwrap(), 0.0);
    }

    #[test]
    fn rejects_low_regularity() {
        let q = QuadratureSpec::default();
        assert!(kernel_hs_distance(&HsDistance::new(1.7, 1.0, 0.5), &q).is_err());
        assert!(kernel_hs_distance(&HsDistance::new(1.7, 1.0, 1.0).in_dim(2), &q).is_err());
        assert!(kernel_hs_distance(&HsDistance::new(1.7, 1.0, 1.2).in_dim(2), &q).is_ok());
    }

    #[test]
    fn single_alpha_sweep_is_degenerate() {
        let err = kernel_rate_sweep(&[1.9], 1.0, 1.0, &SweepOptions::default()).unwrap_err();
        assert!(matches!(err, Error::DegenerateSweep(_)));
        let err = kernel_rate_sweep(&[1.9, 1.9, 1.95], 1.0, 1.0, &SweepOptions::default()).unwrap_err();
        assert!(matches!(err, Error::DegenerateSweep(_)));
    }

    #[test]
    fn fprime_special_points() {
        for a in [2.0, 2.1, 3.0] {
            assert_eq!(fprime_sup_over_alpha(1.0, 0.5, a), 0.0);
            assert_eq!(fprime_sup_over_alpha(0.0, 0.5, a), 0.0);
        }
    }
}
