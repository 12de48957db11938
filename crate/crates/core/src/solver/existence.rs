use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {v}")))
    }
}

/// Length of a time interval on which the Duhamel map contracts:
///
/// `T = 1/2 [ (1 - 1/alpha) / (2^b c |eta| (l1 + hs)^{b-1}) ]^{alpha/(alpha-1)}`
///
/// where `l1`, `hs` are the `L^1` and `H^s` norms of the datum.
pub fn existence_time(l1: f64, hs: f64, alpha: f64, b: u32, eta_abs: f64, c: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::invalid("alpha", format!("must lie in (1, 2], got {alpha}")));
    }
    positive("l1", l1)?;
    positive("hs", hs)?;
    positive("eta_abs", eta_abs)?;
    positive("c", c)?;
    if b < 2 {
        return Err(Error::invalid("b", format!("must be >= 2, got {b}")));
    }
    let base = (1.0 - 1.0 / alpha) / (2f64.powi(b as i32) * c * eta_abs * (l1 + hs).powi(b as i32 - 1));
    Ok(0.5 * base.powf(alpha / (alpha - 1.0)))
}

/// The `alpha`-uniform lower bound on [`existence_time`] for
/// `alpha in (1 + eps, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct T0Bound {
    /// `a = (1 - 1/(1+eps)) / (2^b c |eta| (l1 + hs)^{b-1})`
    pub base: f64,
    /// `a^{2/eps} / 2`
    pub branch_two_over_eps: f64,
    /// `a^{1+eps} / 2`
    pub branch_one_plus_eps: f64,
    /// The larger of the two branches.
    pub printed_max: f64,
    /// The branch that bounds `T_alpha` from below: the `2/eps` power when
    /// `a <= 1`, the `1+eps` power otherwise.
    pub value: f64,
}

/// Evaluates both exponent branches for the uniform existence time.
///
/// Since `alpha/(alpha-1)` lies in `(1+eps, 2/eps)`, `a^{alpha/(alpha-1)}` is
/// bounded below by `a^{2/eps}` when `a <= 1` and by `a^{1+eps}` when
/// `a > 1`. The selected branch is therefore the smaller of the two; the
/// larger one is reported as `printed_max` but is not a lower bound.
pub fn t0_lower_bound(l1_2: f64, hs_2: f64, eps: f64, b: u32, eta_abs: f64, c: f64) -> Result<T0Bound> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("eps", format!("must lie in (0, 1), got {eps}")));
    }
    positive("l1_2", l1_2)?;
    positive("hs_2", hs_2)?;
    positive("eta_abs", eta_abs)?;
    positive("c", c)?;
    if b < 2 {
        return Err(Error::invalid("b", format!("must be >= 2, got {b}")));
    }
    let base = (1.0 - 1.0 / (1.0 + eps)) / (2f64.powi(b as i32) * c * eta_abs * (l1_2 + hs_2).powi(b as i32 - 1));
    Ok(t0_from_base(base, eps))
}

/// Branch evaluation from the bracketed base `a` directly.
pub fn t0_from_base(base: f64, eps: f64) -> T0Bound {
    let branch_two_over_eps = 0.5 * base.powf(2.0 / eps);
    let branch_one_plus_eps = 0.5 * base.powf(1.0 + eps);
    let value = if base <= 1.0 {
        branch_two_over_eps
    } else {
        branch_one_plus_eps
    };
    T0Bound {
        base,
        branch_two_over_eps,
        branch_one_plus_eps,
        printed_max: branch_two_over_eps.max(branch_one_plus_eps),
        value,
    }
}
