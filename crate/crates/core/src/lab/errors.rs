use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::Trajectory;
use crate::spectral::lp_norm;

fn snapshot_gaps(a: &Trajectory, b: &Trajectory, q: f64) -> Result<Vec<f64>> {
    if !a.same_schedule(b) {
        return Err(Error::ScheduleMismatch);
    }
    a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| lp_norm(&x.sub(y)?, q))
        .collect()
}

/// `max_t ||u_a(t) - u_b(t)||_inf` over the common snapshots.
pub fn sup_error(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    Ok(snapshot_gaps(a, b, f64::INFINITY)?.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedNormError {
    pub value: f64,
    /// False for `q = 1` or `q = inf`, where no rate is claimed.
    pub rate_claim_valid: bool,
}

/// `|| u_a - u_b ||_{L^p(0,T; L^q)}`: trapezoid rule in time over the
/// snapshots, sup over snapshots for `p = inf`.
pub fn mixed_norm_error(a: &Trajectory, b: &Trajectory, p: f64, q: f64) -> Result<MixedNormError> {
    if !(p >= 1.0) {
        return Err(Error::invalid("p", format!("must lie in [1, inf], got {p}")));
    }
    if !(q >= 1.0) {
        return Err(Error::invalid("q", format!("must lie in [1, inf], got {q}")));
    }
    let gaps = snapshot_gaps(a, b, q)?;
    let value = if p.is_infinite() {
        gaps.iter().cloned().fold(0.0, f64::max)
    } else {
        let t = &a.times;
        let integral: f64 = (1..t.len())
            .map(|k| 0.5 * (t[k] - t[k - 1]) * (gaps[k - 1].powf(p) + gaps[k].powf(p)))
            .sum();
        integral.powf(1.0 / p)
    };
    Ok(MixedNormError {
        value,
        rate_claim_valid: q > 1.0 && q.is_finite(),
    })
}
