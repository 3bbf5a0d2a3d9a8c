use std::f64::consts::PI;

use crate::error::{GsError, Result};
use crate::math::special::ln_gamma_unchecked;

use super::params::MarginalParams;

/// `E|N₁|^r` of one noise sample, finite only for `0 < r < α`.
///
/// The impulsive part has scale `1 / scale_p`, so it enters as `scale_p^{−r}`.
pub fn abs_moment(m: &MarginalParams, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(GsError::Domain {
            what: "moment order",
            value: r,
        });
    }
    let a = m.alpha;
    let lg = ln_gamma_unchecked(0.5 * (r + 1.0)) - 0.5 * PI.ln();
    let gauss = m.rho * (r * (2.0 * m.gamma_g).ln() + lg).exp();
    if m.rho == 1.0 {
        return Ok(gauss);
    }
    if r >= a {
        return Err(GsError::MomentDiverges { order: r, alpha: a });
    }
    let ln_student =
        0.5 * r * a.ln() + lg + ln_gamma_unchecked(0.5 * (a - r)) - ln_gamma_unchecked(0.5 * a) - r * m.scale_p.ln();
    Ok(gauss + (1.0 - m.rho) * ln_student.exp())
}
