use crate::error::{GsError, Result};
use crate::math::quad::integrate_interval;
use crate::math::special::ln_gamma_unchecked;
use crate::math::QuadConfig;

use super::params::GsParams;

/// Characteristic function of the GS law at `t`, accurate to about `tol`.
///
/// The density is symmetric so the result is real.
pub fn cf(params: &GsParams, t: &[f64], tol: f64) -> Result<f64> {
    if t.len() != params.p() {
        return Err(GsError::Dimension {
            expected: params.p(),
            got: t.len(),
        });
    }
    crate::error::check_finite(t.iter().sum(), "probe vector")?;
    let norm2: f64 = t.iter().map(|x| x * x).sum();
    let g = params.gamma_g();
    let rho = params.rho();
    let gauss = (-g * g * norm2).exp();
    if rho == 1.0 {
        return Ok(gauss);
    }
    let s = params.sigma().quad_form(t);
    Ok(rho * gauss + (1.0 - rho) * student_cf(params.alpha(), s, tol)?)
}

/// CF of a multivariate student law at a point where `tᵀΣt = s`.
///
/// Uses the scale mixture `X = Z √(α/V)`, `V ~ χ²_α`, which gives
/// `E[exp(−sα / 2V)]`, integrated in `w = ln v` where the integrand is log-concave.
pub fn student_cf(alpha: f64, s: f64, tol: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(GsError::Domain {
            what: "alpha",
            value: alpha,
        });
    }
    if !(s >= 0.0) || !s.is_finite() {
        return Err(GsError::Domain {
            what: "quadratic form",
            value: s,
        });
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    let c = 0.5 * s * alpha;
    let half = 0.5 * alpha;
    let v_mode = half + (half * half + 2.0 * c).sqrt();
    let w_mode = v_mode.ln();
    let peak = half * w_mode - 0.5 * v_mode - c / v_mode;
    // log integrand relative to its peak, in u = w − w_mode
    let rel = |u: f64| half * u - 0.5 * v_mode * u.exp_m1() - c / v_mode * (-u).exp_m1();
    let edge = |dir: f64| {
        let mut step = 1.0 / (1.0 + half.sqrt());
        let mut u = 0.0;
        while rel(u + dir * step) > -60.0 {
            u += dir * step;
            step *= 1.5;
        }
        u + dir * step
    };
    let (lo, hi) = (edge(-1.0), edge(1.0));
    let ln_norm = half * 2f64.ln() + ln_gamma_unchecked(half);
    let scale = (peak - ln_norm).exp();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let cfg = QuadConfig {
        abs_tol: tol / scale,
        rel_tol: 1e-13,
        max_intervals: 4_000,
    };
    let q = integrate_interval(|u| rel(u).exp(), lo, hi, &cfg)?;
    Ok((q.value * scale).clamp(0.0, 1.0))
}
