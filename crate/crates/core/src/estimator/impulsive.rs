use std::f64::consts::PI;

use rayon::prelude::*;

use crate::math::special::ln_gamma_unchecked;
use crate::math::sum::par_sum;
use crate::math::SpdMatrix;
use crate::sampler::NoiseSequence;

use super::{EstimationConfig, EstimationError};

/// Median absolute deviation over 0.6745.
pub fn robust_scale(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut v = samples.to_vec();
    let med = median(&mut v);
    for x in v.iter_mut() {
        *x = (*x - med).abs();
    }
    median(&mut v) / 0.6745
}

fn median(v: &mut [f64]) -> f64 {
    let n = v.len();
    let (_, &mut hi, _) = v.select_nth_unstable_by(n / 2, f64::total_cmp);
    if n % 2 == 1 {
        hi
    } else {
        let lo = v[..n / 2].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    }
}

/// Kernel bandwidth `h = c L^{−1/(p+4)} s`, or the configured override.
pub fn bandwidth(l: usize, p: usize, scale: f64, cfg: &EstimationConfig) -> f64 {
    cfg.bandwidth
        .unwrap_or_else(|| cfg.bandwidth_factor * (l as f64).powf(-1.0 / (p as f64 + 4.0)) * scale)
}

/// Gaussian-kernel estimate of the length-`p` window density at the origin.
pub fn gke_origin(seq: &NoiseSequence, p: usize, h: f64) -> f64 {
    let x = seq.samples();
    let l = seq.n_windows(p);
    let norm2 = |i: usize| x[i..i + p].iter().map(|v| v * v).sum::<f64>();
    kernel_at_origin(l, p, h, norm2)
}

fn kernel_at_origin(l: usize, p: usize, h: f64, norm2: impl Fn(usize) -> f64 + Sync) -> f64 {
    let inv = 1.0 / (2.0 * h * h);
    let s = par_sum(l, |i| (-norm2(i) * inv).exp());
    s / l as f64 * (2.0 * PI * h * h).powf(-(p as f64) / 2.0)
}

/// Per-window `‖n‖²` and `nᵀ Σ̂⁻¹ n`.
#[derive(Debug, Clone)]
pub struct WindowStats {
    pub norm2: Vec<f64>,
    pub q: Vec<f64>,
}

impl WindowStats {
    pub fn new(seq: &NoiseSequence, sigma_hat: &SpdMatrix) -> Self {
        let p = sigma_hat.dim();
        let x = seq.samples();
        let (norm2, q) = (0..seq.n_windows(p))
            .into_par_iter()
            .map(|i| {
                let w = &x[i..i + p];
                (w.iter().map(|v| v * v).sum::<f64>(), sigma_hat.inv_quad_form(w))
            })
            .unzip();
        Self { norm2, q }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn gke_origin(&self, p: usize, h: f64) -> f64 {
        kernel_at_origin(self.len(), p, h, |i| self.norm2[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpulsiveFit {
    pub alpha: f64,
    pub gamma_s: f64,
    pub log_likelihood: f64,
    /// `ρ̂ k₁(γ̂_g)`
    pub gaussian_origin_term: f64,
    pub grid: Vec<(f64, f64)>,
    pub refined: Vec<(f64, f64)>,
}

/// `γ_s` for which the student term at the origin equals `deficit`.
fn gamma_s_for(alpha: f64, p: usize, rho: f64, deficit: f64, ln_det: f64) -> f64 {
    let pf = p as f64;
    let ln_k2_unit = ln_gamma_unchecked((alpha + pf) / 2.0)
        - ln_gamma_unchecked(alpha / 2.0)
        - 0.5 * pf * (2.0 * alpha * PI).ln()
        - 0.5 * ln_det;
    (((1.0 - rho).ln() + ln_k2_unit - deficit.ln()) / pf).exp()
}

/// Profile likelihood over α with `γ_s(α)` pinned by the density at the origin.
///
/// Fails with an origin deficit when `f̂(0) ≤ ρ̂ k₁(γ̂_g)`.
pub fn estimate_alpha_gamma_s(
    stats: &WindowStats,
    sigma_hat: &SpdMatrix,
    rho: f64,
    gamma_g: f64,
    f0: f64,
    cfg: &EstimationConfig,
) -> Result<ImpulsiveFit, EstimationError> {
    let p = sigma_hat.dim();
    let pf = p as f64;
    if !(rho < 1.0) {
        return Err(EstimationError::Config {
            what: "rho",
            value: rho,
        });
    }
    let g0 = rho * (2.0 * PI.sqrt() * gamma_g).powf(-pf);
    if !(f0 > g0) {
        return Err(EstimationError::OriginDeficit {
            estimate: f0,
            gaussian_term: g0,
        });
    }
    let deficit = f0 - g0;
    let ln_det = sigma_hat.ln_det();
    let inv4g2 = 1.0 / (4.0 * gamma_g * gamma_g);
    let gauss: Vec<f64> = stats.norm2.par_iter().map(|n2| g0 * (-n2 * inv4g2).exp()).collect();
    let ll = |alpha: f64| -> (f64, f64) {
        let gamma_s = gamma_s_for(alpha, p, rho, deficit, ln_det);
        let scale = 1.0 / (2.0 * gamma_s * gamma_s * alpha);
        let expo = -(alpha + pf) / 2.0;
        let v = par_sum(stats.len(), |i| {
            (gauss[i] + deficit * (expo * (stats.q[i] * scale).ln_1p()).exp()).ln()
        });
        (v, gamma_s)
    };
    let score = |grid: &[f64]| -> Vec<(f64, f64, f64)> {
        grid.iter()
            .map(|&a| {
                let (v, g) = ll(a);
                (a, v, g)
            })
            .collect()
    };
    let best = |rows: &[(f64, f64, f64)]| {
        rows.iter()
            .filter(|r| r.1.is_finite())
            .cloned()
            .fold(None, |acc: Option<(f64, f64, f64)>, r| match acc {
                Some(b) if b.1 >= r.1 => Some(b),
                _ => Some(r),
            })
    };
    let coarse = score(&cfg.alpha_grid());
    let (a_star, ..) = best(&coarse).ok_or(EstimationError::LikelihoodFailure)?;
    let (lo, hi) = cfg.alpha_range;
    let fine_step = cfg.alpha_step / 10.0;
    let fine_grid: Vec<f64> = (-10..=10)
        .map(|k| a_star + k as f64 * fine_step)
        .filter(|&a| a >= lo - 1e-12 && a <= hi + 1e-12 && a > 0.0)
        .collect();
    let refined = score(&fine_grid);
    let mut all = coarse.clone();
    all.extend(refined.iter().cloned());
    let (alpha, log_likelihood, gamma_s) = best(&all).ok_or(EstimationError::LikelihoodFailure)?;
    Ok(ImpulsiveFit {
        alpha,
        gamma_s,
        log_likelihood,
        gaussian_origin_term: g0,
        grid: coarse.iter().map(|r| (r.0, r.1)).collect(),
        refined: refined.iter().map(|r| (r.0, r.1)).collect(),
    })
}
