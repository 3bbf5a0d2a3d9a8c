use crate::math::sum::{par_sum, par_sum_vec};
use crate::math::{SpdMatrix, SquareMatrix};
use crate::sampler::NoiseSequence;

use super::{EstimationConfig, EstimationError};

/// `|Cov(N(i), N(i+k))| / |Cov(N(i), N(i))|` for `k = 1..=max_lag`.
///
/// Lagged covariances use the divisor `L_N − k − 1` over the `L_N − k` products.
pub fn lag_ratios(samples: &[f64], max_lag: usize) -> Vec<f64> {
    let n = samples.len();
    let mean = par_sum(n, |i| samples[i]) / n as f64;
    let cov = |k: usize| par_sum(n - k, |i| (samples[i] - mean) * (samples[i + k] - mean)) / (n - k - 1) as f64;
    let c0 = cov(0).abs();
    (1..=max_lag).map(|k| cov(k).abs() / c0).collect()
}

/// Memory order: the smallest lag whose normalized covariance drops below `T`.
///
/// White data has its lag-1 ratio below `T` already, giving `p̂ = 1`.
pub fn estimate_p(seq: &NoiseSequence, cfg: &EstimationConfig) -> Result<usize, EstimationError> {
    let (p, _) = estimate_p_with_profile(seq, cfg)?;
    Ok(p)
}

pub(crate) fn estimate_p_with_profile(
    seq: &NoiseSequence,
    cfg: &EstimationConfig,
) -> Result<(usize, Vec<f64>), EstimationError> {
    let needed = 2 * cfg.max_p;
    if seq.len() < needed.max(3) {
        return Err(EstimationError::TooShort {
            needed: needed.max(3),
            got: seq.len(),
        });
    }
    let ratios = lag_ratios(seq.samples(), cfg.max_p);
    if ratios.iter().any(|r| !r.is_finite()) {
        return Err(EstimationError::Degenerate("constant sequence"));
    }
    match ratios.iter().position(|&r| r < cfg.cov_threshold) {
        Some(i) => Ok((i + 1, ratios)),
        None => Err(EstimationError::OrderOverflow { ratios }),
    }
}

/// Regularized covariance of the stride-1 windows of length `p`.
///
/// The sample covariance (divisor `L − 1`) is normalized to unit diagonal, which
/// makes its `(1,1)` entry exactly 1.
pub fn estimate_sigma(seq: &NoiseSequence, p: usize) -> Result<SpdMatrix, EstimationError> {
    let (raw, _) = sample_window_covariance(seq, p)?;
    normalize_covariance(raw, 0.0)
}

pub(crate) fn sample_window_covariance(
    seq: &NoiseSequence,
    p: usize,
) -> Result<(SquareMatrix, usize), EstimationError> {
    if p == 0 {
        return Err(EstimationError::Degenerate("memory order zero"));
    }
    let l = seq.n_windows(p);
    if l < 2 {
        return Err(EstimationError::TooShort {
            needed: p + 1,
            got: seq.len(),
        });
    }
    let x = seq.samples();
    let mean: Vec<f64> = par_sum_vec(l, p, |i, acc| {
        for (a, v) in acc.iter_mut().zip(&x[i..i + p]) {
            *a += v;
        }
    })
    .into_iter()
    .map(|s| s / l as f64)
    .collect();
    let upper = par_sum_vec(l, p * (p + 1) / 2, |i, acc| {
        let w = &x[i..i + p];
        let mut k = 0;
        for a in 0..p {
            let da = w[a] - mean[a];
            for b in a..p {
                acc[k] += da * (w[b] - mean[b]);
                k += 1;
            }
        }
    });
    let mut m = SquareMatrix::zeros(p);
    let mut k = 0;
    for a in 0..p {
        for b in a..p {
            let v = upper[k] / (l - 1) as f64;
            m[(a, b)] = v;
            m[(b, a)] = v;
            k += 1;
        }
    }
    Ok((m, l))
}

/// Scale to unit diagonal, optionally adding `jitter` to the diagonal first.
pub(crate) fn normalize_covariance(mut m: SquareMatrix, jitter: f64) -> Result<SpdMatrix, EstimationError> {
    let p = m.dim();
    for i in 0..p {
        m[(i, i)] += jitter * m[(i, i)].abs().max(f64::MIN_POSITIVE);
    }
    let d: Vec<f64> = (0..p).map(|i| m[(i, i)]).collect();
    if d.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(EstimationError::Degenerate("zero-variance window coordinate"));
    }
    let mut r = SquareMatrix::zeros(p);
    for i in 0..p {
        for j in 0..p {
            r[(i, j)] = if i == j { 1.0 } else { m[(i, j)] / (d[i] * d[j]).sqrt() };
        }
    }
    SpdMatrix::from_matrix(r).map_err(|e| match e {
        crate::GsError::NotPositiveDefinite { min_eigenvalue } => EstimationError::Conditioning { min_eigenvalue },
        other => EstimationError::Model(other),
    })
}
