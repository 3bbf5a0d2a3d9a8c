use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::math::RandomStream;
use crate::model::GsParams;
use crate::sampler::sample_gs_sequence;

use super::{estimate_all, EstimationConfig, EstimationError, EstimationReport};

/// Per-parameter mean squared errors over the successful rounds.
///
/// With `ρ = 1` the reference is white: order 1 and `Σ̃ = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct MseTable {
    pub rounds: usize,
    pub failures: usize,
    /// Failure counts keyed by stage name.
    pub failure_stages: BTreeMap<&'static str, usize>,
    pub p: f64,
    /// Squared first-row error of `Σ̃`, summed over lags `2..=p`.
    pub sigma_tilde: f64,
    pub rho: f64,
    pub gamma_g: f64,
    /// Over the rounds that estimated the impulsive part; `None` if there were none.
    pub alpha: Option<f64>,
    pub gamma_s: Option<f64>,
    /// Rounds where the impulsive stage was skipped as degenerate.
    pub degenerate: usize,
}

/// First-row squared error against the truth, entries beyond `p̂` read as 0.
///
/// With `ρ = 1` the truth is white and compared against `I`.
pub fn sigma_first_row_error(truth: &GsParams, report: &EstimationReport) -> f64 {
    let p = truth.p();
    let white = truth.rho() >= 1.0;
    (1..p)
        .map(|j| {
            let t = if white { 0.0 } else { truth.sigma_tilde().get(0, j) };
            let e = if j < report.sigma_hat.dim() {
                report.sigma_hat.get(0, j)
            } else {
                0.0
            };
            (t - e).powi(2)
        })
        .sum()
}

/// Generate `rounds` sequences from `truth`, round `r` on stream `r` of `seed`,
/// estimate each and average the squared errors.
pub fn mse_benchmark(
    truth: &GsParams,
    rounds: usize,
    samples_per_round: usize,
    cfg: &EstimationConfig,
    seed: u64,
) -> Result<MseTable, EstimationError> {
    if rounds < 2 {
        return Err(EstimationError::Config {
            what: "rounds",
            value: rounds as f64,
        });
    }
    cfg.validate()?;
    let outcomes: Vec<Result<EstimationReport, &'static str>> = (0..rounds)
        .into_par_iter()
        .map(|r| {
            let mut rng = RandomStream::new(seed, r as u64);
            let seq = sample_gs_sequence(truth, samples_per_round, &mut rng).map_err(|_| "generate")?;
            estimate_all(&seq, cfg).map_err(|e| e.stage.as_str())
        })
        .collect();
    let mut failure_stages = BTreeMap::new();
    let mut ok = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => ok.push(r),
            Err(stage) => *failure_stages.entry(stage).or_insert(0) += 1,
        }
    }
    let mean = |v: Vec<f64>| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
    let sq = |f: &dyn Fn(&EstimationReport) -> Option<f64>| mean(ok.iter().filter_map(f).collect());
    let failures = rounds - ok.len();
    // white truth has memory order 1
    let p_true = if truth.rho() >= 1.0 { 1.0 } else { truth.p() as f64 };
    Ok(MseTable {
        rounds,
        failures,
        failure_stages,
        p: sq(&|r| Some((r.p_hat as f64 - p_true).powi(2))).unwrap_or(f64::NAN),
        sigma_tilde: sq(&|r| Some(sigma_first_row_error(truth, r))).unwrap_or(f64::NAN),
        rho: sq(&|r| Some((r.rho_hat - truth.rho()).powi(2))).unwrap_or(f64::NAN),
        gamma_g: sq(&|r| Some((r.gamma_g_hat - truth.gamma_g()).powi(2))).unwrap_or(f64::NAN),
        alpha: sq(&|r| r.alpha_hat.map(|a| (a - truth.alpha()).powi(2))),
        gamma_s: sq(&|r| r.gamma_s_hat.map(|g| (g - truth.gamma_s()).powi(2))),
        degenerate: ok.iter().filter(|r| r.degenerate.is_some()).count(),
    })
}
