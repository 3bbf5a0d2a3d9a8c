use std::path::Path;

use serde::Deserialize;

use crate::estimator::{EstimationConfig, MseTable};

use super::{fmt_f64, IoError};

/// MSE benchmark grid: every `(α, ρ, samples)` combination with the fixed
/// remaining parameters.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub alphas: Vec<f64>,
    pub rhos: Vec<f64>,
    #[serde(default = "two")]
    pub gamma_g: f64,
    #[serde(default = "two")]
    pub gamma_s: f64,
    /// Row-major `σ̃`; `p` is inferred from its length.
    pub sigma_tilde: Vec<f64>,
    pub samples_per_round: Vec<usize>,
    #[serde(default = "fifty")]
    pub rounds: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub estimation: EstimationConfig,
}

fn two() -> f64 {
    2.0
}

fn fifty() -> usize {
    50
}

impl BenchConfig {
    pub fn p(&self) -> Result<usize, IoError> {
        let n = self.sigma_tilde.len();
        let p = (n as f64).sqrt().round() as usize;
        if p == 0 || p * p != n {
            return Err(IoError::Parse(format!(
                "field `sigma_tilde`: {n} entries is not a square"
            )));
        }
        Ok(p)
    }
}

pub fn read_bench_config(path: &Path) -> Result<BenchConfig, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    let cfg: BenchConfig = toml::from_str(&text).map_err(|e| IoError::Parse(format!("{}: {e}", path.display())))?;
    cfg.p()?;
    if cfg.alphas.is_empty() || cfg.rhos.is_empty() || cfg.samples_per_round.is_empty() {
        return Err(IoError::Parse(format!("{}: empty grid", path.display())));
    }
    Ok(cfg)
}

/// One CSV row per `(α, ρ, samples)` with a header.
pub fn bench_csv(rows: &[(f64, f64, usize, MseTable)]) -> String {
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let mut out = String::from(
        "alpha,rho,samples_per_round,rounds,failures,degenerate,mse_p,mse_sigma_tilde,mse_rho,mse_gamma_g,mse_alpha,mse_gamma_s,failure_stages\n",
    );
    for (a, r, n, t) in rows {
        let stages: Vec<String> = t.failure_stages.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(*a),
            fmt_f64(*r),
            n,
            t.rounds,
            t.failures,
            t.degenerate,
            fmt_f64(t.p),
            fmt_f64(t.sigma_tilde),
            fmt_f64(t.rho),
            fmt_f64(t.gamma_g),
            opt(t.alpha),
            opt(t.gamma_s),
            stages.join(";")
        ));
    }
    out
}
