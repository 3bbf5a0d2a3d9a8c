use serde::{Deserialize, Serialize};

use super::EstimationError;

/// Tuning of the estimation pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimationConfig {
    /// Normalized-covariance threshold `T` for the memory order.
    pub cov_threshold: f64,
    pub max_p: usize,
    /// Search limits for `γ_g`.
    pub gamma_g_bracket: (f64, f64),
    /// Relative bisection tolerance.
    pub bisection_tol: f64,
    pub alpha_range: (f64, f64),
    pub alpha_step: f64,
    /// Constant `c` of the kernel bandwidth `h = c L^{−1/(p+4)} s`.
    pub bandwidth_factor: f64,
    /// Overrides the bandwidth rule when set.
    pub bandwidth: Option<f64>,
    /// Probe vectors are scaled so that `γ² ‖t₂‖² = probe_level`.
    pub probe_level: f64,
    /// Number of probe passes: every pass after the first rescales the probes
    /// with the previous `γ̂_g`.
    pub probe_passes: usize,
    /// A white sequence counts as Gaussian if its ECF matches `exp(−γ²t²)` within
    /// this many multiples of `1/√L`.
    pub white_check_sigmas: f64,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        Self {
            cov_threshold: 0.1,
            max_p: 32,
            gamma_g_bracket: (1e-6, 1e6),
            bisection_tol: 1e-10,
            alpha_range: (0.05, 3.0),
            alpha_step: 0.01,
            bandwidth_factor: 0.3,
            bandwidth: None,
            probe_level: 1.0,
            probe_passes: 1,
            white_check_sigmas: 5.0,
        }
    }
}

impl EstimationConfig {
    pub fn with_threshold(mut self, t: f64) -> Self {
        self.cov_threshold = t;
        self
    }

    pub fn validate(&self) -> Result<(), EstimationError> {
        let bad = |what: &'static str, value: f64| Err(EstimationError::Config { what, value });
        if !(self.cov_threshold > 0.0 && self.cov_threshold < 1.0) {
            return bad("cov_threshold", self.cov_threshold);
        }
        if self.max_p == 0 {
            return bad("max_p", 0.0);
        }
        let (lo, hi) = self.gamma_g_bracket;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return bad("gamma_g_bracket", lo);
        }
        if !(self.bisection_tol > 0.0) {
            return bad("bisection_tol", self.bisection_tol);
        }
        let (a0, a1) = self.alpha_range;
        if !(a0 > 0.0 && a1 >= a0 && a1.is_finite()) {
            return bad("alpha_range", a0);
        }
        if !(self.alpha_step > 0.0) {
            return bad("alpha_step", self.alpha_step);
        }
        if !(self.bandwidth_factor > 0.0) {
            return bad("bandwidth_factor", self.bandwidth_factor);
        }
        if let Some(h) = self.bandwidth {
            if !(h > 0.0 && h.is_finite()) {
                return bad("bandwidth", h);
            }
        }
        if !(self.probe_level > 0.0 && self.probe_level.is_finite()) {
            return bad("probe_level", self.probe_level);
        }
        if self.probe_passes == 0 {
            return bad("probe_passes", 0.0);
        }
        if !(self.white_check_sigmas > 0.0) {
            return bad("white_check_sigmas", self.white_check_sigmas);
        }
        Ok(())
    }

    /// The α grid: `alpha_range` in steps of `alpha_step`, both ends included.
    pub fn alpha_grid(&self) -> Vec<f64> {
        let (a0, a1) = self.alpha_range;
        let n = ((a1 - a0) / self.alpha_step + 1e-9).floor() as usize;
        (0..=n).map(|i| a0 + i as f64 * self.alpha_step).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let cfg = EstimationConfig::default();
        cfg.validate().unwrap();
        let g = cfg.alpha_grid();
        assert_eq!(g.len(), 296);
        assert!((g[0] - 0.05).abs() < 1e-15);
        assert!((g[295] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_threshold() {
        assert!(EstimationConfig::default().with_threshold(1.0).validate().is_err());
        assert!(EstimationConfig::default().with_threshold(0.0).validate().is_err());
        let cfg = EstimationConfig {
            gamma_g_bracket: (2.0, 1.0),
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
