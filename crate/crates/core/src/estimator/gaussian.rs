use super::{EstimationConfig, EstimationError};

/// The ratio function `g(γ) = (e^{−γ²n₃} − e^{−γ²n₂}) / (e^{−γ²n₂} − e^{−γ²n₁})`
/// of the squared probe norms `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioFunction {
    a: f64,
    b: f64,
}

impl RatioFunction {
    pub fn new(norms2: [f64; 3]) -> Self {
        Self {
            a: norms2[1] - norms2[2],
            b: norms2[1] - norms2[0],
        }
    }

    pub fn eval(&self, gamma: f64) -> f64 {
        let x = gamma * gamma;
        (self.a * x).exp_m1() / -(self.b * x).exp_m1()
    }

    /// Limits of `g` at `γ → 0⁺` and `γ → ∞`, when finite.
    pub fn range(&self) -> (f64, f64) {
        let at_zero = -self.a / self.b;
        let at_inf = match (self.a > 0.0, self.b > 0.0) {
            (false, false) => -1.0,
            (true, false) => f64::INFINITY,
            (false, true) => 0.0,
            (true, true) if self.a > self.b => f64::NEG_INFINITY,
            (true, true) if self.a < self.b => 0.0,
            (true, true) => -1.0,
        };
        (at_zero, at_inf)
    }

    /// Whether `g` sampled at `n` log-spaced points of `[lo, hi]` is strictly monotone.
    pub fn strictly_monotone_on(&self, lo: f64, hi: f64, n: usize) -> bool {
        let v: Vec<f64> = (0..n)
            .map(|i| self.eval(lo * (hi / lo).powf(i as f64 / (n - 1) as f64)))
            .collect();
        v.windows(2).all(|w| w[1] > w[0]) || v.windows(2).all(|w| w[1] < w[0])
    }
}

/// Result of the `γ_g` search.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSolution {
    pub gamma_g: f64,
    /// Empirical ratio `[Φ(t₃) − Φ(t₂)] / [Φ(t₂) − Φ(t₁)]`.
    pub ratio: f64,
    /// `g(γ̂) − ratio`
    pub residual: f64,
    pub iterations: usize,
    /// Final bracket.
    pub bracket: (f64, f64),
    /// `g` strictly monotone on 100 log-spaced points of the bracket.
    pub monotone: bool,
}

/// Solve `g(γ) = ratio` by bisection.
///
/// The bracket starts at `start / 2 .. 2 start` and grows geometrically, within
/// `cfg.gamma_g_bracket`, until it straddles the root.
pub fn solve_gamma_g(
    phi: [f64; 3],
    norms2: [f64; 3],
    start: f64,
    cfg: &EstimationConfig,
) -> Result<GammaSolution, EstimationError> {
    let den = phi[1] - phi[0];
    let ratio = (phi[2] - phi[1]) / den;
    if !ratio.is_finite() {
        return Err(EstimationError::InfeasibleRatio { ratio });
    }
    let g = RatioFunction::new(norms2);
    let f = |x: f64| g.eval(x) - ratio;
    let (lim_lo, lim_hi) = cfg.gamma_g_bracket;
    let start = start.clamp(lim_lo, lim_hi);
    let mut lo = (start / 2.0).max(lim_lo);
    let mut hi = (start * 2.0).min(lim_hi);
    let mut iterations = 0;
    while f(lo).signum() == f(hi).signum() {
        iterations += 1;
        if lo <= lim_lo && hi >= lim_hi {
            return Err(EstimationError::InfeasibleRatio { ratio });
        }
        lo = (lo / 2.0).max(lim_lo);
        hi = (hi * 2.0).min(lim_hi);
    }
    let bracket = (lo, hi);
    let f_lo = f(lo);
    while (hi - lo) > cfg.bisection_tol * hi && iterations < 10_000 {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let gamma_g = 0.5 * (lo + hi);
    Ok(GammaSolution {
        gamma_g,
        ratio,
        residual: f(gamma_g),
        iterations,
        bracket,
        monotone: g.strictly_monotone_on(bracket.0, bracket.1, 100),
    })
}

/// Gaussian weight from the two outer probes; returns `(clamped, raw)`.
pub fn estimate_rho(phi2: f64, phi3: f64, n2: f64, n3: f64, gamma_g: f64) -> Result<(f64, f64), EstimationError> {
    if !(gamma_g > 0.0) {
        return Err(EstimationError::Config {
            what: "gamma_g",
            value: gamma_g,
        });
    }
    let x = gamma_g * gamma_g;
    let den = (-x * n3).exp() - (-x * n2).exp();
    if den.abs() < 1e-14 {
        return Err(EstimationError::IllConditionedProbe { denominator: den });
    }
    let raw = (phi3 - phi2) / den;
    Ok((raw.clamp(0.0, 1.0), raw))
}
