//! Parameter estimation from a raw noise sequence.
//!
//! Stages run in a fixed order: memory order, regularized covariance, probe
//! vectors, ECF at the probes, `γ_g`, `ρ`, the density at the origin, and finally
//! `α` with `γ_s`.

mod bench;
mod config;
mod ecf;
mod gaussian;
mod impulsive;
mod order;
mod probes;

use std::fmt;

use thiserror::Error;

use crate::math::SpdMatrix;
use crate::model::{degrade, GsParams, SpecialCase};
use crate::sampler::NoiseSequence;
use crate::GsError;

pub use bench::{mse_benchmark, sigma_first_row_error, MseTable};
pub use config::EstimationConfig;
pub use ecf::{ecf, ecf_parts, ecf_windows};
pub use gaussian::{estimate_rho, solve_gamma_g, GammaSolution, RatioFunction};
pub use impulsive::{bandwidth, estimate_alpha_gamma_s, gke_origin, robust_scale, ImpulsiveFit, WindowStats};
pub use order::{estimate_p, estimate_sigma, lag_ratios};
pub use probes::{build_probe_vectors, ProbeSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimationError {
    #[error("invalid configuration: {what} = {value}")]
    Config { what: &'static str, value: f64 },

    #[error("sequence too short: need {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("no lag up to max_p has normalized covariance below the threshold (ratios {ratios:?})")]
    OrderOverflow { ratios: Vec<f64> },

    #[error("covariance estimate is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    Conditioning { min_eigenvalue: f64 },

    #[error("eigenvalue spectrum too degenerate for probe vectors")]
    DegenerateSpectrum,

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("ECF ratio {ratio} outside the range of g")]
    InfeasibleRatio { ratio: f64 },

    #[error("ill-conditioned probes (denominator {denominator:e})")]
    IllConditionedProbe { denominator: f64 },

    #[error("density at origin {estimate:e} does not exceed the Gaussian term {gaussian_term:e}")]
    OriginDeficit { estimate: f64, gaussian_term: f64 },

    #[error("no finite log-likelihood on the alpha grid")]
    LikelihoodFailure,

    #[error("white sequence with a non-Gaussian law: mixed white noise cannot be separated")]
    WhiteMixedUnsupported,

    #[error(transparent)]
    Model(#[from] GsError),
}

/// Pipeline stage, carried by every estimation failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Config,
    Order,
    Covariance,
    Probes,
    Ecf,
    GammaG,
    Rho,
    OriginDensity,
    AlphaGammaS,
    WhiteCheck,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::Order => "order",
            Stage::Covariance => "covariance",
            Stage::Probes => "probes",
            Stage::Ecf => "ecf",
            Stage::GammaG => "gamma-g",
            Stage::Rho => "rho",
            Stage::OriginDensity => "origin-density",
            Stage::AlphaGammaS => "alpha-gamma-s",
            Stage::WhiteCheck => "white-check",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{stage} stage: {source}")]
pub struct StageError {
    pub stage: Stage,
    #[source]
    pub source: EstimationError,
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, StageError>;
}

impl<T, E: Into<EstimationError>> AtStage<T> for Result<T, E> {
    fn at(self, stage: Stage) -> Result<T, StageError> {
        self.map_err(|e| StageError {
            stage,
            source: e.into(),
        })
    }
}

/// Why the impulsive stage was skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degenerate {
    /// White sequence that passed the Gaussianity check.
    WhiteGaussian,
    /// `ρ̂` clamped to 1.
    RhoOne,
    /// The kernel density at the origin did not exceed the Gaussian term.
    OriginDeficit,
}

impl Degenerate {
    pub fn as_str(self) -> &'static str {
        match self {
            Degenerate::WhiteGaussian => "white-gaussian",
            Degenerate::RhoOne => "rho-one",
            Degenerate::OriginDeficit => "origin-deficit",
        }
    }
}

/// ECF checks of a white sequence against `exp(−γ̂² t²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WhiteCheck {
    pub t0: f64,
    /// `(t, ecf, Gaussian value)` at `t₀/2` and `2t₀`.
    pub points: Vec<(f64, f64, f64)>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub lag_ratios: Vec<f64>,
    /// Probe vectors actually used, after scaling.
    pub probes: Option<ProbeSet>,
    pub probe_scale: f64,
    /// Real ECF parts at the probes.
    pub ecf: Vec<f64>,
    /// Magnitudes of the discarded sine parts.
    pub ecf_sin: Vec<f64>,
    pub gamma: Option<GammaSolution>,
    pub rho_raw: Option<f64>,
    pub rho_clamped: bool,
    pub bandwidth: Option<f64>,
    pub origin_density: Option<f64>,
    /// `ρ̂ k₁(γ̂_g)`
    pub gaussian_origin_term: Option<f64>,
    /// Coarse grid `(α, log-likelihood)`.
    pub ml_grid: Vec<(f64, f64)>,
    /// Refinement grid around the coarse maximum.
    pub ml_refined: Vec<(f64, f64)>,
    pub white_check: Option<WhiteCheck>,
}

/// Fitted parameters.
///
/// `alpha_hat` and `gamma_s_hat` are `None` when `degenerate` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationReport {
    pub p_hat: usize,
    pub sigma_hat: SpdMatrix,
    pub rho_hat: f64,
    pub gamma_g_hat: f64,
    pub alpha_hat: Option<f64>,
    pub gamma_s_hat: Option<f64>,
    pub case: SpecialCase,
    pub degenerate: Option<Degenerate>,
    pub diagnostics: Diagnostics,
}

impl EstimationReport {
    /// The fitted model, when the impulsive part was estimated.
    pub fn params(&self) -> Option<GsParams> {
        GsParams::new(
            self.alpha_hat?,
            self.gamma_g_hat,
            self.gamma_s_hat?,
            self.rho_hat,
            self.sigma_hat.clone(),
        )
        .ok()
    }
}

/// Run the full pipeline on `seq`.
pub fn estimate_all(seq: &NoiseSequence, cfg: &EstimationConfig) -> Result<EstimationReport, StageError> {
    cfg.validate().at(Stage::Config)?;
    let mut diag = Diagnostics::default();
    let (p, ratios) = order::estimate_p_with_profile(seq, cfg).at(Stage::Order)?;
    diag.lag_ratios = ratios;
    let sigma_pilot = robust_scale(seq.samples());
    if !(sigma_pilot > 0.0) {
        return Err(EstimationError::Degenerate("zero robust scale")).at(Stage::Order);
    }
    if p == 1 {
        return white_report(seq, SpdMatrix::identity(1), 1, sigma_pilot, cfg, diag);
    }
    let sigma_hat = covariance(seq, p).at(Stage::Covariance)?;
    fit_with_covariance(seq, sigma_hat, sigma_pilot, cfg, diag)
}

/// The stages after the covariance, with `Σ̂_R` supplied by the caller.
///
/// The memory order is `sigma_hat.dim()`. Useful to isolate the CF and
/// likelihood stages from covariance error.
pub fn estimate_with_covariance(
    seq: &NoiseSequence,
    sigma_hat: SpdMatrix,
    cfg: &EstimationConfig,
) -> Result<EstimationReport, StageError> {
    cfg.validate().at(Stage::Config)?;
    let p = sigma_hat.dim();
    if seq.n_windows(p) < 2 {
        return Err(EstimationError::TooShort {
            needed: p + 1,
            got: seq.len(),
        })
        .at(Stage::Order);
    }
    let sigma_pilot = robust_scale(seq.samples());
    if !(sigma_pilot > 0.0) {
        return Err(EstimationError::Degenerate("zero robust scale")).at(Stage::Order);
    }
    if p == 1 {
        return white_report(seq, sigma_hat, 1, sigma_pilot, cfg, Diagnostics::default());
    }
    fit_with_covariance(seq, sigma_hat, sigma_pilot, cfg, Diagnostics::default())
}

fn fit_with_covariance(
    seq: &NoiseSequence,
    sigma_hat: SpdMatrix,
    sigma_pilot: f64,
    cfg: &EstimationConfig,
    mut diag: Diagnostics,
) -> Result<EstimationReport, StageError> {
    let p = sigma_hat.dim();
    let base = match build_probe_vectors(&sigma_hat) {
        Ok(b) => b,
        Err(EstimationError::DegenerateSpectrum) => {
            return white_report(seq, sigma_hat, p, sigma_pilot, cfg, diag);
        }
        Err(e) => return Err(e).at(Stage::Probes),
    };
    let norm2 = base.norms2()[1];
    let mut gamma_ref = sigma_pilot / std::f64::consts::SQRT_2;
    let mut solution = None;
    for _ in 0..cfg.probe_passes {
        let c = cfg.probe_level.sqrt() / (gamma_ref * norm2.sqrt());
        let probes = base.scaled(c);
        let parts: Vec<(f64, f64)> = probes.t.iter().map(|t| ecf_parts(seq, t)).collect();
        let phi = [parts[0].0, parts[1].0, parts[2].0];
        diag.probe_scale = c;
        diag.ecf = phi.to_vec();
        diag.ecf_sin = parts.iter().map(|x| x.1.abs()).collect();
        let n = probes.norms2();
        diag.probes = Some(probes);
        let sol = solve_gamma_g(phi, n, gamma_ref, cfg).at(Stage::GammaG)?;
        gamma_ref = sol.gamma_g;
        solution = Some((sol, phi, n));
    }
    let (sol, phi, n) = solution.expect("at least one probe pass");
    let gamma_g = sol.gamma_g;
    diag.gamma = Some(sol);
    let (rho, raw) = estimate_rho(phi[1], phi[2], n[1], n[2], gamma_g).at(Stage::Rho)?;
    diag.rho_raw = Some(raw);
    diag.rho_clamped = rho != raw;
    let wgn = |diag: Diagnostics, reason| EstimationReport {
        p_hat: p,
        sigma_hat: sigma_hat.clone(),
        rho_hat: rho,
        gamma_g_hat: gamma_g,
        alpha_hat: None,
        gamma_s_hat: None,
        case: SpecialCase::Wgn,
        degenerate: Some(reason),
        diagnostics: diag,
    };
    if rho >= 1.0 {
        return Ok(wgn(diag, Degenerate::RhoOne));
    }
    let stats = WindowStats::new(seq, &sigma_hat);
    let h = bandwidth(stats.len(), p, sigma_pilot, cfg);
    let f0 = stats.gke_origin(p, h);
    diag.bandwidth = Some(h);
    diag.origin_density = Some(f0);
    let fit = match estimate_alpha_gamma_s(&stats, &sigma_hat, rho, gamma_g, f0, cfg) {
        Ok(fit) => fit,
        Err(EstimationError::OriginDeficit { gaussian_term, .. }) => {
            diag.gaussian_origin_term = Some(gaussian_term);
            return Ok(wgn(diag, Degenerate::OriginDeficit));
        }
        Err(e) => return Err(e).at(Stage::AlphaGammaS),
    };
    diag.gaussian_origin_term = Some(fit.gaussian_origin_term);
    diag.ml_grid = fit.grid.clone();
    diag.ml_refined = fit.refined.clone();
    let fitted = GsParams::new(fit.alpha, gamma_g, fit.gamma_s, rho, sigma_hat.clone()).at(Stage::AlphaGammaS)?;
    Ok(EstimationReport {
        p_hat: p,
        sigma_hat,
        rho_hat: rho,
        gamma_g_hat: gamma_g,
        alpha_hat: Some(fit.alpha),
        gamma_s_hat: Some(fit.gamma_s),
        case: degrade(&fitted),
        degenerate: None,
        diagnostics: diag,
    })
}

fn covariance(seq: &NoiseSequence, p: usize) -> Result<SpdMatrix, EstimationError> {
    let (raw, _) = order::sample_window_covariance(seq, p)?;
    match order::normalize_covariance(raw.clone(), 0.0) {
        Err(EstimationError::Conditioning { .. }) => order::normalize_covariance(raw, 1e-9),
        other => other,
    }
}

/// White data, or data whose covariance gives no usable probes: accept it as
/// WGN when its ECF is Gaussian.
fn white_report(
    seq: &NoiseSequence,
    sigma_hat: SpdMatrix,
    p: usize,
    sigma_pilot: f64,
    cfg: &EstimationConfig,
    mut diag: Diagnostics,
) -> Result<EstimationReport, StageError> {
    let t0 = 1.0 / sigma_pilot;
    let phi0 = ecf(seq, &[t0]);
    if !(phi0 > 0.0 && phi0 < 1.0) {
        return Err(EstimationError::Degenerate("white ECF outside (0, 1)")).at(Stage::WhiteCheck);
    }
    let gamma = (-phi0.ln()).sqrt() / t0;
    let l = seq.n_windows(1) as f64;
    let tolerance = cfg.white_check_sigmas / l.sqrt();
    let points: Vec<(f64, f64, f64)> = [0.5 * t0, 2.0 * t0]
        .into_iter()
        .map(|t| (t, ecf(seq, &[t]), (-(gamma * t).powi(2)).exp()))
        .collect();
    let passed = points.iter().all(|&(_, e, g)| (e - g).abs() <= tolerance);
    diag.white_check = Some(WhiteCheck {
        t0,
        points,
        tolerance,
        passed,
    });
    if !passed {
        return Err(EstimationError::WhiteMixedUnsupported).at(Stage::WhiteCheck);
    }
    Ok(EstimationReport {
        p_hat: p,
        sigma_hat,
        rho_hat: 1.0,
        gamma_g_hat: gamma,
        alpha_hat: None,
        gamma_s_hat: None,
        case: SpecialCase::Wgn,
        degenerate: Some(Degenerate::WhiteGaussian),
        diagnostics: diag,
    })
}
