//! The Gaussian–Student distribution.

pub mod cf;
pub mod density;
pub mod moments;
pub mod params;

pub use cf::{cf, student_cf};
pub use density::{
    conditional_pdf, log_pdf, marginal_pdf, pdf, pdf_at_origin, Branch, ConditionalLaw, ConditionalMixture,
};
pub use moments::abs_moment;
pub use params::{presets, GsParams, MarginalParams};

use serde::{Deserialize, Serialize};

use crate::error::{GsError, Result};

/// Named special cases of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialCase {
    /// Pure impulsive noise with memory.
    BurstyIn,
    Wgn,
    /// Pure impulsive noise without memory.
    WhiteIn,
    /// Gaussian plus impulsive, without memory.
    WhiteMixed,
    General,
}

impl SpecialCase {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::BurstyIn => "bursty-in",
            Self::Wgn => "wgn",
            Self::WhiteIn => "white-in",
            Self::WhiteMixed => "white-mixed",
            Self::General => "general",
        }
    }
}

/// Classify a parameter tuple.
///
/// `ρ = 1` is WGN. Without memory, samples are independent: `ρ = 0` is white
/// impulsive noise, anything else white mixed noise. With memory and `ρ = 0` the
/// noise is bursty impulsive noise when `Σ̃ ≠ I`.
pub fn degrade(params: &GsParams) -> SpecialCase {
    let rho = params.rho();
    let white = params.p() == 1 || params.sigma_tilde().is_identity();
    if rho == 1.0 {
        SpecialCase::Wgn
    } else if params.p() == 1 {
        if rho == 0.0 {
            SpecialCase::WhiteIn
        } else {
            SpecialCase::WhiteMixed
        }
    } else if rho == 0.0 && !white {
        SpecialCase::BurstyIn
    } else {
        SpecialCase::General
    }
}

/// Generalized signal-to-noise ratio in dB: `10 log₁₀(P_s / 2(γ_g² + γ_s^α))`.
pub fn gsnr_db(params: &GsParams, signal_power: f64) -> Result<f64> {
    if !(signal_power > 0.0) || !signal_power.is_finite() {
        return Err(GsError::Domain {
            what: "signal_power",
            value: signal_power,
        });
    }
    let g = params.gamma_g();
    let noise = 2.0 * (g * g + params.gamma_s().powf(params.alpha()));
    Ok(10.0 * (signal_power / noise).log10())
}
