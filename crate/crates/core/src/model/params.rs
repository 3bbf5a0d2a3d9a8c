use std::f64::consts::PI;

use crate::error::{GsError, Result};
use crate::math::special::ln_gamma_unchecked;
use crate::math::SpdMatrix;

/// Tolerance on the unit diagonal of the regularized covariance.
const UNIT_DIAGONAL_TOL: f64 = 1e-9;

/// Parameters of the Gaussian–Student noise model.
///
/// The impulsive component is a multivariate Student law with `alpha` degrees of
/// freedom and scale matrix `Σ = 2 γ_s² Σ̃`; the background is isotropic Gaussian
/// with per-sample variance `2 γ_g²`. `rho` is the Gaussian weight.
#[derive(Debug, Clone, PartialEq)]
pub struct GsParams {
    alpha: f64,
    gamma_g: f64,
    gamma_s: f64,
    rho: f64,
    sigma_tilde: SpdMatrix,
    sigma: SpdMatrix,
    ln_k1: f64,
    ln_k2: f64,
}

impl GsParams {
    pub fn new(alpha: f64, gamma_g: f64, gamma_s: f64, rho: f64, sigma_tilde: SpdMatrix) -> Result<Self> {
        positive(alpha, "alpha")?;
        positive(gamma_g, "gamma_g")?;
        positive(gamma_s, "gamma_s")?;
        if !(0.0..=1.0).contains(&rho) {
            return Err(GsError::Domain {
                what: "rho",
                value: rho,
            });
        }
        let p = sigma_tilde.dim();
        for i in 0..p {
            let d = sigma_tilde.get(i, i);
            if (d - 1.0).abs() > UNIT_DIAGONAL_TOL {
                return Err(GsError::Domain {
                    what: "sigma_tilde diagonal",
                    value: d,
                });
            }
        }
        let sigma = sigma_tilde.scaled(2.0 * gamma_s * gamma_s)?;
        let pf = p as f64;
        let ln_k1 = -pf * (2.0 * PI.sqrt() * gamma_g).ln();
        let ln_k2 = ln_gamma_unchecked(0.5 * (alpha + pf))
            - ln_gamma_unchecked(0.5 * alpha)
            - 0.5 * pf * (2.0 * gamma_s * gamma_s * alpha * PI).ln()
            - 0.5 * sigma_tilde.ln_det();
        Ok(Self {
            alpha,
            gamma_g,
            gamma_s,
            rho,
            sigma_tilde,
            sigma,
            ln_k1,
            ln_k2,
        })
    }

    /// The same model with another Gaussian weight.
    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Self::new(self.alpha, self.gamma_g, self.gamma_s, rho, self.sigma_tilde.clone())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma_g(&self) -> f64 {
        self.gamma_g
    }

    pub fn gamma_s(&self) -> f64 {
        self.gamma_s
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Memory order: the dimension of a noise window.
    pub fn p(&self) -> usize {
        self.sigma_tilde.dim()
    }

    pub fn sigma_tilde(&self) -> &SpdMatrix {
        &self.sigma_tilde
    }

    /// `Σ = 2 γ_s² Σ̃`
    pub fn sigma(&self) -> &SpdMatrix {
        &self.sigma
    }

    /// Gaussian normalizer `1 / (2√π γ_g)^p`.
    pub fn k1(&self) -> f64 {
        self.ln_k1.exp()
    }

    /// Student normalizer.
    pub fn k2(&self) -> f64 {
        self.ln_k2.exp()
    }

    pub fn ln_k1(&self) -> f64 {
        self.ln_k1
    }

    pub fn ln_k2(&self) -> f64 {
        self.ln_k2
    }

    /// Parameters of the univariate marginal shared by every component.
    pub fn marginal(&self) -> MarginalParams {
        let p = self.p();
        // R(p,p) of Rᵀ R = Σ⁻¹ with R upper triangular, which equals 1/√Σ(p,p).
        let scale_p = self.sigma.inv_upper()[(p - 1, p - 1)];
        MarginalParams::new(self.alpha, self.gamma_g, self.rho, scale_p).expect("validated parameters")
    }
}

fn positive(x: f64, what: &'static str) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(GsError::Domain { what, value: x })
    }
}

/// The univariate marginal law of one noise sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalParams {
    pub alpha: f64,
    pub gamma_g: f64,
    pub rho: f64,
    /// Inverse scale of the impulsive part, in inverse signal units.
    pub scale_p: f64,
    ln_k_m: f64,
}

impl MarginalParams {
    pub fn new(alpha: f64, gamma_g: f64, rho: f64, scale_p: f64) -> Result<Self> {
        positive(alpha, "alpha")?;
        positive(gamma_g, "gamma_g")?;
        positive(scale_p, "scale_p")?;
        if !(0.0..=1.0).contains(&rho) {
            return Err(GsError::Domain {
                what: "rho",
                value: rho,
            });
        }
        // k_m = α^{α/2} s Γ((α+1)/2) / (2 Γ(3/2) Γ(α/2)), with 2Γ(3/2) = √π
        let ln_k_m = 0.5 * alpha * alpha.ln() + scale_p.ln() + ln_gamma_unchecked(0.5 * (alpha + 1.0))
            - 0.5 * PI.ln()
            - ln_gamma_unchecked(0.5 * alpha);
        Ok(Self {
            alpha,
            gamma_g,
            rho,
            scale_p,
            ln_k_m,
        })
    }

    pub fn k_m(&self) -> f64 {
        self.ln_k_m.exp()
    }

    pub fn ln_k_m(&self) -> f64 {
        self.ln_k_m
    }
}

/// Covariance matrices and settings used throughout the simulation study.
pub mod presets {
    use super::*;

    /// `[[1, 0.7], [0.7, 1]]`
    pub fn sigma_p2() -> SpdMatrix {
        SpdMatrix::toeplitz(&[1.0, 0.7]).expect("SPD")
    }

    /// Toeplitz ramp with first row `[1, 0.8, 0.6, 0.4, 0.2]`.
    pub fn sigma_p5() -> SpdMatrix {
        SpdMatrix::toeplitz(&[1.0, 0.8, 0.6, 0.4, 0.2]).expect("SPD")
    }

    /// `γ_g = γ_s = 2` with the given tail, weight and covariance.
    pub fn study(alpha: f64, rho: f64, sigma_tilde: SpdMatrix) -> GsParams {
        GsParams::new(alpha, 2.0, 2.0, rho, sigma_tilde).expect("valid study parameters")
    }
}
