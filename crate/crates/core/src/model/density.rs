use std::f64::consts::PI;

use crate::error::{check_finite, GsError, Result};
use crate::math::special::ln_gamma_unchecked;
use crate::math::SpdMatrix;

use super::params::{GsParams, MarginalParams};

fn check_vector(n: &[f64], p: usize) -> Result<()> {
    if n.len() != p {
        return Err(GsError::Dimension {
            expected: p,
            got: n.len(),
        });
    }
    for &x in n {
        check_finite(x, "noise vector")?;
    }
    Ok(())
}

/// `ln(e^a + e^b)` that tolerates `-∞` in either argument.
pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn ln_weight(w: f64) -> f64 {
    if w > 0.0 {
        w.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Log of the Gaussian branch including its weight.
fn ln_gauss_term(params: &GsParams, norm2: f64) -> f64 {
    let g = params.gamma_g();
    ln_weight(params.rho()) + params.ln_k1() - norm2 / (4.0 * g * g)
}

/// Log of the student branch including its weight; `q = nᵀ Σ⁻¹ n`.
fn ln_student_term(params: &GsParams, q: f64) -> f64 {
    let a = params.alpha();
    let p = params.p() as f64;
    ln_weight(1.0 - params.rho()) + params.ln_k2() - 0.5 * (a + p) * (q / a).ln_1p()
}

/// Joint density of one noise window.
pub fn pdf(params: &GsParams, n: &[f64]) -> Result<f64> {
    check_vector(n, params.p())?;
    let norm2: f64 = n.iter().map(|x| x * x).sum();
    let q = params.sigma().inv_quad_form(n);
    let g = params.gamma_g();
    let a = params.alpha();
    let p = params.p() as f64;
    let gauss = params.rho() * params.k1() * (-norm2 / (4.0 * g * g)).exp();
    let student = (1.0 - params.rho()) * params.k2() * (1.0 + q / a).powf(-0.5 * (a + p));
    Ok(gauss + student)
}

/// Natural log of [`pdf`], finite for every finite `n`.
pub fn log_pdf(params: &GsParams, n: &[f64]) -> Result<f64> {
    check_vector(n, params.p())?;
    let norm2: f64 = n.iter().map(|x| x * x).sum();
    let q = params.sigma().inv_quad_form(n);
    Ok(log_add(ln_gauss_term(params, norm2), ln_student_term(params, q)))
}

/// `pdf(params, 0)`.
pub fn pdf_at_origin(params: &GsParams) -> f64 {
    params.rho() * params.k1() + (1.0 - params.rho()) * params.k2()
}

/// Univariate marginal density.
pub fn marginal_pdf(m: &MarginalParams, n: f64) -> f64 {
    let g = m.gamma_g;
    let a = m.alpha;
    let gauss = m.rho / (2.0 * PI.sqrt() * g) * (-n * n / (4.0 * g * g)).exp();
    let z = n * m.scale_p;
    let student = (1.0 - m.rho) * (m.ln_k_m() - 0.5 * (a + 1.0) * (a + z * z).ln()).exp();
    gauss + student
}

/// Which mixture component produced a draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Gaussian,
    Student,
}

/// Law of the last sample of a window given the first `p − 1`.
///
/// It is again a two-component mixture: the Gaussian background is white so its
/// conditional is `N(0, 2γ_g²)`, and the student conditional is a univariate
/// student law with `α + p − 1` degrees of freedom.
#[derive(Debug, Clone)]
pub struct ConditionalLaw {
    alpha: f64,
    gamma_g: f64,
    rho: f64,
    p: usize,
    sigma11: SpdMatrix,
    beta: Vec<f64>,
    schur: f64,
    ln_gauss_norm: f64,
    ln_student_norm: f64,
}

/// [`ConditionalLaw`] evaluated at one history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalMixture {
    /// Posterior probability of the Gaussian branch.
    pub gauss_weight: f64,
    pub gauss_sd: f64,
    pub student_loc: f64,
    pub student_scale: f64,
    pub student_dof: f64,
}

impl ConditionalLaw {
    pub fn new(params: &GsParams) -> Result<Self> {
        let p = params.p();
        if p < 2 {
            return Err(GsError::Unsupported("conditioning needs memory order p >= 2"));
        }
        let sigma = params.sigma();
        let sigma11 = sigma.leading(p - 1)?;
        let s12: Vec<f64> = (0..p - 1).map(|i| sigma.get(i, p - 1)).collect();
        let beta = sigma11.inverse().mul_vec(&s12);
        let schur = sigma.get(p - 1, p - 1) - s12.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>();
        if !(schur > 0.0) {
            return Err(GsError::NotPositiveDefinite { min_eigenvalue: schur });
        }
        let a = params.alpha();
        let k = (p - 1) as f64;
        let g = params.gamma_g();
        let ln_gauss_norm = -k * (2.0 * PI.sqrt() * g).ln();
        let ln_student_norm = ln_gamma_unchecked(0.5 * (a + k))
            - ln_gamma_unchecked(0.5 * a)
            - 0.5 * k * (a * PI).ln()
            - 0.5 * sigma11.ln_det();
        Ok(Self {
            alpha: a,
            gamma_g: g,
            rho: params.rho(),
            p,
            sigma11,
            beta,
            schur,
            ln_gauss_norm,
            ln_student_norm,
        })
    }

    /// `det Σ / det Σ₁₁`
    pub fn schur(&self) -> f64 {
        self.schur
    }

    /// `Σ₁₁⁻¹ Σ₁₂`, so that the student location is `historyᵀ β`.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Log density of the first `p − 1` samples, weighted branch by branch.
    fn ln_history_terms(&self, history: &[f64]) -> (f64, f64, f64) {
        let g = self.gamma_g;
        let a = self.alpha;
        let k = (self.p - 1) as f64;
        let norm2: f64 = history.iter().map(|x| x * x).sum();
        let q1 = self.sigma11.inv_quad_form(history);
        let lg = ln_weight(self.rho) + self.ln_gauss_norm - norm2 / (4.0 * g * g);
        let ls = ln_weight(1.0 - self.rho) + self.ln_student_norm - 0.5 * (a + k) * (q1 / a).ln_1p();
        (lg, ls, q1)
    }

    /// Density of the first `p − 1` samples of a window.
    pub fn history_pdf(&self, history: &[f64]) -> Result<f64> {
        check_vector(history, self.p - 1)?;
        let (lg, ls, _) = self.ln_history_terms(history);
        Ok(log_add(lg, ls).exp())
    }

    pub fn at(&self, history: &[f64]) -> Result<ConditionalMixture> {
        check_vector(history, self.p - 1)?;
        let (lg, ls, q1) = self.ln_history_terms(history);
        let total = log_add(lg, ls);
        let gauss_weight = if lg == f64::NEG_INFINITY {
            0.0
        } else {
            (lg - total).exp()
        };
        let dof = self.alpha + (self.p - 1) as f64;
        let loc: f64 = history.iter().zip(&self.beta).map(|(a, b)| a * b).sum();
        let scale = (self.schur * (self.alpha + q1) / dof).sqrt();
        Ok(ConditionalMixture {
            gauss_weight,
            gauss_sd: 2f64.sqrt() * self.gamma_g,
            student_loc: loc,
            student_scale: scale,
            student_dof: dof,
        })
    }
}

impl ConditionalMixture {
    pub fn pdf(&self, n: f64) -> f64 {
        let mut out = 0.0;
        if self.gauss_weight > 0.0 {
            let z = n / self.gauss_sd;
            out += self.gauss_weight * (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * self.gauss_sd);
        }
        if self.gauss_weight < 1.0 {
            out += (1.0 - self.gauss_weight) * student_pdf(n, self.student_loc, self.student_scale, self.student_dof);
        }
        out
    }
}

/// Univariate student density with location, scale and degrees of freedom.
pub(crate) fn student_pdf(x: f64, loc: f64, scale: f64, dof: f64) -> f64 {
    let z = (x - loc) / scale;
    let ln_c =
        ln_gamma_unchecked(0.5 * (dof + 1.0)) - ln_gamma_unchecked(0.5 * dof) - 0.5 * (dof * PI).ln() - scale.ln();
    (ln_c - 0.5 * (dof + 1.0) * (z * z / dof).ln_1p()).exp()
}

/// Density of the last sample of a window given the preceding `p − 1` samples.
pub fn conditional_pdf(params: &GsParams, history: &[f64], n: f64) -> Result<f64> {
    check_finite(n, "noise sample")?;
    Ok(ConditionalLaw::new(params)?.at(history)?.pdf(n))
}
