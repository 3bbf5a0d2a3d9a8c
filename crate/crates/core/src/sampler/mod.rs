//! Noise generators: the GS model itself and the WGN and αSG baselines.

mod sequence;
mod stable;

pub use sequence::{params_digest, NoiseSequence, Origin};
pub use stable::sample_stable_subordinator;

use crate::error::{GsError, Result};
use crate::math::{RandomStream, SpdMatrix};
use crate::model::{Branch, ConditionalLaw, ConditionalMixture, GsParams};

/// One draw of a whole window from the joint law, with the branch that produced it.
pub fn sample_gs_vector_labeled(params: &GsParams, rng: &mut RandomStream) -> (Vec<f64>, Branch) {
    let p = params.p();
    if rng.bernoulli(params.rho()) {
        let sd = 2f64.sqrt() * params.gamma_g();
        ((0..p).map(|_| sd * rng.normal()).collect(), Branch::Gaussian)
    } else {
        let z: Vec<f64> = (0..p).map(|_| rng.normal()).collect();
        let mut x = params.sigma().color(&z);
        let a = params.alpha();
        let mix = (a / rng.chi_squared(a)).sqrt();
        x.iter_mut().for_each(|v| *v *= mix);
        (x, Branch::Student)
    }
}

/// One draw of a whole window from the joint law.
pub fn sample_gs_vector(params: &GsParams, rng: &mut RandomStream) -> Vec<f64> {
    sample_gs_vector_labeled(params, rng).0
}

/// Exact draw from a conditional mixture.
pub fn sample_conditional(mix: &ConditionalMixture, rng: &mut RandomStream) -> f64 {
    if rng.uniform_open() < mix.gauss_weight {
        mix.gauss_sd * rng.normal()
    } else {
        let dof = mix.student_dof;
        mix.student_loc + mix.student_scale * rng.normal() * (dof / rng.chi_squared(dof)).sqrt()
    }
}

/// A GS noise sequence of `length` samples.
///
/// The first window is one joint draw; every further sample comes from the exact
/// conditional law given the preceding `p − 1` samples.
pub fn sample_gs_sequence(params: &GsParams, length: usize, rng: &mut RandomStream) -> Result<NoiseSequence> {
    sample_gs_sequence_with_burn_in(params, length, 0, rng)
}

/// Like [`sample_gs_sequence`], discarding the first `burn_in` samples.
pub fn sample_gs_sequence_with_burn_in(
    params: &GsParams,
    length: usize,
    burn_in: usize,
    rng: &mut RandomStream,
) -> Result<NoiseSequence> {
    let p = params.p();
    if length < p {
        return Err(GsError::Domain {
            what: "sequence length below memory order",
            value: length as f64,
        });
    }
    let total = length + burn_in;
    let mut out = Vec::with_capacity(total);
    if p == 1 {
        while out.len() < total {
            out.push(sample_gs_vector(params, rng)[0]);
        }
    } else {
        out.extend(sample_gs_vector(params, rng));
        let law = ConditionalLaw::new(params)?;
        while out.len() < total {
            let mix = law.at(&out[out.len() - (p - 1)..])?;
            out.push(sample_conditional(&mix, rng));
        }
    }
    out.drain(..burn_in);
    NoiseSequence::new(out, Origin::generated("gs", Some(params), rng))
}

/// White Gaussian noise with variance `2 γ_g²`.
pub fn sample_wgn(gamma_g: f64, length: usize, rng: &mut RandomStream) -> Result<NoiseSequence> {
    if !(gamma_g > 0.0) || !gamma_g.is_finite() {
        return Err(GsError::Domain {
            what: "gamma_g",
            value: gamma_g,
        });
    }
    let sd = 2f64.sqrt() * gamma_g;
    let samples = (0..length).map(|_| sd * rng.normal()).collect();
    let mut origin = Origin::generated("wgn", None, rng);
    origin.params_hash = sequence::digest(&[gamma_g]);
    NoiseSequence::new(samples, origin)
}

/// α-sub-Gaussian noise `√S · G`, `G ~ N(0, sigma)`, rolled forward one sample at a time.
///
/// Each new sample is the Gaussian conditional mean given the previous `p − 1`
/// samples plus the conditional spread scaled by a fresh subordinator draw.
pub fn sample_asg_sequence(
    alpha: f64,
    sigma: &SpdMatrix,
    length: usize,
    rng: &mut RandomStream,
) -> Result<NoiseSequence> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(GsError::Domain {
            what: "alpha",
            value: alpha,
        });
    }
    let p = sigma.dim();
    if length < p {
        return Err(GsError::Domain {
            what: "sequence length below memory order",
            value: length as f64,
        });
    }
    let mut out = Vec::with_capacity(length);
    let z: Vec<f64> = (0..p).map(|_| rng.normal()).collect();
    let root = sample_stable_subordinator(alpha, rng).sqrt();
    out.extend(sigma.color(&z).into_iter().map(|v| root * v));
    if p > 1 {
        let s11 = sigma.leading(p - 1)?;
        let s12: Vec<f64> = (0..p - 1).map(|i| sigma.get(i, p - 1)).collect();
        let beta = s11.inverse().mul_vec(&s12);
        let schur = sigma.get(p - 1, p - 1) - s12.iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>();
        let sd = schur.sqrt();
        while out.len() < length {
            let h = &out[out.len() - (p - 1)..];
            let mean: f64 = h.iter().zip(&beta).map(|(a, b)| a * b).sum();
            let root = sample_stable_subordinator(alpha, rng).sqrt();
            out.push(mean + root * sd * rng.normal());
        }
    } else {
        let sd = sigma.get(0, 0).sqrt();
        while out.len() < length {
            let root = sample_stable_subordinator(alpha, rng).sqrt();
            out.push(root * sd * rng.normal());
        }
    }
    let mut origin = Origin::generated("asg", None, rng);
    let mut key = vec![alpha];
    key.extend_from_slice(sigma.row_major());
    origin.params_hash = sequence::digest(&key);
    NoiseSequence::new(out, origin)
}
