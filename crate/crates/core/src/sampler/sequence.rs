use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{GsError, Result};
use crate::math::RandomStream;
use crate::model::GsParams;

/// Where a sequence came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origin {
    /// `gs`, `wgn`, `asg`, or `external` for data read from disk.
    pub model: String,
    /// Hex digest of the generating parameters.
    pub params_hash: String,
    pub seed: Option<u64>,
    pub stream_id: Option<u64>,
}

impl Origin {
    pub fn external() -> Self {
        Self {
            model: "external".into(),
            params_hash: String::new(),
            seed: None,
            stream_id: None,
        }
    }

    pub(crate) fn generated(model: &str, params: Option<&GsParams>, rng: &RandomStream) -> Self {
        Self {
            model: model.into(),
            params_hash: params.map(params_digest).unwrap_or_default(),
            seed: Some(rng.seed()),
            stream_id: Some(rng.stream_id()),
        }
    }
}

pub(crate) fn digest(values: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_le_bytes());
    }
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Short digest identifying a parameter tuple.
pub fn params_digest(params: &GsParams) -> String {
    let mut key = vec![params.alpha(), params.gamma_g(), params.gamma_s(), params.rho()];
    key.extend_from_slice(params.sigma_tilde().row_major());
    digest(&key)
}

/// A scalar noise stream `n(1), …, n(L_N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSequence {
    samples: Vec<f64>,
    origin: Origin,
}

impl NoiseSequence {
    pub fn new(samples: Vec<f64>, origin: Origin) -> Result<Self> {
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(GsError::NonFinite("noise sample"));
        }
        Ok(Self { samples, origin })
    }

    /// Wrap externally supplied samples.
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        Self::new(samples, Origin::external())
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    /// Number of stride-1 windows of length `p`.
    pub fn n_windows(&self, p: usize) -> usize {
        (self.len() + 1).saturating_sub(p)
    }

    /// Stride-1 windows of length `p`: `L_N − p + 1` of them.
    pub fn windows(&self, p: usize) -> std::slice::Windows<'_, f64> {
        assert!(p >= 1, "window length must be positive");
        self.samples.windows(p)
    }
}
