use std::path::Path;

use serde::Deserialize;

use crate::math::SpdMatrix;
use crate::model::GsParams;
use crate::GsError;

use super::{fmt_f64, IoError};

/// On-disk parameter document.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub alpha: f64,
    pub gamma_g: f64,
    pub gamma_s: f64,
    pub rho: f64,
    pub p: usize,
    /// Row-major, `p²` entries.
    pub sigma_tilde: Vec<f64>,
    pub seed: Option<u64>,
}

impl ParamsFile {
    pub fn to_params(&self) -> Result<GsParams, IoError> {
        if self.p == 0 {
            return Err(IoError::Parse("field `p`: memory order must be at least 1".into()));
        }
        if self.sigma_tilde.len() != self.p * self.p {
            return Err(IoError::Parse(format!(
                "field `sigma_tilde`: expected {} entries for p = {}, got {}",
                self.p * self.p,
                self.p,
                self.sigma_tilde.len()
            )));
        }
        let sigma = SpdMatrix::new(self.p, self.sigma_tilde.clone()).map_err(|e| {
            let value = match e {
                GsError::NotPositiveDefinite { min_eigenvalue } => min_eigenvalue,
                GsError::Domain { value, .. } => value,
                _ => f64::NAN,
            };
            IoError::Domain(GsError::Domain {
                what: "sigma_tilde",
                value,
            })
        })?;
        Ok(GsParams::new(self.alpha, self.gamma_g, self.gamma_s, self.rho, sigma)?)
    }
}

/// Parse a parameter document; returns the parameters and the optional seed.
pub fn read_params_str(text: &str) -> Result<(GsParams, Option<u64>), IoError> {
    let file: ParamsFile = toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    Ok((file.to_params()?, file.seed))
}

pub fn read_params(path: &Path) -> Result<(GsParams, Option<u64>), IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    read_params_str(&text).map_err(|e| match e {
        IoError::Parse(m) => IoError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn params_to_toml(params: &GsParams, seed: Option<u64>) -> String {
    let sigma: Vec<String> = params.sigma_tilde().row_major().iter().map(|&v| fmt_f64(v)).collect();
    let mut out = format!(
        "alpha = {}\ngamma_g = {}\ngamma_s = {}\nrho = {}\np = {}\nsigma_tilde = [{}]\n",
        fmt_f64(params.alpha()),
        fmt_f64(params.gamma_g()),
        fmt_f64(params.gamma_s()),
        fmt_f64(params.rho()),
        params.p(),
        sigma.join(", ")
    );
    if let Some(s) = seed {
        out.push_str(&format!("seed = {s}\n"));
    }
    out
}

pub fn write_params(path: &Path, params: &GsParams, seed: Option<u64>) -> Result<(), IoError> {
    std::fs::write(path, params_to_toml(params, seed)).map_err(|e| IoError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::presets;

    #[test]
    fn round_trip_is_lossless() {
        let params = GsParams::new(1.0 / 3.0, 2.0f64.sqrt(), 0.1 + 0.2, 0.7, presets::sigma_p5()).unwrap();
        let text = params_to_toml(&params, Some(42));
        let (back, seed) = read_params_str(&text).unwrap();
        assert_eq!(seed, Some(42));
        assert_eq!(back.alpha(), params.alpha());
        assert_eq!(back.gamma_g(), params.gamma_g());
        assert_eq!(back.gamma_s(), params.gamma_s());
        assert_eq!(back.sigma_tilde(), params.sigma_tilde());
        assert_eq!(params_to_toml(&back, Some(42)), text);
    }

    #[test]
    fn messages_name_the_problem() {
        let e = read_params_str("alpha = 1.2\ngamma_g = 2\n").unwrap_err();
        assert!(matches!(e, IoError::Parse(ref m) if m.contains("missing field")), "{e}");
        let e = read_params_str(
            "alpha = 1.2\ngamma_g = 2.0\ngamma_s = 2.0\nrho = 0.5\np = 2\nsigma_tilde = [1.0, 0.0, 0.0]\n",
        )
        .unwrap_err();
        assert!(matches!(e, IoError::Parse(ref m) if m.contains("sigma_tilde")), "{e}");
        let e = read_params_str("alpha = -1.0\ngamma_g = 2.0\ngamma_s = 2.0\nrho = 0.5\np = 1\nsigma_tilde = [1.0]\n")
            .unwrap_err();
        assert!(
            matches!(e, IoError::Domain(GsError::Domain { what: "alpha", .. })),
            "{e}"
        );
        let e = read_params_str("alpha = = 1").unwrap_err();
        assert!(matches!(e, IoError::Parse(ref m) if m.contains("line 1")), "{e}");
    }
}
