use crate::math::SpdMatrix;

use super::EstimationError;

/// Minimum relative gap between eigenvalues, and between probe norms.
const GAP: f64 = 1e-6;
/// Accepted relative spread of the three quadratic forms.
const FORM_TOL: f64 = 1e-10;

/// Three CF probe points with one common value of `tᵀ Σ̂ t` and distinct norms.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSet {
    pub t: [Vec<f64>; 3],
}

impl ProbeSet {
    pub fn norms2(&self) -> [f64; 3] {
        self.t.each_ref().map(|v| v.iter().map(|x| x * x).sum())
    }

    pub fn quad_forms(&self, sigma: &SpdMatrix) -> [f64; 3] {
        self.t.each_ref().map(|v| sigma.quad_form(v))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            t: self.t.each_ref().map(|v| v.iter().map(|x| x * c).collect()),
        }
    }
}

fn swapped_pair(lambda: &[f64], i: usize, j: usize) -> Vec<f64> {
    let mut s = vec![1.0; lambda.len()];
    s[i] = (lambda[j] / lambda[i]).sqrt();
    s[j] = (lambda[i] / lambda[j]).sqrt();
    s
}

fn distinct(a: f64, b: f64, reference: f64) -> bool {
    (a.sqrt() - b.sqrt()).abs() >= GAP * reference
}

/// Probe vectors for the Gaussian-part estimator.
///
/// In the eigenbasis `Σ̂ = Pᵀ Λ P` a probe `t = Pᵀ s` has `tᵀ Σ̂ t = sᵀ Λ s`. The middle
/// probe is `s = 𝟙`; the others swap the weights of two eigen-directions
/// (`s_i = √(λ_j/λ_i)`, `s_j = √(λ_i/λ_j)`), first pairs (2,3) and (1,2). Points on
/// the ellipsoid axes, `s = e_i √(Σλ/λ_i)`, fill in when pairs are degenerate; for
/// `p = 2` the third probe is always `s = (√((λ₁+λ₂)/λ₁), 0)`.
pub fn build_probe_vectors(sigma_hat: &SpdMatrix) -> Result<ProbeSet, EstimationError> {
    let p = sigma_hat.dim();
    if p < 2 {
        return Err(EstimationError::Degenerate("probe vectors need memory order >= 2"));
    }
    let eigen = sigma_hat.eigen();
    let lambda = &eigen.eigenvalues;
    let ones = vec![1.0; p];
    let n2 = p as f64;
    let reference = n2.sqrt();
    let has_gap = |i: usize, j: usize| (lambda[i] - lambda[j]).abs() >= GAP * lambda[i].max(lambda[j]);
    let [s1, s3] = if p == 2 {
        if !has_gap(0, 1) {
            return Err(EstimationError::DegenerateSpectrum);
        }
        let axis = vec![((lambda[0] + lambda[1]) / lambda[0]).sqrt(), 0.0];
        [swapped_pair(lambda, 0, 1), axis]
    } else {
        let mut pairs = vec![(1, 2), (0, 1)];
        for i in 0..p {
            for j in i + 1..p {
                if !pairs.contains(&(i, j)) {
                    pairs.push((i, j));
                }
            }
        }
        let norm2 = |s: &[f64]| s.iter().map(|x| x * x).sum::<f64>();
        let total: f64 = lambda.iter().sum();
        let axes = (0..p).map(|i| {
            let mut s = vec![0.0; p];
            s[i] = (total / lambda[i]).sqrt();
            s
        });
        let candidates: Vec<Vec<f64>> = pairs
            .into_iter()
            .filter(|&(i, j)| has_gap(i, j))
            .map(|(i, j)| swapped_pair(lambda, i, j))
            .chain(axes)
            .filter(|s| distinct(norm2(s), n2, reference))
            .collect();
        let first = candidates.first().ok_or(EstimationError::DegenerateSpectrum)?.clone();
        let second = candidates
            .iter()
            .find(|s| distinct(norm2(s), norm2(&first), reference))
            .ok_or(EstimationError::DegenerateSpectrum)?
            .clone();
        [first, second]
    };
    let to_t = |s: &[f64]| -> Vec<f64> {
        // t = Pᵀ s, rows of `basis` are eigenvectors
        (0..p)
            .map(|c| (0..p).map(|r| eigen.basis[(r, c)] * s[r]).sum())
            .collect()
    };
    let probes = ProbeSet {
        t: [to_t(&s1), to_t(&ones), to_t(&s3)],
    };
    let forms = probes.quad_forms(sigma_hat);
    let hi = forms.iter().cloned().fold(f64::MIN, f64::max);
    let lo = forms.iter().cloned().fold(f64::MAX, f64::min);
    if (hi - lo) > FORM_TOL * hi {
        return Err(EstimationError::Numeric(format!(
            "probe quadratic forms disagree: {forms:?}"
        )));
    }
    let n = probes.norms2();
    let r = n[1].sqrt();
    if !(distinct(n[0], n[1], r) && distinct(n[1], n[2], r) && distinct(n[0], n[2], r)) {
        return Err(EstimationError::DegenerateSpectrum);
    }
    Ok(probes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::presets;

    fn certify(sigma: &SpdMatrix) {
        let probes = build_probe_vectors(sigma).unwrap();
        let f = probes.quad_forms(sigma);
        let spread = (f.iter().cloned().fold(f64::MIN, f64::max) - f.iter().cloned().fold(f64::MAX, f64::min)) / f[1];
        assert!(spread <= 1e-10, "{f:?}");
        let n = probes.norms2().map(f64::sqrt);
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            assert!((n[a] - n[b]).abs() >= 1e-6 * n[1], "{n:?}");
        }
    }

    #[test]
    fn certified_for_study_matrices() {
        certify(&presets::sigma_p2());
        certify(&presets::sigma_p5());
    }

    #[test]
    fn p2_norms() {
        let probes = build_probe_vectors(&presets::sigma_p2()).unwrap();
        let n = probes.norms2();
        assert!((n[0] - (0.3 / 1.7 + 1.7 / 0.3)).abs() < 1e-12);
        assert!((n[1] - 2.0).abs() < 1e-12);
        assert!((n[2] - (1.0 + 0.3 / 1.7)).abs() < 1e-12);
    }

    #[test]
    fn identity_is_degenerate() {
        assert!(matches!(
            build_probe_vectors(&SpdMatrix::identity(4)),
            Err(EstimationError::DegenerateSpectrum)
        ));
        assert!(matches!(
            build_probe_vectors(&SpdMatrix::identity(2)),
            Err(EstimationError::DegenerateSpectrum)
        ));
    }

    #[test]
    fn partially_degenerate_spectrum_uses_other_pairs() {
        // λ₂ = λ₃, so the first recipe pair is unusable
        let m = SpdMatrix::toeplitz(&[1.0, 0.3, 0.3]).unwrap();
        certify(&m);
    }

    #[test]
    fn scaling_keeps_equal_forms() {
        let s = presets::sigma_p5();
        let probes = build_probe_vectors(&s).unwrap().scaled(0.37);
        let f = probes.quad_forms(&s);
        assert!((f[0] - f[2]).abs() <= 1e-10 * f[0]);
    }
}
