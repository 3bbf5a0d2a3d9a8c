//! Cluster statistics of a noise sequence: amplitude histogram, impulsive cluster
//! lengths (ICL) and cluster interarrival lengths (CIL) above a threshold.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::estimator::robust_scale;
use crate::sampler::NoiseSequence;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FeatureError {
    #[error("invalid {what}: {value}")]
    Invalid { what: &'static str, value: f64 },
    #[error("feature specs differ: {0}")]
    Mismatch(&'static str),
}

/// Equal-width histogram bins over `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramSpec {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl Default for HistogramSpec {
    fn default() -> Self {
        Self {
            lo: -500.0,
            hi: 500.0,
            bins: 1000,
        }
    }
}

impl HistogramSpec {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self, FeatureError> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(FeatureError::Invalid {
                what: "histogram range",
                value: hi - lo,
            });
        }
        if bins == 0 {
            return Err(FeatureError::Invalid {
                what: "bin count",
                value: 0.0,
            });
        }
        Ok(Self { lo, hi, bins })
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    pub fn edges(&self) -> Vec<f64> {
        (0..=self.bins).map(|i| self.lo + i as f64 * self.width()).collect()
    }

    fn bin(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo && x <= self.hi) {
            return None;
        }
        Some((((x - self.lo) / self.width()) as usize).min(self.bins - 1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterFeatures {
    pub threshold: f64,
    pub spec: HistogramSpec,
    /// Densities per bin; zero everywhere when no sample falls in range.
    pub density: Vec<f64>,
    /// Samples inside the histogram range.
    pub in_range: usize,
    /// Cluster length → count.
    pub icl_counts: BTreeMap<usize, usize>,
    /// Gap length → count.
    pub cil_counts: BTreeMap<usize, usize>,
    pub n_clusters: usize,
    /// Sub-threshold samples before the first and after the last cluster.
    pub leading: usize,
    pub trailing: usize,
}

impl ClusterFeatures {
    /// Normalized ICL mass function.
    pub fn icl_mass(&self) -> BTreeMap<usize, f64> {
        mass(&self.icl_counts)
    }

    pub fn cil_mass(&self) -> BTreeMap<usize, f64> {
        mass(&self.cil_counts)
    }

    pub fn mean_icl(&self) -> Option<f64> {
        mean(&self.icl_counts)
    }

    pub fn mean_cil(&self) -> Option<f64> {
        mean(&self.cil_counts)
    }
}

fn mass(counts: &BTreeMap<usize, usize>) -> BTreeMap<usize, f64> {
    let total: usize = counts.values().sum();
    counts.iter().map(|(&k, &c)| (k, c as f64 / total as f64)).collect()
}

fn mean(counts: &BTreeMap<usize, usize>) -> Option<f64> {
    let total: usize = counts.values().sum();
    (total > 0).then(|| counts.iter().map(|(&k, &c)| (k * c) as f64).sum::<f64>() / total as f64)
}

/// `10 · MAD / 0.6745`
pub fn default_threshold(seq: &NoiseSequence) -> f64 {
    10.0 * robust_scale(seq.samples())
}

/// Histogram of the signed samples and run lengths of `|n| > a_t`.
///
/// Clusters touching either end of the sequence are counted; only gaps between two
/// clusters count as interarrivals.
pub fn extract_features(seq: &NoiseSequence, a_t: f64, spec: HistogramSpec) -> Result<ClusterFeatures, FeatureError> {
    if !(a_t > 0.0 && a_t.is_finite()) {
        return Err(FeatureError::Invalid {
            what: "threshold",
            value: a_t,
        });
    }
    let spec = HistogramSpec::new(spec.lo, spec.hi, spec.bins)?;
    let x = seq.samples();
    let mut counts = vec![0usize; spec.bins];
    for &v in x {
        if let Some(b) = spec.bin(v) {
            counts[b] += 1;
        }
    }
    let in_range: usize = counts.iter().sum();
    let density = if in_range == 0 {
        vec![0.0; spec.bins]
    } else {
        let norm = 1.0 / (in_range as f64 * spec.width());
        counts.iter().map(|&c| c as f64 * norm).collect()
    };

    let mut icl_counts = BTreeMap::new();
    let mut cil_counts = BTreeMap::new();
    let mut runs: Vec<(bool, usize)> = Vec::new();
    for &v in x {
        let above = v.abs() > a_t;
        match runs.last_mut() {
            Some((state, len)) if *state == above => *len += 1,
            _ => runs.push((above, 1)),
        }
    }
    let mut n_clusters = 0;
    for (i, &(above, len)) in runs.iter().enumerate() {
        if above {
            n_clusters += 1;
            *icl_counts.entry(len).or_insert(0) += 1;
        } else if i > 0 && i + 1 < runs.len() {
            *cil_counts.entry(len).or_insert(0) += 1;
        }
    }
    let edge = |r: Option<&(bool, usize)>| r.filter(|r| !r.0).map_or(0, |r| r.1);
    let (leading, trailing) = if n_clusters == 0 {
        (x.len(), 0)
    } else {
        (edge(runs.first()), edge(runs.last()))
    };
    Ok(ClusterFeatures {
        threshold: a_t,
        spec,
        density,
        in_range,
        icl_counts,
        cil_counts,
        n_clusters,
        leading,
        trailing,
    })
}

/// L1 distances between two feature sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureDistance {
    pub amplitude: f64,
    /// Histogram beyond `±A_T`, each side renormalized to unit mass.
    pub amplitude_tail: f64,
    pub icl: f64,
    pub cil: f64,
}

fn mass_l1(a: &BTreeMap<usize, f64>, b: &BTreeMap<usize, f64>) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => 2.0,
        _ => {
            let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).collect();
            keys.into_iter()
                .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
                .sum()
        }
    }
}

/// Each distance lies in `[0, 2]`. An empty distribution against a non-empty one
/// is at distance 2.
pub fn feature_distance(a: &ClusterFeatures, b: &ClusterFeatures) -> Result<FeatureDistance, FeatureError> {
    if a.spec != b.spec {
        return Err(FeatureError::Mismatch("histogram bins"));
    }
    if a.threshold != b.threshold {
        return Err(FeatureError::Mismatch("threshold"));
    }
    let w = a.spec.width();
    let amplitude = match (a.in_range == 0, b.in_range == 0) {
        (true, true) => 0.0,
        (true, false) | (false, true) => 2.0,
        _ => a.density.iter().zip(&b.density).map(|(x, y)| (x - y).abs() * w).sum(),
    };
    let tail = |f: &ClusterFeatures| -> Vec<f64> {
        let edges = f.spec.edges();
        f.density
            .iter()
            .enumerate()
            .map(|(i, d)| {
                if edges[i] >= f.threshold || edges[i + 1] <= -f.threshold {
                    *d
                } else {
                    0.0
                }
            })
            .collect()
    };
    let (ta, tb) = (tail(a), tail(b));
    let (ma, mb) = (ta.iter().sum::<f64>(), tb.iter().sum::<f64>());
    let amplitude_tail = match (ma == 0.0, mb == 0.0) {
        (true, true) => 0.0,
        (true, false) | (false, true) => 2.0,
        _ => ta.iter().zip(&tb).map(|(x, y)| (x / ma - y / mb).abs()).sum(),
    };
    Ok(FeatureDistance {
        amplitude,
        amplitude_tail,
        icl: mass_l1(&a.icl_mass(), &b.icl_mass()),
        cil: mass_l1(&a.cil_mass(), &b.cil_mass()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::RandomStream;
    use crate::sampler::sample_wgn;
    use proptest::prelude::*;

    fn seq(v: &[f64]) -> NoiseSequence {
        NoiseSequence::from_samples(v.to_vec()).unwrap()
    }

    #[test]
    fn hand_traced_runs() {
        let f = extract_features(
            &seq(&[0.0, 5.0, 5.0, 0.0, 0.0, 0.0, 5.0, 0.0]),
            1.0,
            HistogramSpec::default(),
        )
        .unwrap();
        assert_eq!(f.icl_counts, BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(f.cil_counts, BTreeMap::from([(3, 1)]));
        assert_eq!(f.n_clusters, 2);
        assert_eq!((f.leading, f.trailing), (1, 1));
    }

    #[test]
    fn boundary_clusters_have_no_gap() {
        let f = extract_features(&seq(&[9.0, 0.0, 0.0, 9.0, 9.0]), 1.0, HistogramSpec::default()).unwrap();
        assert_eq!(f.icl_counts, BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(f.cil_counts, BTreeMap::from([(2, 1)]));
        let lone = extract_features(&seq(&[9.0, 9.0]), 1.0, HistogramSpec::default()).unwrap();
        assert_eq!(lone.n_clusters, 1);
        assert!(lone.cil_counts.is_empty());
    }

    #[test]
    fn histogram_integrates_to_one() {
        let s = sample_wgn(2.0, 100_000, &mut RandomStream::new(1, 0)).unwrap();
        let f = extract_features(&s, 20.0, HistogramSpec::default()).unwrap();
        let total: f64 = f.density.iter().sum::<f64>() * f.spec.width();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(f.spec.edges().len(), 1001);
    }

    #[test]
    fn white_gaussian_has_no_clusters_at_ten_scales() {
        let s = sample_wgn(2.0, 1_000_000, &mut RandomStream::new(2, 0)).unwrap();
        let f = extract_features(&s, 20.0, HistogramSpec::default()).unwrap();
        assert_eq!(f.n_clusters, 0);
    }

    #[test]
    fn distance_conventions() {
        let a = extract_features(&seq(&[0.0, 5.0, 0.0, 5.0]), 1.0, HistogramSpec::default()).unwrap();
        let b = extract_features(&seq(&[0.0, 0.0, 0.0, 0.5]), 1.0, HistogramSpec::default()).unwrap();
        let d = feature_distance(&a, &a).unwrap();
        assert_eq!((d.amplitude, d.amplitude_tail, d.icl, d.cil), (0.0, 0.0, 0.0, 0.0));
        let d = feature_distance(&a, &b).unwrap();
        assert_eq!(d.amplitude_tail, 2.0);
        assert_eq!(d.icl, 2.0);
        assert_eq!(d.cil, 2.0);
        assert!(d.amplitude > 0.0 && d.amplitude <= 2.0);
        let c = extract_features(&seq(&[0.0]), 2.0, HistogramSpec::default()).unwrap();
        assert!(matches!(feature_distance(&a, &c), Err(FeatureError::Mismatch(_))));
    }

    #[test]
    fn raising_the_threshold_can_split_a_cluster() {
        let s = seq(&[5.0, 3.0, 5.0]);
        let low = extract_features(&s, 1.0, HistogramSpec::default()).unwrap();
        let high = extract_features(&s, 4.0, HistogramSpec::default()).unwrap();
        assert_eq!((low.n_clusters, high.n_clusters), (1, 2));
    }

    #[test]
    fn rejects_bad_threshold() {
        assert!(extract_features(&seq(&[1.0]), 0.0, HistogramSpec::default()).is_err());
        assert!(HistogramSpec::new(1.0, 1.0, 10).is_err());
    }

    proptest! {
        #[test]
        fn runs_partition_the_sequence(v in proptest::collection::vec(-10.0f64..10.0, 1..200), a in 0.5f64..8.0) {
            let f = extract_features(&seq(&v), a, HistogramSpec::default()).unwrap();
            let icl: usize = f.icl_counts.iter().map(|(k, c)| k * c).sum();
            let cil: usize = f.cil_counts.iter().map(|(k, c)| k * c).sum();
            prop_assert_eq!(icl + cil + f.leading + f.trailing, v.len());
            prop_assert_eq!(f.icl_counts.values().sum::<usize>(), f.n_clusters);
            prop_assert_eq!(f.cil_counts.values().sum::<usize>(), f.n_clusters.saturating_sub(1));
            prop_assert!(f.icl_counts.keys().all(|&k| k >= 1) && f.cil_counts.keys().all(|&k| k >= 1));
        }

        #[test]
        fn exceedances_shrink_with_threshold(v in proptest::collection::vec(-10.0f64..10.0, 1..200), a in 0.5f64..4.0, b in 0.0f64..4.0) {
            let lo = extract_features(&seq(&v), a, HistogramSpec::default()).unwrap();
            let hi = extract_features(&seq(&v), a + b, HistogramSpec::default()).unwrap();
            let above = |f: &ClusterFeatures| f.icl_counts.iter().map(|(k, c)| k * c).sum::<usize>();
            prop_assert!(above(&hi) <= above(&lo));
        }
    }
}
