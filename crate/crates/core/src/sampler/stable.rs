use std::f64::consts::{FRAC_PI_2, PI};

use crate::math::RandomStream;

/// Totally skewed stable draw `S ~ S(α/2, 1, 2 cos(πα/4)^{2/α}, 0)`, always positive.
///
/// Chambers–Mallows–Stuck transformation for index `a = α/2 < 1`, `β = 1`.
pub fn sample_stable_subordinator(alpha: f64, rng: &mut RandomStream) -> f64 {
    let a = 0.5 * alpha;
    let scale = 2.0 * (PI * alpha / 4.0).cos().powf(2.0 / alpha);
    let t = (FRAC_PI_2 * a).tan();
    let s_ab = (1.0 + t * t).powf(0.5 / a);
    loop {
        let v = PI * (rng.uniform_open() - 0.5);
        let w = rng.exp1();
        // with β = 1 the shift b equals π/2
        let arg = a * (v + FRAC_PI_2);
        let x = s_ab * arg.sin() / v.cos().powf(1.0 / a) * ((v - arg).cos() / w).powf((1.0 - a) / a);
        let s = scale * x;
        if s.is_finite() && s > 0.0 {
            return s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_with_positive_median() {
        let mut rng = RandomStream::new(3, 0);
        let mut draws: Vec<f64> = (0..20_001).map(|_| sample_stable_subordinator(1.3, &mut rng)).collect();
        assert!(draws.iter().all(|&s| s > 0.0));
        draws.sort_by(f64::total_cmp);
        assert!(draws[10_000] > 0.0);
    }

    #[test]
    fn levy_case() {
        // α = 1: S is Lévy with scale 1, P(S ≤ x) = erfc(1/√(2x)); at x = 1/(2·0.476936²) the CDF is 1/2
        let mut rng = RandomStream::new(4, 0);
        let n = 100_000;
        let median = 1.0 / (2.0 * 0.476_936_276_204_469_9f64.powi(2));
        let below = (0..n)
            .filter(|_| sample_stable_subordinator(1.0, &mut rng) <= median)
            .count();
        let frac = below as f64 / n as f64;
        assert!((frac - 0.5).abs() < 4.0 * 0.5 / (n as f64).sqrt(), "{frac}");
    }
}
