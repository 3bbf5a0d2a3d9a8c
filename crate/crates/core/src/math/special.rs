//! Special functions: log-gamma and the angular integral Υ(p).

use std::f64::consts::PI;

use crate::error::{GsError, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln(sqrt(2π))`
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(GsError::Domain {
            what: "ln_gamma argument",
            value: x,
        });
    }
    Ok(ln_gamma_unchecked(x))
}

/// Log-gamma without argument checks. The caller guarantees `x > 0`.
pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - ln_gamma_unchecked(1.0 - x);
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + series.ln()
}

/// Γ(x) for moderate positive arguments.
#[cfg(test)]
pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    ln_gamma_unchecked(x).exp()
}

/// Υ(p) = (p−1) π^{p/2} / (2 Γ(3/2) Γ((p+1)/2)), i.e. the surface measure of the unit
/// sphere in ℝ^{p−1}.
pub fn upsilon(p: usize) -> Result<f64> {
    if p < 2 {
        return Err(GsError::Domain {
            what: "upsilon order p",
            value: p as f64,
        });
    }
    let pf = p as f64;
    let ln = (pf - 1.0).ln() + 0.5 * pf * PI.ln()
        - std::f64::consts::LN_2
        - ln_gamma_unchecked(1.5)
        - ln_gamma_unchecked(0.5 * (pf + 1.0));
    Ok(ln.exp())
}

/// Υ(p) through the piecewise Wallis-integral evaluation of
/// `∫_0^{2π}∫_0^π…∫_0^π ∏_{k=1}^{p−2} sin^{p−2−k}θ_k dθ`.
///
/// The powers of two here are the ones obtained by multiplying the Wallis integrals
/// `∫_0^π sin^m θ dθ` for m = 1..p−3 together with the `2π` azimuth. They equal
/// `2^{p/2}` (p even) and `2^{(p−1)/2}` (p odd).
pub fn upsilon_wallis(p: usize) -> Result<f64> {
    match p {
        0 | 1 => Err(GsError::Domain {
            what: "upsilon order p",
            value: p as f64,
        }),
        2 => Ok(2.0),
        3 => Ok(2.0 * PI),
        4 => Ok(4.0 * PI),
        _ if (p - 3) % 2 == 1 => {
            let pf = p as f64;
            let prod: f64 = (1..=(p - 4) / 2).map(|k| 1.0 / (2 * k + 1) as f64).product();
            Ok(2f64.powf(pf / 2.0) * PI.powf((pf - 2.0) / 2.0) * prod)
        }
        _ => {
            let pf = p as f64;
            let prod: f64 = (1..=(p - 5) / 2).map(|k| 1.0 / (2 * k + 1) as f64).product();
            let ratio = double_factorial(p - 4) / double_factorial(p - 3);
            Ok(2f64.powf((pf - 1.0) / 2.0) * PI.powf((pf - 1.0) / 2.0) * ratio * prod)
        }
    }
}

/// n!! as a float (0!! = 1).
pub fn double_factorial(n: usize) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    // 40-digit reference values (mpmath.loggamma)
    const REFERENCE: [(f64, f64); 14] = [
        (0.001, 6.907_178_885_383_853_682_5),
        (0.1, 2.252_712_651_734_205_959_9),
        (0.3, 1.095_797_994_818_075_521_7),
        (0.5, 0.572_364_942_924_700_087_07),
        (0.75, 0.203_280_951_431_295_371_48),
        (1.5, -0.120_782_237_635_245_222_35),
        (2.5, 0.284_682_870_472_919_159_63),
        (3.7, 1.428_072_326_665_387_921_9),
        (7.5, 7.534_364_236_758_732_955_2),
        (10.0, 12.801_827_480_081_469_611),
        (33.3, 82.603_723_581_654_952_928),
        (100.0, 359.134_205_369_575_398_78),
        (523.1, 2_749.176_284_926_675_590_5),
        (1000.0, 5_905.220_423_209_181_211_8),
    ];

    #[test]
    fn ln_gamma_matches_reference() {
        for (x, want) in REFERENCE {
            let got = ln_gamma(x).unwrap();
            let rel = ((got - want) / want).abs();
            assert!(rel <= 1e-13, "x={x}: got {got}, want {want}, rel {rel:e}");
        }
    }

    #[test]
    fn ln_gamma_trivial_points() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-15);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-15);
        let half = ln_gamma(0.5).unwrap();
        assert!((half - PI.sqrt().ln()).abs() < 1e-15);
    }

    #[test]
    fn ln_gamma_rejects_bad_input() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
        assert!(ln_gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn upsilon_known_values() {
        assert!((upsilon(2).unwrap() - 2.0).abs() < 1e-14);
        assert!((upsilon(3).unwrap() - 2.0 * PI).abs() < 1e-13);
        assert!((upsilon(4).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert!(upsilon(1).is_err());
        assert!(upsilon_wallis(1).is_err());
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(0), 1.0);
        assert_eq!(double_factorial(1), 1.0);
        assert_eq!(double_factorial(5), 15.0);
        assert_eq!(double_factorial(6), 48.0);
    }
}
