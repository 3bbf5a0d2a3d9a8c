//! Adaptive Gauss–Kronrod quadrature on intervals, half-lines, the real line, and
//! iterated integration in up to three dimensions.

use std::collections::BinaryHeap;

use crate::error::{GsError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of a quadrature: the estimate and an error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances and budget of the adaptive 1-D integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 0.0,
            max_intervals: 2_000,
        }
    }
}

impl QuadConfig {
    pub fn abs(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }
}

/// Integration range of one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Range {
    Finite(f64, f64),
    /// The whole line; `center` and `scale` locate the bulk, `tail` is the power-law
    /// decay exponent of the integrand (`|f(x)| ~ |x|^{-tail}`), which picks a
    /// mapping that keeps the transformed integrand bounded. Use `f64::INFINITY` for
    /// integrands with exponential tails.
    Whole {
        center: f64,
        scale: f64,
        tail: f64,
    },
    /// `[start, ∞)` with the same tail convention.
    HalfLine {
        start: f64,
        scale: f64,
        tail: f64,
    },
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    (value, error)
}

/// Adaptive integration of `f` over `[a, b]` with global error control.
pub fn integrate_interval<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Quadrature> {
    integrate_segments(&mut f, &[a, b], cfg)
}

/// Like [`integrate_interval`] but seeded with the given breakpoints (sorted).
pub fn integrate_segments<F: FnMut(f64) -> f64>(
    f: &mut F,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> Result<Quadrature> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut evaluations = 0;
    for w in breakpoints.windows(2) {
        let (value, error) = gk15(f, w[0], w[1]);
        evaluations += 15;
        total += value;
        total_err += error;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    loop {
        if !total.is_finite() {
            return Err(GsError::Numeric("integrand produced a non-finite value".into()));
        }
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= target {
            return Ok(Quadrature {
                value: total,
                error: total_err,
                evaluations,
            });
        }
        if heap.len() >= cfg.max_intervals {
            return Err(GsError::Accuracy {
                estimate: total,
                error: total_err,
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further in floating point
            return Err(GsError::Accuracy {
                estimate: total,
                error: total_err,
            });
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        // guard against drift of the running sums
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// Exponent of the map `x = scale · (u / (1 − u))^κ` for a `|x|^{-tail}` integrand.
fn map_power(tail: f64) -> f64 {
    if tail.is_finite() && tail > 1.0 {
        (2.0 / (tail - 1.0)).max(1.0)
    } else {
        1.0
    }
}

fn half_line_map(u: f64, scale: f64, kappa: f64) -> (f64, f64) {
    // x = scale·(u/(1-u))^κ, dx/du = scale·κ·u^{κ-1}/(1-u)^{κ+1}
    let w = u / (1.0 - u);
    let x = scale * w.powf(kappa);
    let jac = scale * kappa * w.powf(kappa - 1.0) / ((1.0 - u) * (1.0 - u));
    (x, jac)
}

/// 1-D integral over any [`Range`].
pub fn integrate_1d<F: FnMut(f64) -> f64>(mut f: F, range: Range, cfg: &QuadConfig) -> Result<Quadrature> {
    match range {
        Range::Finite(a, b) => integrate_interval(f, a, b, cfg),
        Range::HalfLine { start, scale, tail } => {
            let kappa = map_power(tail);
            let mut g = |u: f64| {
                if u >= 1.0 {
                    return 0.0;
                }
                let (x, jac) = half_line_map(u, scale, kappa);
                let v = f(start + x);
                if v == 0.0 {
                    0.0
                } else {
                    v * jac
                }
            };
            integrate_segments(&mut g, &[0.0, 0.5, 1.0], cfg)
        }
        Range::Whole { center, scale, tail } => {
            let kappa = map_power(tail);
            let mut g = |v: f64| {
                let u = v.abs();
                if u >= 1.0 {
                    return 0.0;
                }
                let (x, jac) = half_line_map(u, scale, kappa);
                let y = f(center + v.signum() * x);
                if y == 0.0 {
                    0.0
                } else {
                    y * jac
                }
            };
            integrate_segments(&mut g, &[-1.0, -0.5, 0.0, 0.5, 1.0], cfg)
        }
    }
}

/// Iterated integral of `f` over the product of `ranges` (1 ≤ d ≤ 3).
///
/// The innermost coordinate is the last one. Inner integrals are computed with a
/// tolerance one decade tighter than the enclosing one.
pub fn integrate_nd<F: Fn(&[f64]) -> f64>(f: F, ranges: &[Range], cfg: &QuadConfig) -> Result<Quadrature> {
    let d = ranges.len();
    if d == 0 || d > 3 {
        return Err(GsError::Unsupported("integrate_nd supports 1 to 3 dimensions"));
    }
    let mut point = vec![0.0; d];
    nested(&f, ranges, 0, &mut point, cfg)
}

fn nested<F: Fn(&[f64]) -> f64>(
    f: &F,
    ranges: &[Range],
    level: usize,
    point: &mut Vec<f64>,
    cfg: &QuadConfig,
) -> Result<Quadrature> {
    if level + 1 == ranges.len() {
        return integrate_1d(
            |x| {
                point[level] = x;
                f(point)
            },
            ranges[level],
            cfg,
        );
    }
    let inner_cfg = QuadConfig {
        abs_tol: cfg.abs_tol * 0.1,
        rel_tol: cfg.rel_tol * 0.1,
        max_intervals: cfg.max_intervals,
    };
    let mut failure = None;
    let mut evaluations = 0;
    let cell = std::cell::RefCell::new(point);
    let outer = integrate_1d(
        |x| {
            let mut p = cell.borrow_mut();
            p[level] = x;
            match nested(f, ranges, level + 1, &mut p, &inner_cfg) {
                Ok(q) => {
                    evaluations += q.evaluations;
                    q.value
                }
                Err(GsError::Accuracy { estimate, error }) => {
                    failure.get_or_insert(GsError::Accuracy { estimate, error });
                    estimate
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        ranges[level],
        cfg,
    )?;
    if let Some(GsError::Numeric(m)) = failure {
        return Err(GsError::Numeric(m));
    }
    Ok(Quadrature {
        value: outer.value,
        error: outer.error,
        evaluations,
    })
}
