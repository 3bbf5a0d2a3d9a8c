use crate::math::sum::par_sum_many;
use crate::sampler::NoiseSequence;

/// Real part of the empirical characteristic function of the length-`t.len()`
/// windows of `seq`.
pub fn ecf(seq: &NoiseSequence, t: &[f64]) -> f64 {
    ecf_parts(seq, t).0
}

/// `(mean cos tᵀn, mean sin tᵀn)` over the windows.
pub fn ecf_parts(seq: &NoiseSequence, t: &[f64]) -> (f64, f64) {
    let p = t.len();
    let l = seq.n_windows(p);
    assert!(l > 0, "no windows of length {p}");
    let x = seq.samples();
    let [c, s] = par_sum_many::<2, _>(l, |i, acc| {
        let arg: f64 = x[i..i + p].iter().zip(t).map(|(a, b)| a * b).sum();
        let (sn, cs) = arg.sin_cos();
        acc[0] += cs;
        acc[1] += sn;
    });
    (c / l as f64, s / l as f64)
}

/// ECF over an explicit list of windows.
pub fn ecf_windows(windows: &[Vec<f64>], t: &[f64]) -> f64 {
    assert!(!windows.is_empty(), "no windows");
    let l = windows.len();
    let [c] = par_sum_many::<1, _>(l, |i, acc| {
        let arg: f64 = windows[i].iter().zip(t).map(|(a, b)| a * b).sum();
        acc[0] += arg.cos();
    });
    c / l as f64
}
