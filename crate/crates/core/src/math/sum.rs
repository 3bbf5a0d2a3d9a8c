//! Order-fixed parallel summation.
//!
//! Work is cut into chunks of a fixed size independent of the worker count, each chunk
//! is summed sequentially and the chunk totals are combined pairwise in index order.
//! The floating-point result is therefore identical for any number of threads.

use rayon::prelude::*;

const CHUNK: usize = 8192;

/// Pairwise sum of a slice in index order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// `Σ_{i<n} f(i)` with a thread-count-independent result.
pub fn par_sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let partials: Vec<f64> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            acc
        })
        .collect();
    pairwise_sum(&partials)
}

/// `K` simultaneous sums; `f(i, acc)` adds the contribution of item `i` into `acc`.
pub fn par_sum_many<const K: usize, F>(n: usize, f: F) -> [f64; K]
where
    F: Fn(usize, &mut [f64; K]) + Sync,
{
    let partials: Vec<[f64; K]> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let mut acc = [0.0; K];
            for i in lo..hi {
                f(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut out = [0.0; K];
    let mut column = Vec::with_capacity(partials.len());
    for (k, slot) in out.iter_mut().enumerate() {
        column.clear();
        column.extend(partials.iter().map(|p| p[k]));
        *slot = pairwise_sum(&column);
    }
    out
}

/// `k` simultaneous sums with `k` known only at run time.
pub fn par_sum_vec<F>(n: usize, k: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let partials: Vec<Vec<f64>> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let mut acc = vec![0.0; k];
            for i in lo..hi {
                f(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut column = Vec::with_capacity(partials.len());
    (0..k)
        .map(|j| {
            column.clear();
            column.extend(partials.iter().map(|p| p[j]));
            pairwise_sum(&column)
        })
        .collect()
}
