//! A small Monte Carlo benchmark of the estimator over the impulsive weight.

use gsnoise::estimator::{mse_benchmark, EstimationConfig};
use gsnoise::io::bench_csv;
use gsnoise::model::presets;

fn main() {
    let cfg = EstimationConfig::default();
    let mut rows = Vec::new();
    for rho in [0.5, 0.9, 1.0] {
        let truth = presets::study(1.2, rho, presets::sigma_p2());
        let table = mse_benchmark(&truth, 4, 50_000, &cfg, 11).unwrap();
        println!(
            "rho {rho}: failures {}/{} by stage {:?}, MSE sigma {:.2e}",
            table.failures, table.rounds, table.failure_stages, table.sigma_tilde
        );
        rows.push((1.2, rho, 50_000, table));
    }
    println!("\n{}", bench_csv(&rows));
}
