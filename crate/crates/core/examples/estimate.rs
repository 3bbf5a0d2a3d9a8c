//! Fit all parameters from a sequence, with and without a known covariance.

use gsnoise::estimator::{estimate_all, estimate_with_covariance, EstimationConfig, EstimationReport};
use gsnoise::math::RandomStream;
use gsnoise::model::presets;
use gsnoise::sampler::{sample_gs_sequence, sample_wgn};

fn show(label: &str, r: &EstimationReport) {
    println!(
        "{label}: p={} rho={:.3} gamma_g={:.3} alpha={} gamma_s={} case={} degenerate={:?}",
        r.p_hat,
        r.rho_hat,
        r.gamma_g_hat,
        r.alpha_hat.map_or("-".into(), |a| format!("{a:.3}")),
        r.gamma_s_hat.map_or("-".into(), |g| format!("{g:.3}")),
        r.case.as_str(),
        r.degenerate.map(|d| d.as_str()),
    );
}

fn main() {
    let cfg = EstimationConfig::default();
    let n = 1_000_000;

    let wgn = sample_wgn(2.0, n, &mut RandomStream::new(3, 0)).unwrap();
    match estimate_all(&wgn, &cfg) {
        Ok(r) => show("white gaussian", &r),
        Err(e) => println!("white gaussian: {e}"),
    }

    let truth = presets::study(1.2, 0.75, presets::sigma_p5());
    let seq = sample_gs_sequence(&truth, n, &mut RandomStream::new(3, 1)).unwrap();
    println!("truth: p=5 rho=0.75 gamma_g=2 alpha=1.2 gamma_s=2");
    match estimate_all(&seq, &cfg) {
        Ok(r) => show("blind", &r),
        // heavy tails can break the covariance stage; the error names the stage
        Err(e) => println!("blind: {e}"),
    }
    match estimate_with_covariance(&seq, presets::sigma_p5(), &cfg) {
        Ok(r) => {
            show("known covariance", &r);
            let d = &r.diagnostics;
            println!("  probe scale {:.4}, ecf {:?}", d.probe_scale, d.ecf);
            println!("  origin density {:?}, bandwidth {:?}", d.origin_density, d.bandwidth);
        }
        Err(e) => println!("known covariance: {e}"),
    }
}
