//! Amplitude histogram and impulse cluster statistics of three noise models.

use gsnoise::features::{extract_features, feature_distance, ClusterFeatures, HistogramSpec};
use gsnoise::math::RandomStream;
use gsnoise::model::presets;
use gsnoise::sampler::{sample_asg_sequence, sample_gs_sequence, sample_wgn};

fn show(name: &str, f: &ClusterFeatures) {
    println!(
        "{name:>4}: clusters {:>6}  mean ICL {:>6.3}  mean CIL {:>9.2}  in range {}",
        f.n_clusters,
        f.mean_icl().unwrap_or(0.0),
        f.mean_cil().unwrap_or(0.0),
        f.in_range
    );
}

fn main() {
    let n = 500_000;
    let a_t = 20.0;
    let spec = HistogramSpec::default();
    let params = presets::study(1.2, 0.5, presets::sigma_p5());
    let gs = sample_gs_sequence(&params, n, &mut RandomStream::new(5, 0)).unwrap();
    let asg = sample_asg_sequence(1.2, params.sigma(), n, &mut RandomStream::new(5, 1)).unwrap();
    let wgn = sample_wgn(2.0, n, &mut RandomStream::new(5, 2)).unwrap();
    let fs: Vec<_> = [&gs, &asg, &wgn]
        .iter()
        .map(|s| extract_features(s, a_t, spec).unwrap())
        .collect();
    for (name, f) in ["gs", "asg", "wgn"].iter().zip(&fs) {
        show(name, f);
    }

    println!("\nICL distribution of gs:");
    for (len, mass) in fs[0].icl_mass().iter().take(8) {
        println!("  {len:>2}: {mass:.4}");
    }

    let d = feature_distance(&fs[0], &fs[1]).unwrap();
    println!(
        "\ngs vs asg: amplitude {:.4}, tail {:.4}, ICL {:.4}, CIL {:.4}",
        d.amplitude, d.amplitude_tail, d.icl, d.cil
    );
    let d = feature_distance(&fs[0], &fs[2]).unwrap();
    println!(
        "gs vs wgn: amplitude {:.4}, tail {:.4}, ICL {:.4}, CIL {:.4}",
        d.amplitude, d.amplitude_tail, d.icl, d.cil
    );

    for p in [(presets::sigma_p2(), 2), (presets::sigma_p5(), 5)] {
        let s = sample_gs_sequence(&presets::study(1.2, 0.5, p.0), n, &mut RandomStream::new(5, 3)).unwrap();
        let f = extract_features(&s, a_t, spec).unwrap();
        println!("memory order {}: mean ICL {:.3}", p.1, f.mean_icl().unwrap_or(0.0));
    }
}
