//! Parameter files, sample files and estimation reports on disk.

use gsnoise::estimator::{estimate_all, EstimationConfig};
use gsnoise::features::{default_threshold, extract_features, HistogramSpec};
use gsnoise::io::{
    features_csv, params_to_toml, read_params, read_samples, report_to_toml, write_params, write_samples,
};
use gsnoise::math::RandomStream;
use gsnoise::model::presets;
use gsnoise::sampler::{sample_gs_sequence, sample_wgn};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("gsnoise-file-io");
    std::fs::create_dir_all(&dir)?;

    let params = presets::study(1.2, 0.5, presets::sigma_p2());
    let path = dir.join("params.toml");
    write_params(&path, &params, Some(42))?;
    print!("{}", params_to_toml(&params, Some(42)));
    let (back, seed) = read_params(&path)?;
    assert_eq!(back, params);
    assert_eq!(seed, Some(42));

    // .f64 is raw little-endian binary, anything else one value per line
    let seq = sample_gs_sequence(&params, 10_000, &mut RandomStream::new(42, 0))?;
    for name in ["x.f64", "x.txt"] {
        let p = dir.join(name);
        write_samples(&p, seq.samples())?;
        assert_eq!(read_samples(&p)?.samples(), seq.samples());
        println!("{name}: {} bytes", std::fs::metadata(&p)?.len());
    }

    let f = extract_features(&seq, default_threshold(&seq), HistogramSpec::new(-50.0, 50.0, 10)?)?;
    println!("\n{}", features_csv(&f).lines().take(5).collect::<Vec<_>>().join("\n"));

    let wgn = sample_wgn(2.0, 100_000, &mut RandomStream::new(42, 1))?;
    let report = estimate_all(&wgn, &EstimationConfig::default())?;
    let text = report_to_toml(&report);
    println!("\n{}", text.lines().take(8).collect::<Vec<_>>().join("\n"));
    Ok(())
}
