//! Generalized SNR over the tail index and impulsive scale.

use gsnoise::model::{gsnr_db, presets, GsParams};

fn main() -> gsnoise::Result<()> {
    let signal_power = 10.0;
    println!("signal power {signal_power}, gamma_g = 2");
    println!("{:>6} {:>9} {:>9} {:>9}", "alpha", "gs=0.5", "gs=2", "gs=8");
    for alpha in [0.5, 1.0, 1.2, 1.5, 1.8] {
        let row: Vec<String> = [0.5, 2.0, 8.0]
            .iter()
            .map(|&gs| {
                let p = GsParams::new(alpha, 2.0, gs, 0.5, presets::sigma_p2()).unwrap();
                format!("{:>9.3}", gsnr_db(&p, signal_power).unwrap())
            })
            .collect();
        println!("{alpha:>6} {}", row.join(" "));
    }
    Ok(())
}
