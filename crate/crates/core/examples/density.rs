//! Evaluate the joint density, characteristic function, marginal and moments.

use gsnoise::math::SpdMatrix;
use gsnoise::model::{abs_moment, cf, degrade, marginal_pdf, pdf, pdf_at_origin, presets, GsParams};

fn main() -> gsnoise::Result<()> {
    let params = presets::study(1.5, 0.5, presets::sigma_p2());
    println!("case: {}", degrade(&params).as_str());
    println!("k1 = {:.6e}, k2 = {:.6e}", params.k1(), params.k2());
    println!("f(0) = {:.6e}", pdf_at_origin(&params));
    for n in [[0.0, 0.0], [1.0, 1.0], [5.0, -5.0], [40.0, 30.0]] {
        println!("pdf({n:?}) = {:.6e}", pdf(&params, &n)?);
    }
    for t in [[0.1, 0.1], [0.3, -0.2], [1.0, 0.0]] {
        println!("cf({t:?}) = {:.6}", cf(&params, &t, 1e-12)?);
    }

    let m = params.marginal();
    println!("\nmarginal of the last sample");
    for x in [0.0, 2.0, 10.0, 50.0] {
        println!("  f({x}) = {:.6e}", marginal_pdf(&m, x));
    }
    for r in [0.5, 1.0, 1.4] {
        println!("  E|N|^{r} = {:.5}", abs_moment(&m, r)?);
    }

    println!("\nspecial cases");
    let white = SpdMatrix::identity(3);
    for (name, p) in [
        ("rho = 1", GsParams::new(1.5, 2.0, 2.0, 1.0, presets::sigma_p5())?),
        ("rho = 0", GsParams::new(1.5, 2.0, 2.0, 0.0, presets::sigma_p5())?),
        ("identity sigma, p = 3", GsParams::new(1.5, 2.0, 2.0, 0.5, white)?),
    ] {
        println!("  {name}: {}", degrade(&p).as_str());
    }
    Ok(())
}
