use std::fmt::Write;

use crate::estimator::EstimationReport;

use super::fmt_f64;

fn list(v: impl IntoIterator<Item = f64>) -> String {
    let items: Vec<String> = v.into_iter().map(fmt_f64).collect();
    format!("[{}]", items.join(", "))
}

fn rows(v: &[(f64, f64)]) -> String {
    let items: Vec<String> = v.iter().map(|&(a, b)| list([a, b])).collect();
    format!("[{}]", items.join(", "))
}

/// The report as a TOML document, diagnostics in a `[diagnostics]` table.
pub fn report_to_toml(r: &EstimationReport) -> String {
    let mut s = String::new();
    let w = &mut s;
    writeln!(w, "p_hat = {}", r.p_hat).unwrap();
    writeln!(w, "rho_hat = {}", fmt_f64(r.rho_hat)).unwrap();
    writeln!(w, "gamma_g_hat = {}", fmt_f64(r.gamma_g_hat)).unwrap();
    if let Some(a) = r.alpha_hat {
        writeln!(w, "alpha_hat = {}", fmt_f64(a)).unwrap();
    }
    if let Some(g) = r.gamma_s_hat {
        writeln!(w, "gamma_s_hat = {}", fmt_f64(g)).unwrap();
    }
    writeln!(w, "case = \"{}\"", r.case.as_str()).unwrap();
    if let Some(d) = r.degenerate {
        writeln!(w, "degenerate = \"{}\"", d.as_str()).unwrap();
    }
    writeln!(w, "sigma_hat = {}", list(r.sigma_hat.row_major().iter().cloned())).unwrap();

    let d = &r.diagnostics;
    writeln!(w, "\n[diagnostics]").unwrap();
    writeln!(w, "lag_ratios = {}", list(d.lag_ratios.iter().cloned())).unwrap();
    if let Some(p) = &d.probes {
        let t: Vec<String> = p.t.iter().map(|v| list(v.iter().cloned())).collect();
        writeln!(w, "probe_scale = {}", fmt_f64(d.probe_scale)).unwrap();
        writeln!(w, "probes = [{}]", t.join(", ")).unwrap();
        writeln!(w, "probe_norms2 = {}", list(p.norms2())).unwrap();
    }
    if !d.ecf.is_empty() {
        writeln!(w, "ecf = {}", list(d.ecf.iter().cloned())).unwrap();
        writeln!(w, "ecf_sin = {}", list(d.ecf_sin.iter().cloned())).unwrap();
    }
    if let Some(g) = &d.gamma {
        writeln!(w, "ecf_ratio = {}", fmt_f64(g.ratio)).unwrap();
        writeln!(w, "g_residual = {}", fmt_f64(g.residual)).unwrap();
        writeln!(w, "bisection_iterations = {}", g.iterations).unwrap();
        writeln!(w, "bisection_bracket = {}", list([g.bracket.0, g.bracket.1])).unwrap();
        writeln!(w, "g_monotone = {}", g.monotone).unwrap();
    }
    if let Some(raw) = d.rho_raw {
        writeln!(w, "rho_raw = {}", fmt_f64(raw)).unwrap();
        writeln!(w, "rho_clamped = {}", d.rho_clamped).unwrap();
    }
    for (k, v) in [
        ("bandwidth", d.bandwidth),
        ("origin_density", d.origin_density),
        ("gaussian_origin_term", d.gaussian_origin_term),
    ] {
        if let Some(v) = v {
            writeln!(w, "{k} = {}", fmt_f64(v)).unwrap();
        }
    }
    if !d.ml_grid.is_empty() {
        writeln!(w, "ml_grid = {}", rows(&d.ml_grid)).unwrap();
        writeln!(w, "ml_refined = {}", rows(&d.ml_refined)).unwrap();
    }
    if let Some(c) = &d.white_check {
        writeln!(w, "\n[diagnostics.white_check]").unwrap();
        writeln!(w, "t0 = {}", fmt_f64(c.t0)).unwrap();
        writeln!(w, "tolerance = {}", fmt_f64(c.tolerance)).unwrap();
        writeln!(w, "passed = {}", c.passed).unwrap();
        let pts: Vec<String> = c.points.iter().map(|&(a, b, g)| list([a, b, g])).collect();
        writeln!(w, "points = [{}]", pts.join(", ")).unwrap();
    }
    s
}
