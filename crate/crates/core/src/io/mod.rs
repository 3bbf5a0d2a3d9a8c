//! File formats: parameter and benchmark documents (TOML), sample files, reports
//! and CSV tables.

mod bench;
mod params;
mod report;
mod samples;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::GsError;

pub use bench::{bench_csv, read_bench_config, BenchConfig};
pub use params::{params_to_toml, read_params, read_params_str, write_params, ParamsFile};
pub use report::report_to_toml;
pub use samples::{read_samples, read_text_samples, write_samples, SampleFormat};

pub use crate::features::ClusterFeatures;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input; the message names the line or field.
    #[error("{0}")]
    Parse(String),

    /// Well-formed input with an invalid value.
    #[error("{0}")]
    Domain(#[from] GsError),
}

impl IoError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        IoError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// 17 significant digits in scientific form, which reads back as the same double.
/// Non-finite values use the TOML spellings.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// Three CSV blocks separated by blank lines: amplitude density, ICL mass, CIL mass.
pub fn features_csv(f: &ClusterFeatures) -> String {
    let mut out = String::new();
    out.push_str("threshold,n_clusters,in_range\n");
    out.push_str(&format!("{},{},{}\n\n", fmt_f64(f.threshold), f.n_clusters, f.in_range));
    out.push_str("bin_lo,bin_hi,density\n");
    let edges = f.spec.edges();
    for (i, d) in f.density.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(edges[i]),
            fmt_f64(edges[i + 1]),
            fmt_f64(*d)
        ));
    }
    for (name, counts, mass) in [
        ("icl", &f.icl_counts, f.icl_mass()),
        ("cil", &f.cil_counts, f.cil_mass()),
    ] {
        out.push_str(&format!("\n{name}_length,count,mass\n"));
        for (k, c) in counts {
            out.push_str(&format!("{k},{c},{}\n", fmt_f64(mass[k])));
        }
    }
    out
}
