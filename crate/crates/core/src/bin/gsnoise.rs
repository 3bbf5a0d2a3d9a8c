use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gsnoise::estimator::{estimate_all, mse_benchmark, EstimationConfig, EstimationError};
use gsnoise::features::{default_threshold, extract_features, FeatureError, HistogramSpec};
use gsnoise::io::{self, IoError};
use gsnoise::math::{RandomStream, SpdMatrix};
use gsnoise::model::{gsnr_db, GsParams};
use gsnoise::sampler::{sample_asg_sequence, sample_gs_sequence, sample_wgn};
use gsnoise::GsError;

#[derive(Parser)]
#[command(
    name = "gsnoise",
    version,
    about = "Gaussian-Student bursty noise: generate, estimate, analyse"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Gs,
    Wgn,
    Asg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a noise sequence (.f64 binary, anything else text).
    Generate {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        n: usize,
        /// Defaults to the params file seed, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "gs")]
        model: Model,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit all parameters and write the report.
    Estimate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Covariance threshold T.
        #[arg(long)]
        threshold: Option<f64>,
        /// TOML file with estimation settings.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Amplitude histogram and cluster statistics as CSV.
    Features {
        #[arg(long = "in")]
        input: PathBuf,
        /// Impulse threshold A_T; defaults to 10 robust scales.
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        bins: usize,
        #[arg(long, default_value_t = -500.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 500.0, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-parameter MSE over an (alpha, rho) grid.
    MseBench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generalized SNR in dB.
    Gsnr {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        signal_power: f64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(m: impl ToString) -> Self {
        Self {
            code: 2,
            message: m.to_string(),
        }
    }
    fn domain(m: impl ToString) -> Self {
        Self {
            code: 3,
            message: m.to_string(),
        }
    }
    fn estimation(m: impl ToString) -> Self {
        Self {
            code: 4,
            message: m.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Domain(_) => Failure::domain(e),
            _ => Failure::input(e),
        }
    }
}

impl From<GsError> for Failure {
    fn from(e: GsError) -> Self {
        Failure::domain(e)
    }
}

impl From<FeatureError> for Failure {
    fn from(e: FeatureError) -> Self {
        Failure::domain(e)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn estimation_config(path: &Option<PathBuf>, threshold: Option<f64>) -> Result<EstimationConfig, Failure> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            toml::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?
        }
        None => EstimationConfig::default(),
    };
    if let Some(t) = threshold {
        cfg.cov_threshold = t;
    }
    cfg.validate().map_err(Failure::domain)?;
    Ok(cfg)
}

fn generate(params: &Path, n: usize, seed: Option<u64>, model: Model, out: &Path) -> Result<(), Failure> {
    let (params, file_seed) = io::read_params(params)?;
    let mut rng = RandomStream::new(seed.or(file_seed).unwrap_or(0), 0);
    let seq = match model {
        Model::Gs => sample_gs_sequence(&params, n, &mut rng)?,
        Model::Wgn => sample_wgn(params.gamma_g(), n, &mut rng)?,
        Model::Asg => sample_asg_sequence(params.alpha(), params.sigma(), n, &mut rng)?,
    };
    io::write_samples(out, seq.samples())?;
    Ok(())
}

fn mse_bench(config: &Path, rounds: Option<usize>, out: &Option<PathBuf>) -> Result<(), Failure> {
    let cfg = io::read_bench_config(config)?;
    let p = cfg.p()?;
    let sigma = SpdMatrix::new(p, cfg.sigma_tilde.clone())?;
    let rounds = rounds.unwrap_or(cfg.rounds);
    cfg.estimation.validate().map_err(Failure::domain)?;
    let mut rows = Vec::new();
    for &alpha in &cfg.alphas {
        for &rho in &cfg.rhos {
            let truth = GsParams::new(alpha, cfg.gamma_g, cfg.gamma_s, rho, sigma.clone())?;
            for &n in &cfg.samples_per_round {
                let table = mse_benchmark(&truth, rounds, n, &cfg.estimation, cfg.seed).map_err(|e| match e {
                    EstimationError::Config { .. } => Failure::domain(e),
                    other => Failure::estimation(other),
                })?;
                rows.push((alpha, rho, n, table));
            }
        }
    }
    emit(out, &io::bench_csv(&rows))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Generate {
            params,
            n,
            seed,
            model,
            out,
        } => generate(&params, n, seed, model, &out),
        Cmd::Estimate {
            input,
            threshold,
            config,
            out,
        } => {
            let cfg = estimation_config(&config, threshold)?;
            let seq = io::read_samples(&input)?;
            let report =
                estimate_all(&seq, &cfg).map_err(|e| Failure::estimation(format!("estimation failed at {e}")))?;
            emit(&out, &io::report_to_toml(&report))
        }
        Cmd::Features {
            input,
            threshold,
            bins,
            lo,
            hi,
            out,
        } => {
            let seq = io::read_samples(&input)?;
            let spec = HistogramSpec::new(lo, hi, bins)?;
            let a_t = threshold.unwrap_or_else(|| default_threshold(&seq));
            let f = extract_features(&seq, a_t, spec)?;
            emit(&out, &io::features_csv(&f))
        }
        Cmd::MseBench { config, rounds, out } => mse_bench(&config, rounds, &out),
        Cmd::Gsnr { params, signal_power } => {
            let (params, _) = io::read_params(&params)?;
            println!("{}", gsnr_db(&params, signal_power)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("gsnoise: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("gsnoise: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
