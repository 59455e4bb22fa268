mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use harmonic_core::config::ModelConfig;
use harmonic_core::two_radius::{LBox, DEFAULT_SEED};
use harmonic_core::{DensityModel, Error};

#[derive(Debug, Parser)]
#[command(name = "harmonic", version, about = "Reproducible experiments on harmonic spaces given by their volume density")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// φ_λ and φ_λ' on [0, rmax] as CSV
    Phi(PhiArgs),
    /// Complex zeros in L of the sphere, mean-value or ball target at one radius
    Zeros(ZerosArgs),
    /// Radii r2 whose zero set meets the one at r1
    BadRadii(BadRadiiArgs),
    /// Check that two radii have no common zero inside a box
    Certify(CertifyArgs),
    /// Abel transform of a radial profile, or its inverse with --inverse
    Abel(TransformArgs),
    /// Spherical Fourier transform of a radial profile
    Fourier(FourierArgs),
    /// Radial convolution through the Abel transform
    Convolve(TransformArgs),
    /// Radial wave equation from a bump at rest
    Wave(WaveArgs),
    /// Klein-Gordon equation on the line from a bump at rest
    Kg(KgArgs),
    /// Radial heat equation from a narrow bump
    Heat(HeatArgs),
    /// Spectral multiplier of the heat flow against e^{-(λ²+H²/4)t}
    HeatCheck(HeatCheckArgs),
    /// Volume growth, area over volume and the bottom of the spectrum
    Cheeger(CheegerArgs),
    /// Sphere-average identities on the plane or the hyperbolic plane
    GeoCheck(GeoArgs),
    /// Full acceptance battery
    Suite(SuiteArgs),
    /// Re-run the command recorded in an output file and compare bytes
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    /// euclidean, hyperbolic, damek-ricci or custom
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// θ(r) for a custom model, e.g. "sinh(r)^2"
    #[arg(long)]
    pub theta: Option<String>,
    /// Model file with `key = value` lines
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl ModelArgs {
    pub fn build(&self) -> Result<DensityModel, Error> {
        let mut cfg = match &self.config {
            Some(p) => ModelConfig::load(p)?,
            None => ModelConfig::new(
                self.model
                    .as_deref()
                    .ok_or_else(|| Error::Config("give --model or --config".into()))?,
            ),
        };
        if let Some(m) = &self.model {
            cfg.model = m.clone();
        }
        cfg.n = self.n.or(cfg.n);
        cfg.m = self.m.or(cfg.m);
        cfg.k = self.k.or(cfg.k);
        cfg.theta = self.theta.clone().or(cfg.theta);
        // the flat line and 3-space are common enough to default n
        if cfg.model == "euclidean" && cfg.n.is_none() {
            cfg.n = Some(0);
        }
        cfg.build()
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PhiArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// λ as `re,im`
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: [f64; 2],
    #[arg(long)]
    pub rmax: f64,
    #[arg(long, default_value_t = 400)]
    pub intervals: usize,
    /// series or ode
    #[arg(long, default_value = "auto")]
    pub method: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TargetArgs {
    /// sphere, mvp or ball
    #[arg(long, default_value = "sphere")]
    pub target: String,
    /// Search box `reL0,imL0,reL1,imL1`
    #[arg(long = "box", value_parser = parse_box, allow_hyphen_values = true)]
    pub lbox: Option<[f64; 4]>,
}

impl TargetArgs {
    pub fn lbox(&self) -> LBox {
        match self.lbox {
            Some([a, b, c, d]) => LBox::new(a.min(c), a.max(c), b.min(d), b.max(d)),
            None => LBox::default(),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZerosArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub r: f64,
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, default_value_t = 2000)]
    pub max_zeros: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BadRadiiArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub r1: f64,
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, default_value_t = 6.0)]
    pub rmax: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub r1: f64,
    #[arg(long)]
    pub r2: f64,
    #[command(flatten)]
    pub target: TargetArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TransformArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Input CSV: `r, value` (or `s, value` with --inverse); a bump when absent
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Second radial input for convolve
    #[arg(long = "in2")]
    pub input2: Option<PathBuf>,
    /// Width of the default Gaussian bump
    #[arg(long, default_value_t = 0.3)]
    pub width: f64,
    /// abel: map a line profile back to a radial one
    #[arg(long)]
    pub inverse: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FourierArgs {
    #[command(flatten)]
    pub transform: TransformArgs,
    #[arg(long, default_value_t = 10.0)]
    pub lmax: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WaveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub t: f64,
    /// Width of the initial Gaussian bump
    #[arg(long, default_value_t = 0.3)]
    pub width: f64,
    #[arg(long, default_value_t = 0.0025)]
    pub dr: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KgArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 0.3)]
    pub width: f64,
    #[arg(long, default_value_t = 512)]
    pub intervals: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HeatArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 0.05)]
    pub width: f64,
    #[arg(long, default_value_t = 0.002)]
    pub dr: f64,
    #[arg(long, default_value_t = 0.001)]
    pub dt: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HeatCheckArgs {
    #[command(flatten)]
    pub heat: HeatArgs,
    /// Largest λ checked; λ runs over an even grid from 0
    #[arg(long, default_value_t = 2.0)]
    pub lmax: f64,
    #[arg(long, default_value_t = 21)]
    pub samples: usize,
    /// Relative tolerance on the multiplier
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheegerArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 40.0)]
    pub rmax: f64,
    /// Also write the growth table `r, log_vol_over_r, area_over_vol, theta_ratio`
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GeoArgs {
    /// plane or h2
    #[arg(long, default_value = "plane")]
    pub space: String,
    /// displacement, projector, selfadjoint or idempotence
    #[arg(long, default_value = "displacement")]
    pub test: String,
    /// Spectral parameter for the displacement test
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Points per circle
    #[arg(long, default_value_t = 64)]
    pub order: usize,
    /// Residual tolerance; 1e-10 for idempotence and 1e-6 otherwise
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SuiteArgs {
    /// Smaller battery that still covers every criterion
    #[arg(long)]
    pub quick: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReplayArgs {
    /// A CSV or JSON file written by this program
    pub file: PathBuf,
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got `{s}`"));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| format!("`{p}` is not a number"))?;
    }
    Ok(out)
}

fn parse_complex(s: &str) -> Result<[f64; 2], String> {
    // a bare real number is accepted too
    match s.parse::<f64>() {
        Ok(x) => Ok([x, 0.0]),
        Err(_) => parse_floats::<2>(s),
    }
}

fn parse_box(s: &str) -> Result<[f64; 4], String> {
    parse_floats::<4>(s)
}

fn init_threads() {
    if let Some(n) = std::env::var("HARMONIC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    init_threads();
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let args = argv[1..].to_vec();
    match commands::run(&cli.command, &args) {
        Ok(outcome) => {
            for a in &outcome.artifacts {
                if let Err(e) = a.write() {
                    eprintln!("{}", diagnostic("io", &e.to_string()));
                    return ExitCode::from(1);
                }
            }
            if outcome.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", diagnostic(e.kind(), &e.to_string()));
            ExitCode::from(1)
        }
    }
}

fn diagnostic(kind: &str, message: &str) -> String {
    output::to_json_string(&json!({"error": {"kind": kind, "message": message}}))
        .trim_end()
        .to_string()
}
