//! `spdc`: joint spectra, Schmidt purity, filter convolution and wavelength
//! sweeps for group-velocity-matched SPDC crystals.
//!
//! Wavelengths on the command line are vacuum nanometres; pump bandwidths are
//! in rad/ps. Exit status: 0 ok, 2 usage or configuration, 3 physics domain,
//! 4 numerical failure.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spdc_core::{ErrorCategory, Objective};

#[derive(Parser, Debug)]
#[command(name = "spdc", version, about = "Spectral purity of SPDC photon pairs", long_about = None)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Model JSA or JSI at one degenerate wavelength, with its Schmidt decomposition.
    Simulate(SimulateArgs),
    /// Pump bandwidth maximizing P_JSA or P_JSI.
    Optimize(OptimizeArgs),
    /// Purities, ridge tilt and marginal widths across a wavelength range.
    Sweep(SweepArgs),
    /// Convolve a JSI with Gaussian bandpass filters on both arms.
    Convolve(ConvolveArgs),
    /// Purity, marginal widths and rates of a measured coincidence grid.
    Analyze(AnalyzeArgs),
    /// Noiseless synthetic measured grid from the filtered model.
    Synthesize(SynthesizeArgs),
    /// Print or write the built-in configuration.
    DefaultConfig(DefaultConfigArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// JSON with optional `crystal`, `pump` and `grid` sections; defaults to 30 mm PPKTP.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Degenerate signal/idler wavelength in nm [default: twice the pump wavelength].
    #[arg(long)]
    pub lambda0: Option<f64>,
    /// Grid points per axis [default: from config, 256].
    #[arg(long)]
    pub grid: Option<usize>,
    /// Grid half span in phase-matching bandwidths [default: from config, 5].
    #[arg(long)]
    pub span_widths: Option<f64>,
    /// Solve the poling period for degeneracy at this wavelength (nm) instead of lambda0.
    #[arg(long, conflicts_with = "keep_poling")]
    pub poling_at: Option<f64>,
    /// Use the poling period from the config unchanged.
    #[arg(long)]
    pub keep_poling: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Pump bandwidth sigma_p in rad/ps [default: from config].
    #[arg(long, conflicts_with = "optimize")]
    pub sigma: Option<f64>,
    /// Optimize sigma_p for this purity first (p_jsa | p_jsi).
    #[arg(long)]
    pub optimize: Option<Objective>,
    /// Spectrum to write and decompose (jsa | jsi) [default: jsa when optimizing p_jsa, else jsi].
    #[arg(long)]
    pub kind: Option<String>,
    /// Spectrum CSV (lambda_s_nm,lambda_i_nm,value).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Schmidt decomposition JSON.
    #[arg(long)]
    pub schmidt: Option<PathBuf>,
    /// Heatmap SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Purity to maximize (p_jsa | p_jsi).
    #[arg(long, default_value = "p_jsi")]
    pub objective: Objective,
    /// Result JSON [default: stdout only].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// First wavelength, nm.
    #[arg(long, default_value_t = 1460.0)]
    pub from: f64,
    /// Last wavelength, nm (inclusive).
    #[arg(long, default_value_t = 1675.0)]
    pub to: f64,
    #[arg(long, default_value_t = 5.0)]
    pub step: f64,
    /// Design wavelength: the poling period is solved here and, unless given,
    /// both pump bandwidths are optimized here.
    #[arg(long, default_value_t = 1584.0)]
    pub reference: f64,
    /// Re-solve the poling period at every wavelength instead of keeping one crystal.
    #[arg(long)]
    pub resolve_poling: bool,
    /// Pump bandwidth for P_JSA, rad/ps.
    #[arg(long)]
    pub sigma_jsa: Option<f64>,
    /// Pump bandwidth for P_JSI and the marginal widths, rad/ps.
    #[arg(long)]
    pub sigma_jsi: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub span_widths: Option<f64>,
    /// Sweep CSV [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Line chart SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConvolveArgs {
    /// Spectrum CSV as written by `simulate`.
    #[arg(long)]
    pub input: PathBuf,
    /// Interpret the input as an amplitude and square it first.
    #[arg(long)]
    pub amplitude: bool,
    /// Signal filter FWHM, nm.
    #[arg(long, default_value_t = spdc_core::instrument::REFERENCE_FILTER_FWHM_NM)]
    pub filter_fwhm: f64,
    /// Idler filter FWHM, nm [default: same as signal].
    #[arg(long)]
    pub idler_filter_fwhm: Option<f64>,
    /// Convolved JSI CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Schmidt decomposition JSON of the convolved JSI.
    #[arg(long)]
    pub schmidt: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Coincidence counts CSV (lambda_s_nm,lambda_i_nm,counts).
    pub counts: PathBuf,
    /// Sidecar JSON with `dwell_s` and optional `filters`.
    pub meta: PathBuf,
    /// Also compare against the model at this degenerate wavelength (nm).
    #[arg(long)]
    pub compare_at: Option<f64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model pump bandwidth for the comparison [default: from config].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Poling period for the comparison is solved here (nm) [default: the compared wavelength].
    #[arg(long)]
    pub poling_at: Option<f64>,
    /// Report JSON [default: stdout only].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SynthesizeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Filter positions per arm.
    #[arg(long, default_value_t = 60)]
    pub points: usize,
    /// Filter step, nm.
    #[arg(long, default_value_t = 0.1)]
    pub step_nm: f64,
    #[arg(long, default_value_t = spdc_core::instrument::REFERENCE_FILTER_FWHM_NM)]
    pub filter_fwhm: f64,
    /// Dwell time per position, s.
    #[arg(long, default_value_t = 10.0)]
    pub dwell: f64,
    /// Counts at the spectral peak.
    #[arg(long, default_value_t = 10750.0)]
    pub peak_counts: f64,
    /// Uniform background as a fraction of the peak.
    #[arg(long, default_value_t = 0.0)]
    pub background: f64,
    /// Counts CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Metadata JSON.
    #[arg(long)]
    pub meta: PathBuf,
}

#[derive(Args, Debug)]
pub struct DefaultConfigArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn exit_code(category: ErrorCategory) -> u8 {
    match category {
        ErrorCategory::Config => 2,
        ErrorCategory::Domain => 3,
        ErrorCategory::Numerical => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.category()))
        }
    }
}
