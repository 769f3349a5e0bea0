//! `epv`: preprocess match events, fit the mixture model, and export
//! surfaces and player ratings.
//!
//! Exit codes: 0 success, 1 usage, 2 data error, 3 artifact mismatch.

// stdout may be a closed pipe (`epv rate ... | head`); output is best effort
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

macro_rules! say_raw {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($arg)*);
    }};
}

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{RunConfig, SamplerFlags};

#[derive(Debug, Parser)]
#[command(
    name = "epv",
    version,
    about = "Possession-value mixture model pipeline"
)]
struct Cli {
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, env = "EPV_OUT_DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Turn raw events into labelled actions.
    Preprocess(PreprocessArgs),
    /// Fit the mixture model and persist the posterior.
    Fit(FitArgs),
    /// Derive a team prior from a league posterior.
    DerivePriors(DeriveArgs),
    /// Export probability and EPV surfaces, optionally against a league model.
    Surface(SurfaceArgs),
    /// Actual-vs-expected player ratings.
    Rate(RateArgs),
    /// Generate synthetic data from a known ground truth.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    /// Raw event CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// The input already holds labelled actions; validate and rewrite it.
    #[arg(long)]
    pub pre_segmented: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Actions CSV from `preprocess` or `synth`.
    #[arg(long)]
    pub actions: PathBuf,
    /// Prior table; defaults to the built-in league prior.
    #[arg(long)]
    pub prior: Option<PathBuf>,
    /// `league`, `<team>:attack` or `<team>:defence`.
    #[arg(long)]
    pub subset: Option<String>,
    /// Posterior directory; defaults to `<out>/posterior_<subset>`.
    #[arg(long)]
    pub posterior_dir: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub chains: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long)]
    pub thin: Option<usize>,
    #[arg(long)]
    pub rhat_threshold: Option<f64>,
}

impl FitArgs {
    fn sampler_flags(&self) -> SamplerFlags {
        SamplerFlags {
            chains: self.chains,
            iterations: self.iters,
            burn_in: self.burn_in,
            thinning: self.thin,
            rhat_threshold: self.rhat_threshold,
        }
    }
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    /// League posterior directory.
    #[arg(long)]
    pub posterior: PathBuf,
    /// Output file; defaults to `<out>/team_prior.csv`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Side {
    Attack,
    Defence,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SdChoice {
    Printed,
    Propagated,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Posterior directory to render.
    #[arg(long)]
    pub posterior: PathBuf,
    /// League posterior directory or league grid CSV to difference against.
    #[arg(long)]
    pub league: Option<PathBuf>,
    /// Which team model the posterior is; sets the favourable sign.
    #[arg(long, value_enum, default_value = "attack")]
    pub side: Side,
    /// Grid spacing in metres.
    #[arg(long)]
    pub resolution: Option<f64>,
    #[arg(long, value_enum)]
    pub sd_formula: Option<SdChoice>,
    /// Also write PNG heatmaps.
    #[arg(long)]
    pub png: bool,
    /// File name stem for the outputs.
    #[arg(long, default_value = "surface")]
    pub stem: String,
    /// Actions CSV whose locations are binned into `density.csv`.
    #[arg(long)]
    pub density: Option<PathBuf>,
    #[arg(long, default_value_t = 5.0)]
    pub bin: f64,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long)]
    pub actions: PathBuf,
    /// League posterior directory.
    #[arg(long)]
    pub posterior: PathBuf,
    /// Rows printed to the terminal.
    #[arg(long)]
    pub top_k: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Law {
    Uniform,
    Central,
    Nodes,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// JSON synthetic spec; flags override its fields.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Ground-truth table in the prior layout with rows on the simplex.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Draw the ground truth from the league prior with this seed.
    #[arg(long, conflicts_with = "truth")]
    pub truth_seed: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub law: Option<Law>,
    #[arg(long)]
    pub teams: Option<usize>,
    #[arg(long)]
    pub fixtures: Option<usize>,
    #[arg(long)]
    pub actions_per_possession: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &epv_core::Error) -> u8 {
    if e.is_mismatch() {
        3
    } else if matches!(e, epv_core::Error::Config(_)) {
        1
    } else {
        2
    }
}

fn run(cli: Cli) -> epv_core::Result<()> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let out = cfg.out_dir(cli.out);
    match cli.command {
        Command::Preprocess(a) => commands::preprocess(&a, &out),
        Command::Fit(a) => commands::fit(&a, &cfg, &out),
        Command::DerivePriors(a) => commands::derive_priors(&a, &out),
        Command::Surface(a) => commands::surface(&a, &cfg, &out),
        Command::Rate(a) => commands::rate(&a, &cfg, &out),
        Command::Synth(a) => commands::synth(&a, &cfg, &out),
    }
}
