use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "phonon-ecp", version, about = "Phonon entanglement concentration simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Bell,
    Ghz,
    Generate,
    Papd,
    Sweep,
    Montecarlo,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concentrate two partially entangled phonon pairs into one Bell pair
    Bell(Flags),
    /// Concentrate two partially entangled phonon triples into one GHZ state
    Ghz(Flags),
    /// Herald a remote phonon Bell pair from two pumped nodes
    Generate(Flags),
    /// Photon arrival probability density curves
    Papd(Flags),
    /// Simulated against closed-form herald probability over a grid
    Sweep(Flags),
    /// Repeated sampled runs with optional detector dark counts
    Montecarlo(Flags),
}

impl Command {
    pub fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Bell(f) => (CommandKind::Bell, f),
            Command::Ghz(f) => (CommandKind::Ghz, f),
            Command::Generate(f) => (CommandKind::Generate, f),
            Command::Papd(f) => (CommandKind::Papd, f),
            Command::Sweep(f) => (CommandKind::Sweep, f),
            Command::Montecarlo(f) => (CommandKind::Montecarlo, f),
        }
    }
}

impl CommandKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandKind::Bell => "bell",
            CommandKind::Ghz => "ghz",
            CommandKind::Generate => "generate",
            CommandKind::Papd => "papd",
            CommandKind::Sweep => "sweep",
            CommandKind::Montecarlo => "montecarlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every subcommand. Each one overrides the matching key of
/// the `--config` file.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// key=value file; flags take precedence over its entries
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// RNG seed for sampled runs
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the data here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Enumerate every outcome instead of sampling one
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Interaction time as g·t (takes precedence over --t)
    #[arg(long)]
    pub gt: Option<f64>,
    /// Interaction time in seconds
    #[arg(long)]
    pub t: Option<f64>,
    /// Amplitude of the first pattern, e.g. 0.8 or 0.6+0.2i
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Amplitude of the second pattern; defaults to sqrt(1-|alpha|^2)
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// omega_m/kappa values for the arrival density curves
    #[arg(long, value_delimiter = ',')]
    pub ratios: Option<Vec<f64>>,
    /// Detector dark-count rate in Hz
    #[arg(long, value_name = "HZ")]
    pub dark_rate: Option<f64>,
    /// Turn on dark counts in montecarlo runs
    #[arg(long)]
    pub noise: bool,
    /// Heralding window in seconds (default 1/kappa)
    #[arg(long)]
    pub window: Option<f64>,
    /// Pipeline for montecarlo and sweep: bell or ghz
    #[arg(long)]
    pub pipeline: Option<String>,
    /// Pair-scattering probability per pump pulse
    #[arg(long)]
    pub p_p: Option<f64>,
    /// Herald on one detector only: d6 or d7
    #[arg(long)]
    pub detector: Option<String>,
    /// Keep two-pair emission terms in remote generation
    #[arg(long)]
    pub second_order: bool,
    /// Largest g·t/2π on the arrival density grid
    #[arg(long)]
    pub t_p_max: Option<f64>,
    /// Spacing of the arrival density grid
    #[arg(long)]
    pub t_p_step: Option<f64>,
    /// |alpha|^2 values for sweep
    #[arg(long, value_delimiter = ',')]
    pub alpha_sq: Option<Vec<f64>>,
    /// g·t values for sweep
    #[arg(long, value_delimiter = ',')]
    pub gt_list: Option<Vec<f64>>,
}
