//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::verify::Case;

macro_rules! config_args {
    ($($field:ident, $long:literal $(| $alias:literal)?, $help:literal;)*) => {
        /// One flag per configuration key.
        #[derive(Debug, Default, Clone, Args)]
        pub struct ConfigArgs {
            $(
                #[arg(long = $long $(, alias = $alias)?, global = true, value_name = "VALUE",
                      help_heading = "Configuration", help = $help)]
                pub $field: Option<String>,
            )*
        }

        impl ConfigArgs {
            /// `(key, value)` for every flag given.
            pub fn overrides(&self) -> Vec<(&'static str, &str)> {
                let mut v = Vec::new();
                $(
                    if let Some(x) = &self.$field {
                        v.push((stringify!($field), x.as_str()));
                    }
                )*
                v
            }
        }
    };
}

config_args! {
    method, "method", "PSD estimator: auto, periodogram or welch";
    window, "window", "Welch segment length";
    overlap, "overlap", "Welch segment overlap in [0, 1)";
    fft_length, "fft-length" | "fft_length", "FFT length (power of two)";
    order, "order", "Cepstral order K";
    k_test, "k-test" | "k_test", "Coefficients per side used by the phase test";
    phase_tolerance, "phase-tolerance" | "phase_tolerance", "Relative energy below which a cepstrum side counts as zero";
    phase_epsilon, "phase-epsilon" | "phase_epsilon", "Absolute floor added to the phase-test energy";
    truncation, "truncation", "Observability truncation j for model subspace norms";
    rows, "rows", "Block rows i of data Hankel matrices";
    order_tolerance, "order-tolerance" | "order_tolerance", "Relative singular value cut for model order selection";
    data_tolerance, "data-tolerance" | "data_tolerance", "Relative tolerance for data-driven checks";
    model_tolerance, "model-tolerance" | "model_tolerance", "Absolute tolerance for model-based subspace checks";
    frequency_tolerance, "frequency-tolerance" | "frequency_tolerance", "Absolute tolerance for frequency-domain cepstral checks";
    cascade_tolerance, "cascade-tolerance" | "cascade_tolerance", "Absolute tolerance for the cascade check";
    white_noise_sigmas, "white-noise-sigmas" | "white_noise_sigmas", "Standard errors allowed in the white-noise check";
    seed, "seed", "Random seed";
    length, "length", "Generated signal length";
    response_length, "response-length" | "response_length", "Frequency grid size for model responses";
    damping, "damping", "Per-sample envelope of the example signals";
    format, "format", "Report format: json or text";
}

#[derive(Debug, Parser)]
#[command(
    name = "cepdist",
    version,
    about = "Cepstral distances, subspace-angle norms and phase-type tests"
)]
pub struct Cli {
    /// Flat TOML file of configuration keys.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub settings: ConfigArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    Cosine,
    Cepstral,
    Subspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LinkageArg {
    Single,
    Average,
    Complete,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a model, or write the example signals.
    Simulate(SimulateArgs),
    /// Write cepstral coefficients as CSV.
    Cepstrum(CepstrumArgs),
    /// Distance between two signal files.
    Distance(DistanceArgs),
    /// Classify the phase type of the system behind input/output data.
    Classify(ClassifyArgs),
    /// Check cepstral, subspace and closed-form norms against each other.
    Verify(VerifyArgs),
    /// Pairwise distance matrix of a directory of signal files.
    Distmat(DistmatArgs),
    /// Agglomerative clustering of a directory of signal files.
    Cluster(ClusterArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
pub struct SimulateArgs {
    /// Model JSON file.
    #[arg(long, group = "source", value_name = "FILE")]
    pub model: Option<PathBuf>,
    /// Write sine.csv, cosine.csv and noise.csv of the motivating example to DIR.
    #[arg(long, group = "source", value_name = "DIR")]
    pub example: Option<PathBuf>,
    /// impulse, white, step, zero, or a signal file.
    #[arg(long, default_value = "white")]
    pub input: String,
    /// Filter with the stable two-sided response instead of refusing unstable poles.
    #[arg(long)]
    pub two_sided: bool,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
pub struct CepstrumArgs {
    /// Signal file; a `t,u,y` file gives the transfer cepstrum.
    #[arg(group = "source")]
    pub file: Option<PathBuf>,
    /// Model JSON file; coefficients come from its roots.
    #[arg(long, group = "source", value_name = "FILE")]
    pub model: Option<PathBuf>,
    /// Complex instead of power cepstrum.
    #[arg(long)]
    pub complex: bool,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricArg::Cepstral)]
    pub metric: MetricArg,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
pub struct ClassifyArgs {
    /// A `t,u,y` file, or the input file when OUTPUT_FILE is given.
    #[arg(group = "source")]
    pub file: Option<PathBuf>,
    /// Output signal file.
    pub output_file: Option<PathBuf>,
    /// Classify a model from its exact frequency response.
    #[arg(long, group = "source", value_name = "FILE")]
    pub model: Option<PathBuf>,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value_t = Case::All)]
    pub case: Case,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistmatArgs {
    pub dir: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricArg::Cepstral)]
    pub metric: MetricArg,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    pub dir: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricArg::Cepstral)]
    pub metric: MetricArg,
    /// Number of clusters.
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = LinkageArg::Average)]
    pub linkage: LinkageArg,
    /// Also write the distance matrix CSV.
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<PathBuf>,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}
