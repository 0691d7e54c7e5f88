use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable holding the default directory for `tables`.
pub const OUT_DIR_ENV: &str = "REGREP_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "regrep",
    version,
    about = "Rational approximation of real algebraic numbers from matrix powers"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML file supplying defaults for any flag (keys are flag names).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Output layout.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Working precision floor in bits (at least 64).
    #[arg(long, global = true, value_name = "BITS")]
    pub precision_bits: Option<u32>,

    /// Worker threads for table grids.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    /// Write data to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Report elapsed wall-clock time on standard error.
    #[arg(long, global = true)]
    pub time: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Schedule {
    Linear,
    Geometric,
}

#[derive(Debug, Args, Default)]
pub struct PolyArgs {
    /// Polynomial as `u:u1,...,um` or `c:1,c_{m-1},...,c0`.
    #[arg(long)]
    pub poly: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct WeightArgs {
    /// Weights x_0,...,x_{m-1}.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct RatioArgs {
    /// Numerator entry `i,j` (1-based).
    #[arg(long)]
    pub num: Option<String>,

    /// Denominator entry `p,q` (1-based).
    #[arg(long)]
    pub den: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print M(x) as exact rationals, one matrix row per line.
    Repr {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        weights: WeightArgs,
    },
    /// Print M(x)^n as exact rationals.
    Power {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        weights: WeightArgs,
        /// Exponent.
        #[arg(long)]
        n: Option<String>,
    },
    /// Ratio sequence M^n_{num}/M^n_{den} + offset with errors and digit counts.
    Approx {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        weights: WeightArgs,
        #[command(flatten)]
        ratio: RatioArgs,
        /// Rational added to every ratio, or `auto`.
        #[arg(long, allow_hyphen_values = true)]
        offset: Option<String>,
        /// Exponents as a list `5,20,35` or a range `1..20`; with
        /// `--stride` these are step indices.
        #[arg(long)]
        n: Option<String>,
        /// Use N = M^stride instead of M.
        #[arg(long)]
        stride: Option<u64>,
        /// How steps walk the powers of N.
        #[arg(long, value_enum)]
        schedule: Option<Schedule>,
    },
    /// Dominance criterion c(x, alpha_k) and the gamma moduli.
    #[command(name = "c-ratio")]
    CRatio {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        weights: WeightArgs,
    },
    /// Predicted limits of entry ratios with rate constants.
    Limits {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        weights: WeightArgs,
        #[command(flatten)]
        ratio: RatioArgs,
    },
    /// Newton, Halley and Noor iterations in exact arithmetic.
    Compare {
        #[command(flatten)]
        poly: PolyArgs,
        /// Comma-separated subset of newton,halley,noor,chebyshev.
        #[arg(long)]
        methods: Option<String>,
        /// Starting point (rational).
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Number of steps.
        #[arg(long)]
        steps: Option<u64>,
        /// Stop before the denominator would exceed this many digits.
        #[arg(long)]
        digit_ceiling: Option<u64>,
    },
    /// Reproduce the published tables and write CSV files.
    Tables {
        /// Table id 1..7, or `all`.
        #[arg(long)]
        id: Option<String>,
        /// Output directory (default: $REGREP_OUT_DIR, else `.`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All roots with inclusion radii.
    Roots {
        #[command(flatten)]
        poly: PolyArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Repr { .. } => "repr",
            Command::Power { .. } => "power",
            Command::Approx { .. } => "approx",
            Command::CRatio { .. } => "c-ratio",
            Command::Limits { .. } => "limits",
            Command::Compare { .. } => "compare",
            Command::Tables { .. } => "tables",
            Command::Roots { .. } => "roots",
        }
    }
}
