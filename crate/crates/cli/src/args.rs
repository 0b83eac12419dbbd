//! Command-line syntax.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const CONFIG_HELP: &str = "\
Configuration files (--config FILE) hold one `key = value` per line; `#` starts
a comment. Keys are the long flag names without dashes (kernel, trace, n, tile,
align, seed, cap, format, out, emit-trace, meta) plus any kernel parameter
listed by `parloc list`. Command-line flags override the file, and the file
overrides kernel defaults.

Exit status: 0 success, 1 usage or parameter error, 2 trace parse or
validation error, 3 verification failure.";

#[derive(Debug, Parser)]
#[command(name = "parloc", version, about = "Memory locality metrics for simulated data-parallel kernels")]
#[command(after_long_help = CONFIG_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a built-in kernel and report its memory metrics
    Run(RunArgs),
    /// Compute memory metrics for a trace file
    Analyze(AnalyzeArgs),
    /// Compare the matrix-multiply kernels against reference values
    Verify(VerifyArgs),
    /// List the built-in kernels and their parameters
    List(ListArgs),
    /// Write two-column curve files for plotting
    Plotdat(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plotdat,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Format as ValueEnum>::from_str(s, false)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct KernelArgs {
    /// Built-in kernel name (see `parloc list`)
    #[arg(long)]
    pub kernel: Option<String>,
    /// Primary problem size (matrix order, rows, vertices, sequence length)
    #[arg(long)]
    pub n: Option<u64>,
    /// Tile edge for matrix-multiply kernels
    #[arg(long)]
    pub tile: Option<u64>,
    /// Buffer alignment in bytes
    #[arg(long)]
    pub align: Option<u64>,
    /// Sparsity pattern seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Any other kernel parameter, as KEY=VALUE (repeatable)
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Maximum number of trace records to simulate
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Report format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (directory for plotdat); stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add run information (tool version, source, time) to the report
    #[arg(long)]
    pub meta: bool,
    /// Key=value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Also write the simulated trace to this file
    #[arg(long)]
    pub emit_trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Trace file to analyze
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Trace file to plot instead of a built-in kernel
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Directory for the curve files (default: current directory)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// File name prefix (default: kernel name or trace file stem)
    #[arg(long)]
    pub label: Option<String>,
    /// Key=value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Override the tile edge (the reference values use 16)
    #[arg(long)]
    pub tile: Option<u64>,
    /// Override the buffer alignment (the reference values use 4096)
    #[arg(long)]
    pub align: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct ListArgs {
    /// Print the catalogue as JSON
    #[arg(long)]
    pub json: bool,
}
