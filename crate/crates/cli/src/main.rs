mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "matchkit", version, about = "Exact matching polynomials and monomer-dimer entropy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and print it as JSON or an edge list.
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Matching polynomial coefficients.
    Poly {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Certified enclosures of the gamma roots and the matching measure.
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        /// Width of every enclosure is at most 2^-bits.
        #[arg(long, default_value_t = matchkit::spectra::DEFAULT_PRECISION_BITS)]
        bits: u64,
        /// Write the matching measure atoms as CSV to this path.
        #[arg(long)]
        measure_csv: Option<PathBuf>,
        /// Also report the measure of [-s, s].
        #[arg(long)]
        mass: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Entropy functions at a density, an activity, or along a curve.
    Entropy {
        #[command(flatten)]
        graph: GraphArgs,
        /// Dimer density in [0, 1].
        #[arg(long, conflicts_with_all = ["t", "curve"])]
        p: Option<f64>,
        /// Activity.
        #[arg(long, conflicts_with = "curve")]
        t: Option<f64>,
        /// Emit the CSV curve over a geometric activity grid.
        #[arg(long)]
        curve: bool,
        #[arg(long, default_value_t = 1e-3)]
        t_min: f64,
        #[arg(long, default_value_t = 1e3)]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value_t = matchkit::entropy::DEFAULT_TOLERANCE)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Federbush expansion coefficients a_k and b_k.
    Series {
        #[command(flatten)]
        graph: GraphArgs,
        /// Truncation order K.
        #[arg(long = "order", short = 'K', default_value_t = 7)]
        order: usize,
        /// Largest order accepted.
        #[arg(long, default_value_t = matchkit::entropy::MAX_SERIES_ORDER)]
        max_order: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the inequality checks and print one JSON line per (graph, check).
    Verify {
        /// `default` or a comma-separated list of family specs.
        #[arg(long, conflicts_with_all = ["family", "input"])]
        corpus: Option<String>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// `all` or a comma-separated list of check ids.
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        cycle_length: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Finite-size approximations of limiting quantities.
    Limits {
        #[command(subcommand)]
        kind: LimitsKind,
    },
    /// Build the degenerate graph G* and certify its bounds.
    Degenerate {
        #[command(flatten)]
        graph: GraphArgs,
        /// Edge `u,v` of the source graph.
        #[arg(long, default_value = "0,auto")]
        edge: String,
        /// Print G* itself instead of the report.
        #[arg(long)]
        emit_graph: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum LimitsKind {
    /// Perfect-matching entropy of m x m tori against G/pi.
    Torus {
        #[arg(long, value_delimiter = ',', default_values_t = matchkit::limits::DEFAULT_TORUS_SIZES)]
        sizes: Vec<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Moments of the matching measure along a family.
    Moments {
        /// Family specs, e.g. `c4,c8,c16`.
        #[arg(long, value_delimiter = ',', required = true)]
        families: Vec<String>,
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4, 6, 8])]
        orders: Vec<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Gap between lambda(1) and the Schrijver bound.
    Girth {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Clone)]
pub struct GraphArgs {
    /// Family spec such as `k33`, `cycle:8`, `torus:6x6`, `rrb:8,3,42`.
    #[arg(long, required_unless_present = "input", conflicts_with = "input")]
    family: Option<String>,
    /// Edge-list or graph JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub struct OutArgs {
    /// Write the artifact here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Edges,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Elimination,
    Profile,
}

impl From<StrategyArg> for matchkit::polycore::Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Auto => Self::Auto,
            StrategyArg::Elimination => Self::Elimination,
            StrategyArg::Profile => Self::Profile,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
