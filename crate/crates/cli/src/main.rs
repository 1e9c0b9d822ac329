mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "asym-ramsey", version, about = "Asymmetric Ramsey densities, colourings of G(n,p) and their audits")]
pub struct Cli {
    /// Master seed for anything random.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Write results into this directory instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Either a named preset or two explicit graphs.
#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// One of k4c4, k5c4, k3k3, c5c6, k4k3.
    #[arg(long, conflicts_with_all = ["pair_h1", "pair_h2"])]
    pub pair: Option<String>,
    /// H1 as graph6.
    #[arg(long, requires = "pair_h2")]
    pub pair_h1: Option<String>,
    /// H2 as graph6.
    #[arg(long, requires = "pair_h1")]
    pub pair_h2: Option<String>,
    /// ε as p/q or a decimal.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Largest member order searched for the small-graph family.
    #[arg(long)]
    pub a_hat_bound: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    ColorOnly,
    ColorPlusOracle,
    FullPipeline,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Grow,
    GrowAlt,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Threshold sweep over a grid of n and b; CSV rows per cell.
    Sweep {
        #[command(flatten)]
        pair: PairArgs,
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',', default_values_t = [20usize, 30, 40])]
        ns: Vec<usize>,
        /// Comma-separated multipliers of the threshold, as p/q.
        #[arg(long, value_delimiter = ',')]
        bs: Vec<String>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Mode::ColorPlusOracle)]
        mode: Mode,
        /// Node budget of the exhaustive search.
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
        /// Fill mean_ms (makes the CSV machine-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// A single G(n,p) trial.
    Trial {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/2")]
        b: String,
        #[arg(long, value_enum, default_value_t = Mode::FullPipeline)]
        mode: Mode,
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
    },
    /// Run the colouring algorithm on a graph.
    Color {
        graph: String,
        #[command(flatten)]
        pair: PairArgs,
        /// JSON-lines event trace.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Exhaustive search for a valid colouring.
    Oracle {
        graph: String,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Grow from a host in the closed family and audit the λ bookkeeping.
    Grow {
        host: String,
        #[command(flatten)]
        pair: PairArgs,
        /// Defaults to the variant matching the pair.
        #[arg(long, value_enum)]
        variant: Option<Variant>,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Loop bound; defaults to ⌈ln v(host)⌉.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Density measures of a graph, and against a second graph with --pair.
    Density {
        graph: String,
        /// H2 as graph6.
        #[arg(long)]
        pair: Option<String>,
    },
    /// Family memberships of a graph for a pair.
    Families {
        graph: String,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Emptiness certificate for a pair of regular graphs.
    RegularCert {
        #[arg(long, required_unless_present_any = ["h1", "sweep"])]
        v1: Option<i64>,
        #[arg(long, required_unless_present_any = ["h1", "sweep"])]
        l1: Option<i64>,
        #[arg(long, required_unless_present_any = ["h1", "sweep"])]
        v2: Option<i64>,
        #[arg(long, required_unless_present_any = ["h1", "sweep"])]
        l2: Option<i64>,
        #[arg(long, requires = "h2", conflicts_with = "sweep")]
        h1: Option<String>,
        #[arg(long, requires = "h1")]
        h2: Option<String>,
        /// Every admissible tuple with v1 ≤ V1MAX and v2 ≤ V2MAX, as CSV.
        #[arg(long, num_args = 2, value_names = ["V1MAX", "V2MAX"])]
        sweep: Option<Vec<i64>>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
