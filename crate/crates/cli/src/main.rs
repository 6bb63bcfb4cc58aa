mod cmd;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qmet_core::value::parse_rational;
use qmet_core::Rational;

#[derive(Parser)]
#[command(name = "qmet", version, about = "Check and convert quasi-metric, partial-metric and semilattice structures")]
struct Cli {
    /// Print the machine-readable report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Direction {
    D2p,
    P2d,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Weak,
    Componentwise,
    Weight,
    Coweight,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Family {
    PsetShift,
    Bernoulli,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum GenKind {
    Semilattice,
    Covaluation,
    Space,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Run the axiom checks for the file's kind.
    Validate {
        file: PathBuf,
        /// Semilattice for a valuation file without an inline `meet`.
        #[arg(long)]
        semilattice: Option<PathBuf>,
        /// Quasi-metric a weight file is checked against.
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "weak")]
        mode: ModeArg,
    },
    /// Order, invariance, DPC, weights and the induced partial metric.
    Analyze {
        file: PathBuf,
        /// Read a digraph and analyse its path quasi-metric.
        #[arg(long)]
        graph: bool,
    },
    /// Quasi-metric to partial metric and back.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        /// Write here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Path quasi-metric of a digraph and the weight criterion.
    Graph { file: PathBuf },
    /// Alignment partial metric of a string file.
    Align {
        file: PathBuf,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        alpha: Option<Rational>,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        beta: Option<Rational>,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        gamma: Option<Rational>,
        /// Use the common-prefix partial metric instead.
        #[arg(long)]
        prefix: bool,
    },
    /// Entropy of a shift on a lazily generated carrier.
    Entropy {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        shift: i64,
        #[arg(long)]
        seeds: PathBuf,
        /// Defaults to 128 for sets and 16 for subgroups.
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = 8)]
        window: usize,
        /// Largest subgroup, in elements.
        #[arg(long, default_value_t = 1 << 16)]
        budget: usize,
    },
    /// Random structure files. The seed comes from `--seed`, then `QMET_SEED`.
    Generate {
        #[arg(value_enum)]
        kind: GenKind,
        /// Minimum number of elements.
        #[arg(long, default_value_t = 6)]
        size: usize,
        #[arg(long, default_value_t = 4)]
        ground: u32,
        /// Random pairs merged into the congruence; 0 leaves it out.
        #[arg(long, default_value_t = 0)]
        merges: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Tabulate glued-weight entropies over every representative family.
    Experiment {
        file: PathBuf,
        /// Endomorphism table such as `0,0,1`; every endomorphism if absent.
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value_t = 32)]
        horizon: usize,
        #[arg(long, default_value_t = 8)]
        window: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Validate { file, semilattice, space, mode } => cmd::validate(&file, semilattice, space, mode),
        Command::Analyze { file, graph } => cmd::analyze(&file, graph),
        Command::Convert { file, direction, output } => return cmd::convert(&file, direction, output),
        Command::Graph { file } => cmd::graph(&file),
        Command::Align { file, alpha, beta, gamma, prefix } => cmd::align(&file, alpha, beta, gamma, prefix),
        Command::Entropy { family, p, k, shift, seeds, horizon, window, budget } => {
            cmd::entropy(family, p, k, shift, &seeds, horizon, window, budget)
        }
        Command::Generate { kind, size, ground, merges, seed } => return cmd::generate(kind, size, ground, merges, seed),
        Command::Experiment { file, map, horizon, window } => cmd::experiment(&file, map, horizon, window),
    };
    match res {
        Ok((report, code)) => {
            print!("{}", report.render(cli.json));
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
