//! `stirling`: command-line access to the permutation, tree, urn and
//! distribution machinery of `stirling-core`.
//!
//! Every command prints JSON with a top-level `"schemaVersion": 1` unless
//! `--csv` is given. Exit status: 0 success, 1 invalid input, 2 a
//! verification or comparison failed, 64 usage error.

mod commands;
mod input;
mod output;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_INVALID: u8 = 1;
pub const EXIT_COUNTEREXAMPLE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "stirling", version, about = "Generalized Stirling permutations, increasing trees and urn models")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
pub struct Global {
    /// Emit CSV instead of JSON
    #[arg(long, global = true)]
    pub csv: bool,
    /// Maximum number of worker threads for sampling commands
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FlavorArg {
    /// {1^k, ..., n^k}
    KStirling,
    /// {1^k, 2^(k+2), ..., n^(k+2)}
    Bundled,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum BijectionArg {
    /// (k+1)-ary increasing trees and k-Stirling permutations
    Ary,
    /// (k+1)-bundled increasing trees and k-bundled permutations
    Bundled,
    /// sequences of k-bundled trees and (k+2)-ary trees
    Seq,
    /// (k+1)-bundled trees and trees with a k-slot root and (k+2)-slot nodes
    Ftree,
    /// plane recursive trees of order n+1 and 2-Stirling permutations of order n
    Plane,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum UrnModel {
    /// symmetric urn, q colours
    A,
    /// triangular block urn
    B,
    /// Pólya urn
    C,
    /// nested block urns (block sizes)
    Nested,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CovarianceArg {
    #[value(name = "urnA")]
    UrnA,
    Fixed,
    Tnormal,
}

#[derive(Subcommand)]
enum Command {
    /// Number of permutations of order n
    Count {
        n: u64,
        k: u64,
        #[arg(long, value_enum, default_value = "k-stirling")]
        flavor: FlavorArg,
    },
    /// List every permutation of order n in lexicographic order
    Enumerate {
        n: usize,
        k: u32,
        #[arg(long, value_enum, default_value = "k-stirling")]
        flavor: FlavorArg,
        /// Refuse to list more than this many permutations
        #[arg(long, default_value_t = stirling::perm::DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
    /// Uniform random permutations; sample i uses stream i of --seed
    Sample {
        n: usize,
        k: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "k-stirling")]
        flavor: FlavorArg,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Ascent, descent and plateau statistics of a permutation
    Stats {
        /// compact word (`112233321`), comma separated, or a JSON array
        permutation: String,
    },
    /// Block decomposition of a permutation (positions are 1-based)
    Blocks { permutation: String },
    /// Tree to code; also decodes back and reports whether the roundtrip is the identity
    Encode {
        #[arg(long, value_enum)]
        bijection: BijectionArg,
        /// JSON object, `@file` or `-` for stdin
        input: String,
    },
    /// Code to tree; also encodes back and reports whether the roundtrip is the identity
    Decode {
        #[arg(long, value_enum)]
        bijection: BijectionArg,
        /// a permutation for ary/bundled/plane, a tree as JSON, `@file` or `-` otherwise
        input: String,
    },
    /// Simulate urns. CSV columns: seed, replicate, steps, then the final counts
    /// (block sizes separated by `;` for the nested model)
    Urn {
        #[arg(long, value_enum)]
        model: UrnModel,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 1)]
        replicates: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// block parameter for models b, c and nested
        #[arg(long, default_value_t = 2)]
        k: u64,
        /// colours of model a
        #[arg(long, default_value_t = 3)]
        q: usize,
        /// initial counts, comma separated
        #[arg(long, value_delimiter = ',')]
        init: Option<Vec<u64>>,
    },
    /// Exact law of the number of blocks
    Pmf { n: u64, k: u64 },
    /// Exact binomial moments E binom(S_n + r, r) and limit moments E ζ^r
    Moments {
        n: u64,
        k: u64,
        #[arg(long, default_value_t = 3)]
        r_max: u64,
    },
    /// Density of the block-count limit
    Density {
        k: u32,
        #[arg(required = true, allow_negative_numbers = true)]
        x: Vec<f64>,
        #[arg(long, default_value_t = stirling::dist::DEFAULT_TERM_CAP)]
        term_cap: usize,
    },
    /// Exact expectations of the ascent statistics
    Means { n: u64, k: u64 },
    /// Limit covariance matrices
    Covariance {
        #[arg(long, value_enum)]
        which: CovarianceArg,
        /// colours for urnA
        #[arg(long, default_value_t = 3)]
        q: usize,
        /// additions for fixed, comma separated
        #[arg(long, value_delimiter = ',', default_value = "1,1,1")]
        s: Vec<u64>,
        /// k for tnormal
        #[arg(long, default_value_t = 2)]
        k: u64,
    },
    /// Run the exhaustive oracle suites on all orders up to --max-n
    Verify {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = stirling::perm::DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },
    /// Run a Monte Carlo experiment described by a JSON file and compare with theory
    Experiment {
        /// JSON experiment spec, `@file`, a path, or `-` for stdin
        spec: String,
        /// Print a human-readable table instead of JSON
        #[arg(long)]
        table: bool,
        /// Also write the raw samples as CSV to this path
        #[arg(long)]
        samples: Option<std::path::PathBuf>,
    },
}

pub enum Failure {
    Invalid(String),
    Usage(String),
}

impl From<stirling::Error> for Failure {
    fn from(e: stirling::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Invalid(format!("bad JSON: {e}"))
    }
}

/// `Ok(true)` when everything checked out, `Ok(false)` for a counterexample.
pub type Outcome = Result<bool, Failure>;

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    use commands::*;
    let g = cli.global;
    match cli.command {
        Command::Count { n, k, flavor } => count(g, out, n, k, flavor),
        Command::Enumerate { n, k, flavor, cap } => enumerate(g, out, n, k, flavor, cap),
        Command::Sample {
            n,
            k,
            seed,
            flavor,
            count,
        } => sample(g, out, n, k, seed, flavor, count),
        Command::Stats { permutation } => stats(g, out, &permutation),
        Command::Blocks { permutation } => blocks(g, out, &permutation),
        Command::Encode { bijection, input } => encode(g, out, bijection, &input),
        Command::Decode { bijection, input } => decode(g, out, bijection, &input),
        Command::Urn {
            model,
            steps,
            replicates,
            seed,
            k,
            q,
            init,
        } => urn(g, out, UrnArgs { model, steps, replicates, seed, k, q, init }),
        Command::Pmf { n, k } => pmf(g, out, n, k),
        Command::Moments { n, k, r_max } => moments(g, out, n, k, r_max),
        Command::Density { k, x, term_cap } => density(g, out, k, &x, term_cap),
        Command::Means { n, k } => means(g, out, n, k),
        Command::Covariance { which, q, s, k } => covariance(g, out, which, q, &s, k),
        Command::Verify { max_n, k, cap } => verify(g, out, max_n, k, cap),
        Command::Experiment { spec, table, samples } => experiment(g, out, &spec, table, samples.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = dispatch(cli, &mut out);
    let flushed = out.flush();
    match result {
        Ok(true) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(EXIT_INVALID),
        Ok(false) => ExitCode::from(EXIT_COUNTEREXAMPLE),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
