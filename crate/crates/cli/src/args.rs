//! Argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zeta_alpha_core::Identity;

use crate::output::Format;

/// Largest `k` built on demand when no cache is configured.
pub const DEFAULT_TABLE_LIMIT: usize = 400;

#[derive(Debug, Parser)]
#[command(name = "zeta-alpha", version, about = "Exact alpha_k(s) tables and certified gamma/zeta series")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Cache file with precomputed exact polynomials.
    #[arg(long, env = "ZETA_ALPHA_CACHE", global = true)]
    pub cache: Option<PathBuf>,

    /// Largest index built on demand without a cache.
    #[arg(long, default_value_t = DEFAULT_TABLE_LIMIT, global = true)]
    pub table_limit: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print alpha_k(s) exactly, its value at a point, or alpha_k'(1).
    Alpha(AlphaArgs),
    /// Evaluate one of the series identities with a certified tail.
    Eval(EvalArgs),
    /// Exact zeta(1 - lambda) with a cross-check against Euler's formula.
    Special(SpecialArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Write or check a cache file.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Debug, Args)]
pub struct AlphaArgs {
    pub k: usize,
    /// Evaluate at `re` or `re,im` (integers, decimals or `a/b`).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "prime")]
    pub at: Option<String>,
    /// Print the polynomial in factored form (the default).
    #[arg(long, conflicts_with_all = ["at", "prime"])]
    pub exact: bool,
    /// Print alpha_k'(1).
    #[arg(long)]
    pub prime: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdentityArg {
    Gamma,
    Gammazeta,
    Zeta,
    ShiftStirling2,
    ShiftEulerian,
    Trigamma,
    Eulergamma,
}

impl IdentityArg {
    /// The evaluator identity; `None` for `zeta`, which divides by the
    /// reference gamma.
    pub fn identity(self, lambda: u32) -> Option<Identity> {
        Some(match self {
            IdentityArg::Gamma => Identity::Gamma,
            IdentityArg::Gammazeta => Identity::GammaZeta,
            IdentityArg::Zeta => return None,
            IdentityArg::ShiftStirling2 => Identity::ShiftStirling2 { lambda },
            IdentityArg::ShiftEulerian => Identity::ShiftEulerian { lambda },
            IdentityArg::Trigamma => Identity::Trigamma,
            IdentityArg::Eulergamma => Identity::EulerGamma,
        })
    }

    pub fn needs_lambda(self) -> bool {
        matches!(self, IdentityArg::ShiftStirling2 | IdentityArg::ShiftEulerian)
    }

    pub fn name(self) -> &'static str {
        match self {
            IdentityArg::Gamma => "gamma",
            IdentityArg::Gammazeta => "gammazeta",
            IdentityArg::Zeta => "zeta",
            IdentityArg::ShiftStirling2 => "shift-stirling2",
            IdentityArg::ShiftEulerian => "shift-eulerian",
            IdentityArg::Trigamma => "trigamma",
            IdentityArg::Eulergamma => "eulergamma",
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub identity: IdentityArg,
    /// The point, as `re` or `re,im`. Not used by `eulergamma`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long)]
    pub lambda: Option<u32>,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Working precision in bits.
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(64..=4096))]
    pub prec: u32,
    /// Largest truncation index tried before giving up.
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub term_cap: u64,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["lambda", "range"])))]
pub struct SpecialArgs {
    #[arg(long)]
    pub lambda: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub range: Option<Vec<usize>>,
    /// Largest lambda accepted.
    #[arg(long, default_value_t = zeta_alpha_core::special_values::DEFAULT_MAX_LAMBDA)]
    pub max_lambda: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Structure,
    Identities,
    Bounds,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Largest index checked. Defaults to 41 for `structure`, 10000 for
    /// `bounds` and 40 (the largest lambda) for `identities`.
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Spread independent work items over threads.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Subcommand)]
pub enum CacheCommand {
    /// Build the table up to `--kmax` and write it.
    Save {
        /// Output path; defaults to the global cache path.
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long)]
        kmax: usize,
    },
    /// Read and verify a cache, optionally keeping only a prefix.
    Load {
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long)]
        kmax: Option<usize>,
    },
}
