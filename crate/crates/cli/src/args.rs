use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "protower",
    version,
    about = "Homology growth in towers of metabelian pro-p groups G = A x| Z_p^n",
    long_about = "Computes ranks and F_p-dimensions of A (x)_{Z_p[[Q^(p^s)]]} Z_p along \
                  Q > Q^p > Q^(p^2) > ..., scans corank-one subgroups, analyses the valuation of \
                  (1+t)^l + (1+t)^-l + (1+t) + (1+t)^-1 - 4, and evaluates generator-count bounds. \
                  Every report echoes its resolved configuration. Exit status: 0 success, 1 input \
                  error, 2 size cap exceeded, 3 internal invariant violated."
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Block,
    Series,
    Auto,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Rank, F_p-dimension and H_1 bounds of every level s = 1..s_max.
    Tower(TowerArgs),
    /// F_p-dimension of every level s = 1..s_max.
    Fpdim(FpdimArgs),
    /// F_p-dimensions of A (x)_{Z_p[[H]]} F_p for H = <x y^-l> and <y x^-l>.
    Scan(ScanArgs),
    /// Valuation of (1+t)^l + (1+t)^-l + (1+t) + (1+t)^-1 - 4 over F_p.
    King(KingArgs),
    /// Generator-count bound calculators.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Cyclic decomposition of a finite F_p[[t]]-module.
    Decompose(DecomposeArgs),
}

/// Where the module presentation comes from.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Presentation file.
    #[arg(long, conflicts_with = "presentation")]
    pub file: Option<PathBuf>,

    /// Inline presentation, e.g. "p=3; n=2; rel: p; rel: y - 2*x + 1".
    #[arg(long)]
    pub presentation: Option<String>,

    /// Replace the prime of the presentation.
    #[arg(long)]
    pub p: Option<u64>,

    /// Replace the rank of the presentation (only without relations).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TowerArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Highest level.
    #[arg(long, default_value_t = 3)]
    pub s_max: u32,

    /// Largest number of level-matrix columns allowed.
    #[arg(long, default_value_t = protower_core::group_ring::DEFAULT_SIZE_CAP)]
    pub size_cap: u64,

    /// Route for the F_p-dimensions.
    #[arg(long, value_enum, default_value_t = RouteArg::Block)]
    pub route: RouteArg,

    /// Truncation degree for the series route (default p^s + 1).
    #[arg(long)]
    pub degree: Option<usize>,

    /// Also report p-primary torsion exponents.
    #[arg(long)]
    pub torsion: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FpdimArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Highest level.
    #[arg(long, default_value_t = 3)]
    pub s_max: u32,

    /// Largest number of level-matrix columns allowed (block route).
    #[arg(long, default_value_t = protower_core::group_ring::DEFAULT_SIZE_CAP)]
    pub size_cap: u64,

    /// How the dimensions are computed.
    #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
    pub route: RouteArg,

    /// Truncation degree for the series route (default p^s + 1).
    #[arg(long)]
    pub degree: Option<usize>,
}

/// The list of l values. Without any of --lambda, --all-residues-mod and
/// --random the grid is every residue mod p^2 plus 20 seeded random values.
#[derive(Debug, Clone, Args)]
pub struct LambdaArgs {
    /// A value of l: decimal, or base-p digits "d0,d1,..." least significant first. Repeatable.
    #[arg(long = "lambda", allow_hyphen_values = true)]
    pub lambdas: Vec<String>,

    /// Add l = 0, 1, ..., N-1.
    #[arg(long, value_name = "N")]
    pub all_residues_mod: Option<u64>,

    /// Add this many seeded random l.
    #[arg(long, value_name = "COUNT")]
    pub random: Option<usize>,

    /// Seed for the random l.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// p-adic digits carried by decimal and random l (default: enough for the degree, at least 4).
    #[arg(long)]
    pub precision: Option<u32>,

    /// Truncation degree D (default 2p).
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub lambda: LambdaArgs,
}

#[derive(Debug, Clone, Args)]
pub struct KingArgs {
    /// An odd prime.
    #[arg(long)]
    pub p: u64,

    #[command(flatten)]
    pub lambda: LambdaArgs,
}

#[derive(Debug, Clone, Subcommand)]
pub enum BoundsCommand {
    /// dim H0 + dim H1(Q) - dim H2(Q) <= d(G) <= dim H0 + dim H1(Q).
    FiveTerm {
        /// dim_Fp H_0(Q, H_1(N, F_p)).
        #[arg(long)]
        dim_h0: u64,
        /// dim_Fp H_1(Q, F_p).
        #[arg(long, requires = "dim_h2q", conflicts_with = "quotient_rank")]
        dim_h1q: Option<u64>,
        /// dim_Fp H_2(Q, F_p).
        #[arg(long, requires = "dim_h1q")]
        dim_h2q: Option<u64>,
        /// Take Q = Z_p^r, so dim H_1 = r and dim H_2 = C(r, 2).
        #[arg(long, required_unless_present = "dim_h1q")]
        quotient_rank: Option<u64>,
    },
    /// d(H) + C(n-1, 2) - n + 1, bounding dim_Fp (A (x)_{Z_p[[H]]} F_p).
    Coinvariant {
        /// Minimal number of generators d(H) of the subgroup.
        #[arg(long)]
        d_h: u64,
        /// Rank n of Q.
        #[arg(long)]
        n: u64,
    },
    /// Whether d(U) <= k [G:U]^(1/2).
    Wilson {
        /// Minimal number of generators d(U).
        #[arg(long)]
        d_u: u64,
        /// Positive rational, "a" or "a/b".
        #[arg(long)]
        k: String,
        /// The index [G:U].
        #[arg(long)]
        index: String,
    },
    /// d(U) = i_1 + ... + i_s + 1 for U = <H, q^(p^j)>, needs p^j > max i.
    DOfU {
        /// Cyclic exponents i_1, ..., i_s.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        exponents: Vec<u64>,
        /// The prime.
        #[arg(long)]
        p: u64,
        /// Exponent j of q^(p^j).
        #[arg(long)]
        j: u32,
    },
    /// At the least j with p^j > max i, check the bound and whether it forces i_1 + ... + i_s < k^2 p.
    Chain {
        /// Cyclic exponents i_1, ..., i_s.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        exponents: Vec<u64>,
        /// The prime.
        #[arg(long)]
        p: u64,
        /// Positive rational, "a" or "a/b".
        #[arg(long)]
        k: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Restrict the presentation along x -> (1+t)^l, y -> 1+t.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,

    /// Use y -> (1+t)^l, x -> 1+t instead.
    #[arg(long, requires = "lambda")]
    pub swap: bool,

    /// A relation matrix over F_p[[t]] instead of a presentation: rows separated by ';',
    /// entries by ',', entries polynomials in t (needs --p).
    #[arg(long, conflicts_with_all = ["file", "presentation", "lambda"])]
    pub matrix: Option<String>,

    /// Truncation degree D (default 32).
    #[arg(long)]
    pub degree: Option<usize>,

    /// p-adic digits carried by a decimal l.
    #[arg(long)]
    pub precision: Option<u32>,

    /// Also compute d(U) for U = <H, q^(p^j)> both ways.
    #[arg(long)]
    pub j: Option<u32>,

    /// Also run the square-root bound with this constant k.
    #[arg(long)]
    pub k: Option<String>,
}
