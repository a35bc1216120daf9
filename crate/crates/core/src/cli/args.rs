use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "amenity", version, about = "Følner certificates, paradox witnesses and module ranks for finitely presented algebras")]
pub struct Cli {
    /// Presentation file, or the name of a bundled presentation
    /// (free2, polyxy, ex33, kx, z2grp, f2grp).
    #[arg(long, global = true)]
    pub algebra: Option<String>,

    /// Degree bound D of the coordinate window; derived from the other
    /// arguments when omitted.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub degree_bound: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Seed for randomized families.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form of an element.
    Nf { element: String },
    /// Normal words of the window, in deglex order.
    Basis,
    /// Ball dimensions d_m as CSV.
    Growth {
        /// Generating set; defaults to the generators.
        #[arg(long)]
        generators: Option<String>,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        /// Also report the first m with d[m+t] <= d[m](1+epsilon).
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long, default_value_t = 1)]
        gap: usize,
    },
    #[command(subcommand)]
    Folner(FolnerCommand),
    /// Ratios dim(VZ+V)/dim V and dim(VZ)/dim V over a family of subspaces.
    Doubling {
        /// Elements spanning Z; defaults to the generators.
        #[arg(long)]
        z: Option<String>,
        #[arg(long, value_enum, default_value_t = Family::Balls)]
        family: Family,
        /// Number of subspaces in the family.
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Largest word degree used by the family.
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    #[command(subcommand)]
    Paradox(ParadoxCommand),
    #[command(subcommand)]
    Measure(MeasureCommand),
    /// Rank entries dim(Σ W_n x_i)/dim W_n (of N/M if the module has sub-generators).
    Rank(ModuleArgs),
    /// Relative rank of the sub-generators M inside the module generated by X.
    Relrank(ModuleArgs),
    /// Residuals of dim Σ W_n x_i = dim Σ W_n [x_i] + dim(M ∩ Σ W_n x_i).
    Exactseq(ModuleArgs),
    /// First n with W_n a ∩ W_n b nonzero.
    Goldie {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        exhaustion: ExhaustionArgs,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
    },
    /// Search for a pair of nonzero normal words with zero product.
    Zerodiv {
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Balls,
    Random,
}

#[derive(Debug, Args)]
pub struct ExhaustionArgs {
    /// `ball` for balls of the generators, or a pattern file.
    #[arg(long, default_value = "ball")]
    pub exhaustion: String,
}

#[derive(Debug, Subcommand)]
pub enum FolnerCommand {
    /// Smallest level of the exhaustion within 1 + epsilon for every test element.
    Search {
        #[arg(long)]
        test_set: Option<String>,
        #[arg(long)]
        epsilon: String,
        #[command(flatten)]
        exhaustion: ExhaustionArgs,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Strategy::Exhaustion)]
        strategy: Strategy,
    },
    /// Recompute a certificate's ratios.
    Check {
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Nested exhaustion V̄_1 ⊆ V_1 ⊆ V̄_2 ⊆ … with threshold 1 + 2^-n.
    Nested {
        /// Fixed Z; by default Z = W_k at every level.
        #[arg(long)]
        z: Option<String>,
        #[command(flatten)]
        exhaustion: ExhaustionArgs,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Exhaustion,
    GreedyMonomial,
}

#[derive(Debug, Subcommand)]
pub enum ParadoxCommand {
    /// Build a truncated paradoxical decomposition or a deficiency witness.
    Find {
        #[arg(long)]
        translators: String,
        #[arg(long)]
        degree: usize,
    },
    /// Re-verify a certificate.
    Check {
        #[arg(long)]
        certificate: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum MeasureCommand {
    /// F_k(s) and B_k(s) densities as CSV.
    Densities {
        #[command(flatten)]
        exhaustion: ExhaustionArgs,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
    },
    /// Invariance defect |dim(Lr ∩ V_k) − |L ∩ V_k|| / dim V_k as CSV.
    Defect {
        #[command(flatten)]
        exhaustion: ExhaustionArgs,
        #[arg(long)]
        element: String,
        /// Regular set file; the full basis by default.
        #[arg(long)]
        regular: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
        #[arg(long, value_enum, default_value_t = Mode::Count)]
        mode: Mode,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Count,
    Span,
}

#[derive(Debug, Args)]
pub struct ModuleArgs {
    /// Module file: {"ambient_rank", "generators", "sub_generators"?}.
    #[arg(long)]
    pub module: String,
    #[command(flatten)]
    pub exhaustion: ExhaustionArgs,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
}
