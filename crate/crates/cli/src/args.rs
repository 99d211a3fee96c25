use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "porder", version, about = "Exact computations with Poisson orders, symplectic quotients and symplectic reflection algebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalOpts {
    /// Input file, or inline JSON when the value starts with `{`.
    #[arg(long, global = true)]
    pub input: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true)]
    pub degree_bound: Option<u32>,
    #[arg(long, global = true)]
    pub max_iters: Option<usize>,
    #[arg(long, global = true)]
    pub headroom: Option<u32>,
    /// Maximum S-pair reductions per Gröbner computation.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Only affects sample-point selection.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Md,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Poisson structures on k[x]/I.
    Poisson {
        #[command(subcommand)]
        op: PoissonOp,
    },
    /// Finite matrix groups.
    Group {
        #[command(flatten)]
        group: GroupArg,
        #[command(subcommand)]
        op: GroupOp,
    },
    /// Symplectic quotients V/G.
    Vgamma {
        #[command(flatten)]
        group: GroupArg,
        #[command(subcommand)]
        op: VgammaOp,
    },
    /// Weyl group censuses.
    Weyl {
        #[command(subcommand)]
        op: WeylOp,
    },
    /// Symplectic reflection algebras.
    Sra {
        #[command(flatten)]
        params: SraArgs,
        #[command(subcommand)]
        op: SraOp,
    },
    /// Built-in example corpus.
    Examples {
        #[command(subcommand)]
        op: ExamplesOp,
    },
}

#[derive(Subcommand, Debug)]
pub enum PoissonOp {
    Validate,
    Bracket {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Poisson core of a point (`--point`) or of an ideal (`--ideal`).
    #[command(group = clap::ArgGroup::new("target").required(true).args(["point", "ideal"]))]
    Core {
        #[arg(long)]
        point: Option<String>,
        /// Comma-separated generators.
        #[arg(long)]
        ideal: Option<String>,
    },
    Casimirs,
    Rank {
        #[arg(long)]
        point: String,
    },
    /// Rank stratification by minors of the bracket matrix.
    Strata,
}

/// A registered group name (`trivial`, `z<n>`, `weyl-<type>`); otherwise
/// `--input` holds a group JSON.
#[derive(Args, Debug, Clone)]
pub struct GroupArg {
    #[arg(long, global = true)]
    pub group: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum GroupOp {
    Closure,
    Reflections,
    Invariants,
    Subgroups,
}

#[derive(Subcommand, Debug)]
pub enum VgammaOp {
    Strata,
    Verify {
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    Fiber {
        /// Point of V, comma-separated.
        #[arg(long)]
        point: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum WeylOp {
    Census {
        #[arg(long = "type")]
        kind: Option<char>,
        #[arg(long)]
        rank: Option<usize>,
        /// Full system such as `A2xA1`.
        #[arg(long, conflicts_with_all = ["kind", "rank"])]
        system: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SraArgs {
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// `0`, `1` or `formal`.
    #[arg(long, global = true)]
    pub t: Option<String>,
    /// One value for every reflection class, or `class:value` pairs.
    #[arg(long, global = true)]
    pub c: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum SraOp {
    Pbw {
        #[arg(long)]
        degree: Option<u32>,
        /// Negative control: flip the group action sign on this letter.
        #[arg(long)]
        corrupt: Option<usize>,
    },
    Center {
        #[arg(long)]
        degree: Option<u32>,
    },
    Qbracket {
        #[arg(long)]
        z1: String,
        #[arg(long)]
        z2: String,
    },
    Presentation {
        #[arg(long)]
        degree: Option<u32>,
    },
    Fiber {
        #[arg(long)]
        degree: Option<u32>,
        /// Point in the presentation coordinates.
        #[arg(long)]
        point: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExamplesOp {
    List,
    Run { name: String },
    RunAll,
}
