//! `exitpath`: run checks and constructions on poset, complex, sheaf and
//! metric files. Exit status 0 for PASS or FINDING, 1 for FAIL, 2 for input
//! errors.

mod commands;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "exitpath", version, about = "Exact checks on finite stratified structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Out {
    /// Report (or produced artifact) destination; standard output by default.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Sampling {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Set,
    Vect,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

/// A fragment file, or a poset whose nerve is taken.
#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct FragmentSource {
    #[arg(long)]
    fragment: Option<PathBuf>,
    #[arg(long)]
    poset: Option<PathBuf>,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct SheafSource {
    /// Functor on a poset.
    #[arg(long)]
    sheaf: Option<PathBuf>,
    /// Sheaf on the lattice of opens.
    #[arg(long)]
    alexandrov: Option<PathBuf>,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct DotSource {
    #[arg(long)]
    poset: Option<PathBuf>,
    #[arg(long)]
    fibration: Option<PathBuf>,
    #[arg(long)]
    fragment: Option<PathBuf>,
    #[arg(long)]
    complex: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a poset.
    PosetValidate {
        #[arg(long)]
        poset: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Nerve of a poset up to dimension `--dim`.
    Nerve {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Inner horn fillers in dimension `--dim`.
    HornCheck {
        #[command(flatten)]
        source: FragmentSource,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Idempotent 1-simplices must be degenerate.
    IdempotentCheck {
        #[command(flatten)]
        source: FragmentSource,
        #[command(flatten)]
        out: Out,
    },
    /// Assigns every simplex of the top nerve its least level.
    UnionColimit {
        #[arg(long)]
        filtration: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Face poset of a complex.
    FacePoset {
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Cone on a complex.
    Cone {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, default_value = "*")]
        apex: String,
        #[command(flatten)]
        out: Out,
    },
    /// Exhaustion by finite subcomplexes; a random edge enumeration from
    /// `--seed` is used when `--edges` is absent.
    Exhaust {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Accepts or rejects a PL simplex as an exit simplex.
    ExitValidate {
        #[arg(long)]
        simplex: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Functoriality and the sheaf condition.
    SheafCheck {
        #[command(flatten)]
        source: SheafSource,
        #[command(flatten)]
        out: Out,
    },
    /// Pushforward along a closed inclusion, extension by the initial value
    /// along an open one.
    Push {
        #[arg(long)]
        sheaf: PathBuf,
        /// Ambient poset containing the base of the sheaf.
        #[arg(long)]
        poset: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Restriction to a subposet.
    Pull {
        #[arg(long)]
        sheaf: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Triangle identities and hom bijections for random functors along
    /// random closed (right side) or open (left side) inclusions.
    AdjunctionVerify {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
        #[arg(long, value_enum, default_value_t = Kind::Set)]
        kind: Kind,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Out,
    },
    /// Functor to sheaf to functor (or sheaf to functor to sheaf).
    SheafRoundtrip {
        #[command(flatten)]
        source: SheafSource,
        #[command(flatten)]
        out: Out,
    },
    /// Poset of elements of a SET functor.
    Grothendieck {
        #[arg(long)]
        sheaf: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Functor of fibers of a discrete fibration.
    Straighten {
        #[arg(long)]
        fibration: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Stalks of the pushforward inside and outside a closed subposet.
    BaseChange {
        #[arg(long)]
        sheaf: PathBuf,
        #[arg(long)]
        poset: PathBuf,
        /// Single element to check; all elements by default.
        #[arg(long)]
        element: Option<String>,
        #[command(flatten)]
        out: Out,
    },
    /// Round trips and hom bijections between functors and towers.
    DevissageVerify {
        #[arg(long)]
        filtration: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Set)]
        kind: Kind,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// Break one comparison per sample to exercise failure reporting.
        #[arg(long)]
        corrupt: bool,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Out,
    },
    /// Max-min distance between two configurations (comma-separated ids).
    ExpDist {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
        #[command(flatten)]
        out: Out,
    },
    /// Metric axioms on random triples of configurations.
    ExpAxioms {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Triangle inequality of the cone distance over a radius grid.
    ConeScan {
        #[arg(long)]
        space: PathBuf,
        /// Comma-separated positive rationals.
        #[arg(long, default_value = "1")]
        radii: String,
        #[command(flatten)]
        out: Out,
    },
    /// Metric convergence against cardinality boundedness.
    ColimitCheck {
        #[arg(long)]
        space: PathBuf,
        /// JSON array of point-id lists.
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long)]
        limit: String,
        #[arg(long, default_value = "1,1/2,1/4,1/8")]
        tolerances: String,
        #[command(flatten)]
        out: Out,
    },
    /// GraphViz export of a poset, fibration, fragment or 1-skeleton.
    ExportDot {
        #[command(flatten)]
        source: DotSource,
        #[command(flatten)]
        out: Out,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match commands::run(cli.command) {
        Ok(verdict) => verdict.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}
