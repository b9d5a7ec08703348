use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Exact genus-zero invariants of invertible polynomials.
#[derive(Parser, Debug)]
#[command(name = "lgspin", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit JSON instead of a plain-text table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Directory holding cached reports.
    #[arg(long, global = true, env = "LGSPIN_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Ignore the cache even when a directory is configured.
    #[arg(long, global = true)]
    pub no_cache: bool,

    /// Size of the worker pool.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

/// The polynomial, given either positionally or with `--poly`.
#[derive(Args, Debug, Clone, Default)]
pub struct PolyArg {
    #[arg(value_name = "POLY")]
    pub positional: Option<String>,
    #[arg(long = "poly", value_name = "POLY")]
    pub flag: Option<String>,
}

impl PolyArg {
    pub fn text(&self) -> Option<&str> {
        self.flag.as_deref().or(self.positional.as_deref())
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Atomic type, weights, degree and charges.
    Classify {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Structure of the diagonal symmetry group.
    Aut {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Basis of the state space with degrees.
    States {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Residue pairing of two states.
    Pairing {
        #[command(flatten)]
        poly: PolyArg,
        /// Two comma-separated states such as `j^3,j^8`.
        #[arg(long)]
        insertions: String,
    },
    /// Three-point correlator from the limit formula.
    Correlator3 {
        #[command(flatten)]
        poly: PolyArg,
        /// Three comma-separated states.
        #[arg(long)]
        insertions: String,
    },
    /// Small I-function, or the big one with `--big`.
    Ifunction {
        #[command(flatten)]
        poly: PolyArg,
        /// t-order of the small I-function.
        #[arg(long, default_value_t = 10)]
        order: usize,
        #[arg(long)]
        big: bool,
        /// Parameter states of the big I-function (default: narrow degree-2 powers of j).
        #[arg(long)]
        params: Option<String>,
        /// Maximal tuple length of the big I-function.
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
    /// Picard-Fuchs check of the small I-function.
    Pfcheck {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 25)]
        order: usize,
    },
    /// Mirror map and small J-function.
    Jfunction {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// A correlator extracted from the big J-function.
    Correlator {
        #[command(flatten)]
        poly: PolyArg,
        /// All insertions but the last, comma-separated.
        #[arg(long)]
        insertions: String,
        #[arg(long)]
        last: String,
        #[arg(long)]
        params: Option<String>,
        /// Tuple-length order; defaults to the number of insertions.
        #[arg(long)]
        n_max: Option<usize>,
    },
}

impl Command {
    pub fn poly(&self) -> &PolyArg {
        match self {
            Command::Classify { poly }
            | Command::Aut { poly }
            | Command::States { poly }
            | Command::Pairing { poly, .. }
            | Command::Correlator3 { poly, .. }
            | Command::Ifunction { poly, .. }
            | Command::Pfcheck { poly, .. }
            | Command::Jfunction { poly, .. }
            | Command::Correlator { poly, .. } => poly,
        }
    }

    /// The command with the polynomial text removed, so the cache keys on the matrix alone.
    pub fn without_poly(&self) -> Command {
        let mut c = self.clone();
        match &mut c {
            Command::Classify { poly }
            | Command::Aut { poly }
            | Command::States { poly }
            | Command::Pairing { poly, .. }
            | Command::Correlator3 { poly, .. }
            | Command::Ifunction { poly, .. }
            | Command::Pfcheck { poly, .. }
            | Command::Jfunction { poly, .. }
            | Command::Correlator { poly, .. } => *poly = PolyArg::default(),
        }
        c
    }
}
