use std::path::PathBuf;

use clap::{Parser, Subcommand};

/// Invariants of quadratic forms, étale algebras with involution and
/// maximal tori of groups of type B and C over ℚ.
#[derive(Debug, Parser)]
#[command(name = "bctori", version)]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Exit with status 1 when a yes/no question is answered "no".
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension, determinant, Hasse invariants and signature of a form.
    Invariants { form: PathBuf },
    /// Local Witt index of a form at a place ("inf" or a prime).
    Witt {
        form: PathBuf,
        #[arg(long)]
        place: String,
    },
    /// Whether a type B and a type C group are twins.
    Twin { g1: PathBuf, g2: PathBuf },
    /// Weak commensurability of arithmetic subgroups for a set of places.
    Wc {
        g1: PathBuf,
        g2: PathBuf,
        /// Comma-separated places, e.g. "inf,2,5".
        #[arg(long = "S", value_name = "PLACES")]
        s: String,
    },
    /// Maximal real tori of real forms of type B and C.
    Tori {
        #[command(subcommand)]
        command: ToriCommand,
    },
    /// Embed an étale algebra with involution into a target algebra.
    Embed { algebra: PathBuf, target: PathBuf },
    /// Rank-2 decision for SO(q1) and Sp-type partner of SO(q2).
    Rank2 { q1: PathBuf, q2: PathBuf },
    /// Ratio of the two root lengths for the given n.
    Ratio {
        #[arg(long)]
        n: u64,
    },
    /// Torus type of the complex conjugation given as an integral involution.
    LatticeType { matrix: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum ToriCommand {
    /// List the torus types (α, β, γ) of a real form.
    Enumerate {
        #[arg(long)]
        form: String,
    },
    /// Whether two real forms of equal rank have the same maximal tori.
    Compare { f1: String, f2: String },
    /// Partition all real forms of type B_ℓ and C_ℓ by their tori.
    Classify {
        #[arg(long)]
        rank: usize,
    },
}
