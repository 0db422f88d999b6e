mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClawAction {
    Derive,
    Verify,
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reading {
    Printed,
    Alternative,
}

/// Symmetries, Noether symmetries and conservation laws of the semilinear
/// Kohn-Laplace equation on the Heisenberg group.
#[derive(Debug, Parser)]
#[command(name = "kohn-noether", version)]
pub struct Cli {
    /// arbitrary | zero | linear | power:<p> | exp | cubic
    #[arg(long, global = true)]
    pub case: Option<String>,

    #[arg(
        long,
        global = true,
        value_enum,
        env = "KOHN_NOETHER_FORMAT",
        default_value = "text"
    )]
    pub format: Format,

    /// Highest jet order.
    #[arg(long, global = true)]
    pub max_order: Option<usize>,

    /// Total degree of the basis used to reconstruct the potential.
    #[arg(long, global = true)]
    pub degree: Option<usize>,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the generators of the symmetry algebra.
    Symmetries,
    /// Commutator table of the symmetry algebra.
    Brackets {
        /// Also compare with the published table.
        #[arg(long)]
        compare: bool,
    },
    /// Decide which generators are Noether symmetries.
    Noether {
        #[arg(long)]
        symmetry: Option<String>,
    },
    /// Conservation laws of the Noether symmetries.
    Claw {
        #[arg(value_enum)]
        action: ClawAction,
        #[arg(long)]
        symmetry: Option<String>,
        /// Concrete β(x, y, t) substituted into the W_β law.
        #[arg(long)]
        beta: Option<String>,
        /// Verify the published vector instead of the derived one.
        #[arg(long)]
        published: bool,
        /// Reading of an ambiguous published display.
        #[arg(long, value_enum, default_value = "printed")]
        reading: Reading,
    },
    /// Normalize an expression, optionally differentiating and reducing it.
    Eval {
        expr: String,
        /// Total derivative multi-index, e.g. `xt`.
        #[arg(long)]
        d: Option<String>,
        /// Apply the Euler operator with respect to u or b.
        #[arg(long)]
        euler: Option<String>,
        /// Reduce modulo the equation of the case.
        #[arg(long)]
        reduce: bool,
    },
    /// Check which vector fields square to the Kohn-Laplace operator.
    Heisenberg,
    /// The discrepancy ledger as markdown.
    Ledger,
    /// Run the acceptance suite.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, report) = match commands::run(&cli) {
        Ok(out) => (out.code, out.text),
        Err(e) => {
            eprintln!("error: {}", e.message);
            if let Some(detail) = &e.detail {
                eprintln!("{detail}");
            }
            return ExitCode::from(e.code);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &report) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{report}"),
    }
    ExitCode::from(code)
}
