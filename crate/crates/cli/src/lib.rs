//! Command-line front end: JSON instances in, JSON reports out.
//!
//! Exit codes: 0 for a positive answer (feasible, verified), 1 for a
//! negative one (infeasible, refuted), 2 for unreadable or invalid input.

mod commands;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use report::{Caps, Report, Verdict};

#[derive(Debug, Parser)]
#[command(name = "hyperorient", version, about = "Orient mixed hypergraphs and check packing conditions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Instance file to read.
    #[arg(long, global = true)]
    pub instance: Option<PathBuf>,
    /// Where to write the primary output file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for generated instances.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Refuse instances with more vertices than this.
    #[arg(long, global = true, default_value_t = 12)]
    pub max_vertices: usize,
    /// Packing mode, overriding the instance file.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// Worker threads for subpartition scans.
    #[arg(long, global = true, default_value_t = 1)]
    pub parallel: usize,
    /// Re-check the covering condition after every orientation step.
    #[arg(long, global = true)]
    pub debug_recheck: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the covering condition over every subpartition.
    Check,
    /// Orient every hyperedge; `--out` receives the oriented instance.
    Orient,
    /// Check the covering condition on an instance without hyperedges.
    Verify,
    /// Check that h is intersecting supermodular and b submodular.
    Funcs,
    /// Uncross two subpartitions given in a pair file.
    Uncross {
        /// JSON file with `p1`, `p2` and an optional `pivot` hyperedge.
        #[arg(long)]
        pair: PathBuf,
    },
    /// Evaluate the packing condition of the instance's mode.
    PackCheck,
    /// Search exhaustively for a packing.
    PackSearch,
    /// Generate a random instance.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 4)]
    pub vertices: usize,
    #[arg(long, default_value_t = 3)]
    pub hyperedges: usize,
    #[arg(long, default_value_t = 2)]
    pub dyperedges: usize,
    /// constant, modular, k_minus_rank, table or any.
    #[arg(long, default_value = "any")]
    pub h_family: String,
    /// modular, rank, table or any.
    #[arg(long, default_value = "any")]
    pub b_family: String,
    /// Constant demand with zero budget: infeasible by construction.
    #[arg(long)]
    pub infeasible: bool,
    /// Push the instance towards tight subpartitions, keeping it feasible.
    #[arg(long)]
    pub tighten: bool,
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    match commands::execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
