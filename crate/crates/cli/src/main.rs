use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod report;

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "lewiskit", version, about = "Intuitionistic strict implication: models, proofs and search")]
struct Cli {
    /// Emit one `key=value` record per line.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print its normal form.
    Parse { formula: String },
    /// Evaluate a formula in a model file.
    ModelCheck {
        model: PathBuf,
        formula: String,
        /// World name or index; without it the formula must hold everywhere.
        #[arg(long)]
        world: Option<String>,
        #[command(flatten)]
        dot: DotArg,
    },
    /// Decide whether a formula is valid on the frame of a model file.
    FrameCheck {
        model: PathBuf,
        formula: String,
        #[command(flatten)]
        dot: DotArg,
    },
    /// Check frame conditions on the frame of a model file.
    Condition {
        model: PathBuf,
        #[arg(long)]
        conds: String,
    },
    /// Run the correspondence test for rows of the pairing table.
    Correspond {
        /// Axiom names; all rows when omitted.
        axioms: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
    },
    /// Check a Hilbert proof file.
    Prove {
        file: PathBuf,
        /// Defaults to the `// logic:` header of the file.
        #[arg(long)]
        logic: Option<String>,
    },
    /// Search for a countermodel over a frame class.
    Search {
        formula: String,
        #[arg(long, conflicts_with = "logic")]
        conds: Option<String>,
        /// Use the frame class of this logic.
        #[arg(long)]
        logic: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Only rooted frames up to isomorphism, refuting at the root.
        #[arg(long)]
        reduced: bool,
        #[command(flatten)]
        dot: DotArg,
    },
    /// Intuitionistic propositional logic.
    Ipc {
        #[command(subcommand)]
        command: IpcCommand,
    },
    /// NNIL approximations.
    Nnil {
        #[command(subcommand)]
        command: NnilCommand,
    },
    /// Check the shipped example models and proof files.
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum IpcCommand {
    /// Decide provability; on failure print a poset countermodel.
    Prove {
        formula: String,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[command(flatten)]
        dot: DotArg,
    },
}

#[derive(Subcommand, Debug)]
enum NnilCommand {
    /// Best NNIL approximation from below.
    Star {
        formula: String,
        /// Comma-separated variables; defaults to the atoms of the formula.
        #[arg(long)]
        vars: Option<String>,
    },
}

#[derive(Args, Debug)]
struct DotArg {
    /// Write the model as Graphviz DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = Report::new(cli.machine);
    let outcome = commands::run(cli.command, &mut report);
    print!("{}", report.finish());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
