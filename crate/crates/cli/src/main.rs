//! Binary entry point: argument parsing, dispatch, and output framing.

use clap::{Parser, Subcommand, ValueEnum};
use noether_cli::commands::{self, CommandOutput, Failure};
use noether_cli::corpus;
use noether_cli::model::{parse_model, ModelFile};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "noether",
    about = "Symbolic variational calculus: Euler-Lagrange operators, symmetries, and certified conservation laws"
)]
struct Cli {
    /// Model file declaring the bundle, densities, and fields.
    #[arg(short, long, global = true)]
    model: Option<PathBuf>,

    /// Output encoding; both carry the same fields.
    #[arg(long, global = true, value_enum, default_value_t)]
    format: Format,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(ValueEnum, Clone, Copy, Default)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Euler-Lagrange components of a density.
    El { lagrangian: String },
    /// Jet prolongation coefficients of a vector field.
    Prolong {
        field: String,
        /// Prolongation order.
        #[arg(long, default_value_t = 1)]
        order: u8,
    },
    /// Lie derivative of a density along a field.
    Lie { field: String, lagrangian: String },
    /// First variation split into interior and boundary parts.
    Decompose { field: String, lagrangian: String },
    /// Triviality verdict with a source-form certificate.
    Trivial { lagrangian: String },
    /// Conserved current of the symmetry bracket.
    Current { field: String, lagrangian: String },
    /// Classify a symmetry candidate and certify its conservation law.
    Verify { field: String, lagrangian: String },
    /// Compare the two Lie-derivative routes through the Euler-Lagrange
    /// operator.
    Identity { field: String, lagrangian: String },
    /// Check that a trivial shift leaves the conservation law unchanged.
    Samelaw {
        lagrangian: String,
        shift: String,
        field: String,
    },
    /// Run every check over a directory of models (built-in set by default).
    Corpus { dir: Option<PathBuf> },
}

fn load_model(path: Option<&PathBuf>) -> Result<ModelFile, Failure> {
    let path = path.ok_or_else(|| Failure::Input("--model is required for this command".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&path.display().to_string(), &text).map_err(Failure::Diag)
}

fn run(cli: &Cli) -> Result<CommandOutput, Failure> {
    if let Cmd::Corpus { dir } = &cli.cmd {
        return corpus::run(dir.as_deref());
    }
    let model = load_model(cli.model.as_ref())?;
    match &cli.cmd {
        Cmd::El { lagrangian } => commands::run_el(&model, lagrangian),
        Cmd::Prolong { field, order } => commands::run_prolong(&model, field, *order),
        Cmd::Lie { field, lagrangian } => commands::run_lie(&model, field, lagrangian),
        Cmd::Decompose { field, lagrangian } => commands::run_decompose(&model, field, lagrangian),
        Cmd::Trivial { lagrangian } => commands::run_trivial(&model, lagrangian),
        Cmd::Current { field, lagrangian } => commands::run_current(&model, field, lagrangian),
        Cmd::Verify { field, lagrangian } => commands::run_verify(&model, field, lagrangian),
        Cmd::Identity { field, lagrangian } => commands::run_identity(&model, field, lagrangian),
        Cmd::Samelaw {
            lagrangian,
            shift,
            field,
        } => commands::run_samelaw(&model, lagrangian, shift, field),
        Cmd::Corpus { .. } => unreachable!("handled before the model is loaded"),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json)
                        .expect("command output serializes to JSON")
                ),
            }
            std::process::exit(out.exit);
        }
        Err(f) => {
            eprintln!("{}", f.message());
            std::process::exit(f.exit());
        }
    }
}
