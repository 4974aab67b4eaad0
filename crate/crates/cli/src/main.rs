use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tg::{run_catalog, run_decompose, run_dilaton, run_topology, run_verify, Failure, Report, Source, DEFAULT_TOL};

#[derive(Parser)]
#[command(name = "tg", version, about = "Residual checks for left-invariant geometries with closed torsion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
struct Common {
    /// Named catalog entry
    #[arg(long)]
    example: Option<String>,
    /// JSON input file
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

impl Common {
    fn source(&self) -> Source {
        Source {
            example: self.example.clone(),
            input: self.input.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Bianchi identities, connection diagnostics and attached structures
    Verify(Common),
    /// Split into an abelian kernel and simple blocks
    Decompose(Common),
    /// Monotone iteration for −∇²u + u² = w on a periodic grid
    Dilaton(Common),
    /// Characteristic class obstruction for the fibration over a 4-manifold
    Topology {
        #[command(flatten)]
        common: Common,
        /// Range of the Diophantine listing
        #[arg(long, default_value_t = 12)]
        k_max: u32,
    },
    /// List catalog entries, or print one as a geometry file
    Catalog {
        #[arg(long)]
        example: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(report: Result<Report, Failure>, common: &Common) -> Result<bool, Failure> {
    let report = report?;
    let text = match common.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    emit(&text, common.output.as_ref())?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(c) => check_tol(c.tol).and_then(|_| finish(run_verify(&c.source(), c.tol.unwrap_or(DEFAULT_TOL)), c)),
        Command::Decompose(c) => check_tol(c.tol).and_then(|_| finish(run_decompose(&c.source(), c.tol.unwrap_or(DEFAULT_TOL)), c)),
        Command::Dilaton(c) => check_tol(c.tol).and_then(|_| finish(run_dilaton(&c.source(), c.tol), c)),
        Command::Topology { common, k_max } => finish(run_topology(&common.source(), *k_max), common),
        Command::Catalog { example, output } => {
            run_catalog(example.as_deref()).and_then(|t| emit(&t, output.as_ref())).map(|_| true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("tg: {e}");
            ExitCode::from(2)
        }
    }
}

fn check_tol(tol: Option<f64>) -> Result<(), Failure> {
    match tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(Failure::Input(format!("tolerance must be positive, got {t}"))),
        _ => Ok(()),
    }
}
