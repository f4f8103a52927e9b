//! `magvpt`: effective classical potential, ground-state scans and
//! weak/strong-field expansions for hydrogen in a magnetic field.

mod commands;
mod grid;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use commands::Describe;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "magvpt", version, about = "Hydrogen in a magnetic field by first-order variational perturbation theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Decimal digits for the series solver.
    #[arg(long, env = "MAGVPT_PRECISION", default_value_t = 50, global = true)]
    precision: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimized effective potential along one axis.
    Potential(commands::PotentialArgs),
    /// Ground-state and binding energies over a list of field strengths.
    GroundState(commands::GroundStateArgs),
    /// Weak-field expansion coefficients.
    WeakField(commands::WeakFieldArgs),
    /// Strong-field ln B expansion with term breakdown.
    StrongField(commands::StrongFieldArgs),
    /// Relative partition integral over a (rho, z) box.
    Partition(commands::PartitionArgs),
    /// Convert between natural and physical units.
    Units(commands::UnitsArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Potential(_) => "potential",
            Command::GroundState(_) => "ground-state",
            Command::WeakField(_) => "weak-field",
            Command::StrongField(_) => "strong-field",
            Command::Partition(_) => "partition",
            Command::Units(_) => "units",
        }
    }
}

/// Failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<magvpt::Error> for Failure {
    fn from(e: magvpt::Error) -> Self {
        let code = match e {
            magvpt::Error::InvalidInput(_) => 2,
            magvpt::Error::Domain(_) => 3,
            magvpt::Error::Singular(_) | magvpt::Error::Numerical { .. } => 4,
        };
        Self { code, message: e.to_string() }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let (table, parameters) = match &cli.command {
        Command::Potential(a) => (commands::potential(a)?, a.describe()),
        Command::GroundState(a) => (commands::ground_state(a)?, a.describe()),
        Command::WeakField(a) => (commands::weak_field(a, cli.precision)?, a.describe()),
        Command::StrongField(a) => (commands::strong_field(a)?, a.describe()),
        Command::Partition(a) => (commands::partition(a)?, a.describe()),
        Command::Units(a) => (commands::units(a)?, a.describe()),
    };
    let config = json!({
        "command": cli.command.name(),
        "parameters": parameters,
        "format": match cli.format { Format::Csv => "csv", Format::Json => "json" },
        "output": cli.output.as_ref().map(|p| p.display().to_string()),
        "precision": cli.precision,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let io_fail = |e: std::io::Error| Failure { code: 1, message: format!("write failed: {e}") };
    let mut sink: Box<dyn Write> = match &cli.output {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_fail)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    match cli.format {
        Format::Csv => table.write_csv(&config, &mut sink),
        Format::Json => table.write_json(&config, &mut sink),
    }
    .and_then(|_| sink.flush())
    .map_err(io_fail)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("magvpt {}: {}", cli.command.name(), f.message);
            ExitCode::from(f.code)
        }
    }
}
