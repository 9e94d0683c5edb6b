use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand};
use derham_cli::cache;
use derham_cli::commands::{self, CliError, Limits};
use derham_cli::document::{DocParameters, ReportDocument, Timing};
use derham_cli::render::{render, Format};
use derham_core::theorems::Statement;

/// Integral de Rham cohomology of affine spaces and its Bockstein spectral sequence.
#[derive(Parser)]
#[command(name = "derham", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON output (default).
    #[arg(long, global = true, conflicts_with_all = ["csv", "latex"])]
    json: bool,
    /// CSV output.
    #[arg(long, global = true, conflicts_with = "latex")]
    csv: bool,
    /// LaTeX tabular output.
    #[arg(long, global = true)]
    latex: bool,
    /// Lift the default bounds r <= 4, n <= 16.
    #[arg(long, global = true)]
    unsafe_bounds: bool,
    /// Reuse and store result documents in this directory.
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    /// Add wall-clock timing to the document.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integral cohomology groups H^i(Omega_n), nonzero degrees only.
    Cohomology {
        #[arg(short = 'r', long = "rank")]
        r: usize,
        #[arg(short = 'n', long = "degree")]
        n: usize,
    },
    /// Bockstein pages E_1 .. E_{nu+1} at a prime.
    Pages {
        #[arg(short = 'r', long = "rank")]
        r: usize,
        #[arg(short = 'n', long = "degree")]
        n: usize,
        #[arg(short = 'p', long = "prime")]
        p: u64,
    },
    /// Verification reports for one statement or for the whole sweep.
    Verify {
        /// Statement id (annihilation, cartier, couple_morphism, frobenius_iso,
        /// page_identification, filtration, example_deg4).
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        statement: Option<String>,
        /// Sweep every statement over 1 <= r' <= r, 0 <= n' <= n.
        #[arg(long)]
        all: bool,
        #[arg(short = 'r', long = "rank")]
        r: usize,
        #[arg(short = 'n', long = "degree")]
        n: usize,
        #[arg(short = 'p', long = "prime", conflicts_with = "all")]
        p: Option<u64>,
        #[arg(short = 'k', long = "page", conflicts_with = "all")]
        k: Option<usize>,
    },
    /// The ordered monomial basis of Omega^i_n.
    Basis {
        #[arg(short = 'r', long = "rank")]
        r: usize,
        #[arg(short = 'n', long = "degree")]
        n: usize,
        #[arg(short = 'i', long = "form-degree")]
        i: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Cohomology { .. } => "cohomology",
            Command::Pages { .. } => "pages",
            Command::Verify { .. } => "verify",
            Command::Basis { .. } => "basis",
        }
    }

    fn parameters(&self, statement: Option<Statement>) -> DocParameters {
        match *self {
            Command::Cohomology { r, n } => DocParameters::new(r, n),
            Command::Pages { r, n, p } => DocParameters {
                p: Some(p),
                ..DocParameters::new(r, n)
            },
            Command::Verify { all, r, n, p, k, .. } => DocParameters {
                p,
                k,
                all,
                statement: statement.map(|s| s.id().to_string()),
                ..DocParameters::new(r, n)
            },
            Command::Basis { r, n, i } => DocParameters {
                i: Some(i),
                ..DocParameters::new(r, n)
            },
        }
    }
}

fn statement_of(command: &Command) -> Result<Option<Statement>, CliError> {
    match command {
        Command::Verify {
            statement: Some(id), ..
        } => Statement::from_str(id)
            .map(Some)
            .map_err(|e| CliError::Usage(e.to_string())),
        _ => Ok(None),
    }
}

fn compute(command: &Command, statement: Option<Statement>) -> Result<ReportDocument, CliError> {
    match *command {
        Command::Cohomology { r, n } => Ok(commands::cohomology(r, n)),
        Command::Pages { r, n, p } => commands::pages(r, n, p),
        Command::Verify { r, n, p, k, .. } => match statement {
            Some(st) => commands::verify_statement(st, r, n, p, k),
            None => Ok(commands::verify_all(r, n)),
        },
        Command::Basis { r, n, i } => Ok(commands::basis(r, n, i)),
    }
}

fn run(cli: &Cli) -> Result<ReportDocument, CliError> {
    let start = Instant::now();
    let statement = statement_of(&cli.command)?;
    let params = cli.command.parameters(statement);
    Limits {
        unsafe_bounds: cli.unsafe_bounds,
    }
    .check(params.r, params.n)?;
    let name = cli.command.name();
    let cached = cli.cache.as_deref().and_then(|dir| cache::load(dir, name, &params));
    let mut doc = match cached {
        Some(doc) => doc,
        None => {
            let doc = compute(&cli.command, statement)?;
            if let Some(dir) = &cli.cache {
                if let Err(e) = cache::store(dir, &doc) {
                    eprintln!("warning: could not write cache in {}: {e}", dir.display());
                }
            }
            doc
        }
    };
    if cli.timing {
        doc.timing = Some(Timing {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    Ok(doc)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.csv {
        Format::Csv
    } else if cli.latex {
        Format::Latex
    } else {
        Format::Json
    };
    match run(&cli) {
        Ok(doc) => {
            print!("{}", render(&doc, format));
            if doc.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
