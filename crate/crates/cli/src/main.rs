//! `secondary` — catalog inspection, reducer tables, identity checks and the
//! integral-equation solver from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod report;
mod suites;

/// Exit codes.
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Parser)]
#[command(name = "secondary", version, about = "Secondary measures, reducers and the secondary-polynomial operator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List catalog densities with intervals, reducibility and closed forms
    Catalog {
        #[arg(long)]
        json: bool,
        /// Show a single entry
        #[arg(long)]
        name: Option<String>,
    },
    /// Tabulate x, φ(x), μ(x), ψ(x) on a Chebyshev grid
    Reducer {
        #[arg(long)]
        density: String,
        #[arg(long, default_value_t = 11)]
        grid: usize,
        /// Add closed-form and quadrature reducers and their difference
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fourier coefficients of φ in the orthonormal basis
    Fourier {
        #[arg(long)]
        density: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run an identity suite and report residuals
    Verify {
        /// covariance, norm, triplet, fourier, sum, moments, coupling,
        /// composition, geoharmonic or all
        #[arg(long)]
        suite: String,
        #[arg(long, default_value = "lebesgue01")]
        density: String,
        #[arg(long)]
        json: bool,
    },
    /// Solve T(f) = g on a Chebyshev grid
    Solve {
        #[arg(long)]
        density: String,
        /// qN for the N-th secondary polynomial, or a CSV file of x,g(x)
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Geoharmonic identities; --table prints the generating-function table
    Geoharmonic {
        #[arg(long)]
        table: bool,
        #[arg(long)]
        json: bool,
    },
}

/// An error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub err: anyhow::Error,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            err: anyhow::anyhow!(msg.into()),
        }
    }
}

impl From<secondary::Error> for Failure {
    fn from(e: secondary::Error) -> Self {
        use secondary::Error as E;
        let code = match e {
            E::NotReducible(_) => EXIT_UNSUPPORTED,
            E::UnknownDensity(_) | E::InvalidParameter(_) | E::CapExceeded { .. } | E::InsufficientMoments { .. } => {
                EXIT_USAGE
            }
            _ => EXIT_FAIL,
        };
        Failure { code, err: e.into() }
    }
}

macro_rules! fails_with {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure { code: EXIT_FAIL, err: e.into() }
            }
        }
    )*};
}
fails_with!(anyhow::Error, io::Error, csv::Error, serde_json::Error);

pub type CmdResult = Result<u8, Failure>;

/// stdout, or the file given with `--output`.
pub fn sink(output: Option<&PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match output {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure {
            code: EXIT_USAGE,
            err: anyhow::anyhow!("cannot create {}: {e}", p.display()),
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Catalog { json, name } => commands::catalog(json, name.as_deref()),
        Cmd::Reducer {
            density,
            grid,
            compare,
            json,
            output,
        } => commands::reducer(&density, grid, compare, json, output.as_ref()),
        Cmd::Fourier { density, n, json } => commands::fourier(&density, n, json),
        Cmd::Verify { suite, density, json } => commands::verify(&suite, &density, json),
        Cmd::Solve {
            density,
            rhs,
            grid,
            json,
            output,
        } => commands::solve(&density, &rhs, grid, json, output.as_ref()),
        Cmd::Geoharmonic { table, json } => commands::geoharmonic(table, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
