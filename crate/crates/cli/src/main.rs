//! `expspec`: batch front end for spectra, continuation, boundary
//! asymptotics and graph polynomials.

mod commands;
mod input;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "expspec", version, about = "Spectra of poly-exponentials with varying exponents")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, env = "POLYEXP_WORKERS", global = true)]
    pub workers: Option<usize>,
    /// Relative residual a located zero must reach.
    #[arg(long, default_value_t = 1e-10, global = true)]
    pub tol_residual: f64,
    /// Distance below which zeros are merged into one cluster.
    #[arg(long, default_value_t = 1e-7, global = true)]
    pub tol_cluster: f64,
    /// Newton distance from a contour that counts as a zero on it.
    #[arg(long, default_value_t = 1e-8, global = true)]
    pub tol_boundary: f64,
    /// Tolerance for identifying congruent zeros.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol_match: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Zeros at a parameter point, one row per zero or congruence class.
    Spectrum(commands::SpectrumArgs),
    /// Real parts of the classes counted with multiplicity (λᵢ ascending, ρᵢ descending).
    Order(commands::PointArgs),
    /// Follow zeros along a parameter path.
    Track(commands::TrackArgs),
    /// Limit set of real parts at a point, within a window.
    LimitSet(commands::LimitSetArgs),
    /// Limit spectra at a boundary point of the cone.
    Boundary(commands::BoundaryArgs),
    /// Classify a tracked zero as the parameters approach the boundary.
    Growth(commands::GrowthArgs),
    /// Perron frontier of an exponent vector.
    Frontier(commands::FrontierArgs),
    /// Replace each edge by a directed path of its length.
    GraphSubdivide(commands::GraphLenArgs),
    /// Characteristic polynomial of the subdivided graph.
    GraphCharpoly(commands::CharpolyArgs),
    /// Perron polynomial det(I − A(t)).
    GraphPerron(commands::PerronArgs),
    /// Quotient Perron polynomial for an automorphism and eigenvalue.
    GraphQuotient(commands::QuotientArgs),
    /// Degree-count criteria against exact diagonalizability.
    GraphAudit(commands::GraphLenArgs),
    /// Built-in inputs and random graph corpora.
    Fixtures(commands::FixturesArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.workers {
        if n == 0 {
            eprintln!("error[invalid]: --workers must be at least 1");
            return ExitCode::from(2);
        }
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (report, err) = commands::run(&cli);
    let mut stdout = std::io::stdout().lock();
    if let Some(r) = report {
        let _ = stdout.write_all(r.render(cli.global.format).as_bytes());
    }
    match err {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(if e.is_numeric() { 3 } else { 2 })
        }
    }
}

pub type Outcome = (Option<Report>, Option<expspec::Error>);
