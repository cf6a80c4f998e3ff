use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use crnkit::dynamics::{complex_balance_residual, is_dynamically_equivalent, is_dynamically_equivalent_on};
use crnkit::format::crn::{format_network, parse_complex, parse_network};
use crnkit::format::ode::parse_ode;
use crnkit::format::report::{
    emit_equivalence, emit_net_vectors, emit_realization_report, emit_report, emit_trajectory, AnalysisReport,
    RealizationReport, ReportFormat,
};
use crnkit::generate::random_wr0_system;
use crnkit::realization::{certify_uniqueness_with, find_wr0_realization, DEFAULT_MAX_VERTICES};
use crnkit::simulate::simulate;
use crnkit::{MassActionSystem, OdeSystem};

const NEGATIVE: u8 = 2;
const INVARIANT_VIOLATION: u8 = 3;

/// Exact analysis of mass-action reaction networks and their weakly
/// reversible deficiency-zero realizations.
#[derive(Parser)]
#[command(name = "crnkit", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deficiency, linkage classes, and weak reversibility of a network.
    Analyze { network: PathBuf },
    /// Whether two networks generate the same ODE. Species are matched by name.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Compare net reaction vectors only at these complexes, e.g. "2 X + Y".
        #[arg(long, num_args = 1..)]
        on: Vec<String>,
    },
    /// Net reaction vector at every vertex.
    Netvec { network: PathBuf },
    /// Find the weakly reversible deficiency-zero realization of a polynomial system.
    Realize { system: PathBuf },
    /// Search every vertex partition and count valid realizations.
    Certify {
        system: PathBuf,
        /// Refuse inputs with more monomials than this.
        #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
        max_vertices: usize,
    },
    /// Integrate the mass-action ODE with fixed-step RK4.
    Simulate {
        network: PathBuf,
        /// Positive initial state, comma separated, in species order.
        #[arg(long, value_delimiter = ',', required = true)]
        x0: Vec<f64>,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        steps: usize,
        /// Reference state for the Lyapunov function, comma separated.
        #[arg(long = "ref", value_delimiter = ',')]
        reference: Option<Vec<f64>>,
    },
    /// Print a random weakly reversible deficiency-zero network.
    Random {
        #[arg(long)]
        species: usize,
        /// Class sizes, comma separated; one linkage class per entry.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_network(path: &Path) -> Result<MassActionSystem> {
    parse_network(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn load_ode(path: &Path) -> Result<OdeSystem> {
    parse_ode(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(NEGATIVE)
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let format = if cli.json { ReportFormat::Json } else { ReportFormat::Text };
    match &cli.command {
        Command::Analyze { network } => {
            let sys = load_network(network)?;
            print!("{}", emit_report(&AnalysisReport::new(&sys), format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { a, b, on } => {
            let a = load_network(a)?;
            let b = load_network(b)?;
            let b = b.with_species_order(a.species()).context("species must match by name")?;
            let (equivalent, subset) = if on.is_empty() {
                (is_dynamically_equivalent(&a, &b)?, None)
            } else {
                let subset = on
                    .iter()
                    .map(|text| parse_complex(text, a.species()).with_context(|| format!("--on {text:?}")))
                    .collect::<Result<Vec<_>>>()?;
                (is_dynamically_equivalent_on(&a, &b, &subset)?, Some(subset))
            };
            print!("{}", emit_equivalence(equivalent, subset.as_deref(), a.species(), format));
            Ok(verdict(equivalent))
        }
        Command::Netvec { network } => {
            let sys = load_network(network)?;
            print!("{}", emit_net_vectors(&sys, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Realize { system } => {
            let ode = load_ode(system)?;
            let result = find_wr0_realization(&ode);
            print!("{}", emit_realization_report(&RealizationReport::from_result(&ode, &result), format));
            Ok(verdict(result.system().is_some()))
        }
        Command::Certify { system, max_vertices } => {
            let ode = load_ode(system)?;
            let cert = certify_uniqueness_with(&ode, *max_vertices)?;
            print!("{}", emit_realization_report(&RealizationReport::from_certificate(&ode, &cert), format));
            if cert.is_violation() {
                eprintln!("error: {} valid realizations found; uniqueness is violated", cert.valid_count);
                return Ok(ExitCode::from(INVARIANT_VIOLATION));
            }
            Ok(verdict(cert.valid_count == 1))
        }
        Command::Simulate { network, x0, dt, steps, reference } => {
            let sys = load_network(network)?;
            let traj = simulate(&sys, x0, *dt, *steps, reference.as_deref())?;
            let residual = complex_balance_residual(&sys, traj.last_state())?;
            print!("{}", emit_trajectory(&sys, &traj, &residual, format));
            if traj.aborted {
                eprintln!("warning: state left the positive orthant; trajectory is partial");
            }
            Ok(verdict(!traj.aborted))
        }
        Command::Random { species, sizes, seed } => {
            if sizes.is_empty() {
                bail!("--sizes needs at least one class size");
            }
            let sys = random_wr0_system(*species, sizes.len(), sizes, *seed)?;
            print!("{}", format_network(&sys));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
