//! `slipchan`: reproducible, file-emitting front end for the channel spectrum library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use slipchan::eigen;
use slipchan::format::sig;
use slipchan::galerkin::{self, RunManifest};
use slipchan::modes::{emit_table, staircase};
use slipchan::verify::{run_suite, Suite, SuiteOptions};
use slipchan::{Family, Friction, PressureClass, WaveIndex};

use config::{Format, RunConfig};

/// Digits of every number printed by the commands.
const DIGITS: usize = 12;

#[derive(Debug)]
pub enum CliError {
    /// Invalid flags, invalid parameter combinations or library rejections.
    Usage(String),
    Io(String),
    /// A verification ran and at least one check failed.
    Failed,
}

impl From<slipchan::Error> for CliError {
    fn from(e: slipchan::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "slipchan", version, about = "Stokes spectrum and Galerkin runs in a slip-with-friction channel")]
struct Cli {
    /// JSON file with default parameters.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Wall rule; at most one of the three may be given.
#[derive(Args, Debug, Clone, Default)]
#[group(multiple = false)]
struct FrictionArgs {
    /// Finite friction coefficient β > 0.
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Perfect slip, β = 0.
    #[arg(long)]
    navier: bool,
    /// No slip, β = ∞.
    #[arg(long)]
    dirichlet: bool,
}

impl FrictionArgs {
    fn resolve(&self, cfg: &RunConfig) -> Result<Friction, CliError> {
        if self.navier {
            return Ok(Friction::Navier);
        }
        if self.dirichlet {
            return Ok(Friction::Dirichlet);
        }
        match self.beta {
            Some(b) if b == 0.0 => Err(CliError::Usage("--beta 0 is not accepted; use --navier for perfect slip".into())),
            Some(b) if b == f64::INFINITY => {
                Err(CliError::Usage("--beta inf is not accepted; use --dirichlet for no slip".into()))
            }
            Some(b) => Ok(Friction::finite(b)?),
            None => Ok(cfg.friction.unwrap_or(Friction::Finite(1.0))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum ClassArg {
    Const,
    Nonconst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum FamilyArg {
    Const,
    Nonconst,
    Merged,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Const => Family::ConstantP,
            FamilyArg::Nonconst => Family::NonConstantP,
            FamilyArg::Merged => Family::Merged,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum SuiteArg {
    Modes,
    Helmholtz,
    Oracle,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Modes => Suite::Modes,
            SuiteArg::Helmholtz => Suite::Helmholtz,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one eigenvalue and print it with its bracket and branch.
    Eigenvalue {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
        #[arg(long, value_enum, default_value = "const")]
        pressure_class: ClassArg,
        #[command(flatten)]
        friction: FrictionArgs,
    },
    /// Write the first distinct eigenvalues with multiplicities.
    Table {
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long)]
        count: Option<usize>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Recorded in JSON output; the table itself is deterministic.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        friction: FrictionArgs,
    },
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long)]
        max_index: Option<u32>,
        #[arg(long)]
        max_p: Option<u32>,
        /// Replace every tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Oracle grid cells.
        #[arg(long)]
        grid: Option<usize>,
        /// Also measure the oracle convergence order.
        #[arg(long)]
        convergence: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        friction: FrictionArgs,
    },
    /// Integrate a Galerkin system described by a JSON manifest.
    Simulate {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value = "trajectory.csv")]
        trajectory: PathBuf,
        #[arg(long, default_value = "energy.csv")]
        energy: PathBuf,
    },
    /// Write multiplicity-expanded staircases `beta,k,lambda_k` for several β.
    Figure {
        /// Comma-separated list; `0` is perfect slip and `inf` no slip.
        #[arg(long)]
        friction_list: Option<String>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_eigenvalue(m: u32, n: u32, p: u32, class: ClassArg, friction: Friction) -> Result<String, CliError> {
    let pclass = match class {
        ClassArg::Const => PressureClass::ConstantPressure,
        ClassArg::Nonconst => PressureClass::NonConstantPressure,
    };
    let idx = WaveIndex::new(m, n, p, pclass)?;
    let bracket = eigen::bracket(&idx, friction)?;
    let e = eigen::eigenvalue(&idx, friction)?;
    let mut s = String::new();
    let _ = writeln!(s, "index {idx}");
    let _ = writeln!(s, "friction {friction}");
    let _ = writeln!(s, "value {}", sig(e.value, DIGITS));
    match bracket {
        Some(b) => {
            let _ = writeln!(s, "bracket {} {}", sig(b.lo, DIGITS), sig(b.hi, DIGITS));
        }
        None => {
            let _ = writeln!(s, "bracket closed-form");
        }
    }
    let _ = writeln!(s, "branch {}", e.branch.map_or("closed-form", |b| b.as_str()));
    Ok(s)
}

fn cmd_table(cfg: &RunConfig, family: Option<FamilyArg>, count: Option<usize>, format: Option<Format>, seed: Option<u64>, friction: Friction) -> Result<String, CliError> {
    let family = family.map(Family::from).or(cfg.family).unwrap_or(Family::ConstantP);
    let count = count.or(cfg.count).unwrap_or(10);
    let table = emit_table(friction, family, count)?;
    Ok(match format.or(cfg.format).unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(seed.or(cfg.seed)),
    })
}

fn parse_friction_list(list: &str) -> Result<Vec<Friction>, CliError> {
    list.split(',')
        .map(|t| t.trim().parse::<Friction>().map_err(CliError::from))
        .collect()
}

fn beta_label(f: Friction) -> String {
    match f {
        Friction::Navier => "0".into(),
        Friction::Finite(b) => sig(b, DIGITS),
        Friction::Dirichlet => "inf".into(),
    }
}

fn cmd_figure(cfg: &RunConfig, list: Option<&str>, count: Option<usize>, family: Option<FamilyArg>) -> Result<String, CliError> {
    let list = list.or(cfg.friction_list.as_deref()).unwrap_or("0,1,10,inf");
    let frictions = parse_friction_list(list)?;
    let count = count.or(cfg.count).unwrap_or(46);
    let family = family.map(Family::from).or(cfg.family).unwrap_or(Family::ConstantP);
    let mut s = String::from("beta,k,lambda_k\n");
    for f in frictions {
        for (k, v) in staircase(f, family, count)?.iter().enumerate() {
            let _ = writeln!(s, "{},{},{}", beta_label(f), k + 1, sig(*v, DIGITS));
        }
    }
    Ok(s)
}

fn cmd_simulate(manifest: &Path, trajectory: &Path, energy: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(manifest)
        .map_err(|e| CliError::Io(format!("cannot read manifest {}: {e}", manifest.display())))?;
    let run: RunManifest =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid manifest {}: {e}", manifest.display())))?;
    let out = run.run()?;
    write_output(Some(trajectory), &galerkin::trajectory_csv(&out))?;
    write_output(Some(energy), &galerkin::energy_csv(&out))?;
    let last = out.trajectory.last().expect("trajectory holds the initial state");
    let mut s = String::new();
    let _ = writeln!(s, "modes {}", out.system.len());
    let _ = writeln!(s, "t {}", sig(last.t, DIGITS));
    for (k, (a, l)) in last.coeffs.iter().zip(&out.system.eigenvalues).enumerate() {
        let _ = writeln!(s, "A_{} {} lambda {}", k + 1, sig(*a, DIGITS), sig(*l, DIGITS));
    }
    let _ = writeln!(s, "dropped_tail {}", sig(out.dropped_tail, DIGITS));
    Ok(s)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SLIPCHAN_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("SLIPCHAN_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let cfg = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Eigenvalue { m, n, p, pressure_class, friction } => {
            let f = friction.resolve(&cfg)?;
            write_output(None, &cmd_eigenvalue(m, n, p, pressure_class, f)?)
        }
        Command::Table { family, count, out, format, seed, friction } => {
            let f = friction.resolve(&cfg)?;
            write_output(out.as_deref(), &cmd_table(&cfg, family, count, format, seed, f)?)
        }
        Command::Verify { suite, max_index, max_p, tol, grid, convergence, seed, out, friction } => {
            let defaults = SuiteOptions::default();
            let opts = SuiteOptions {
                friction: friction.resolve(&cfg)?,
                max_index: max_index.or(cfg.max_index).unwrap_or(defaults.max_index),
                max_p: max_p.or(cfg.max_p).unwrap_or(defaults.max_p),
                tol: tol.or(cfg.tol),
                grid: grid.or(cfg.grid).unwrap_or(defaults.grid),
                convergence,
                seed: seed.or(cfg.seed).unwrap_or(defaults.seed),
            };
            let report = run_suite(suite.into(), &opts)?;
            let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            write_output(out.as_deref(), &json)?;
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Failed)
            }
        }
        Command::Simulate { manifest, trajectory, energy } => {
            write_output(None, &cmd_simulate(&manifest, &trajectory, &energy)?)
        }
        Command::Figure { friction_list, count, family, out } => {
            write_output(out.as_deref(), &cmd_figure(&cfg, friction_list.as_deref(), count, family)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed) => ExitCode::from(1),
        Err(CliError::Usage(msg)) | Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
