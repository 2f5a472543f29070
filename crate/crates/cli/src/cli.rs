//! Command-line surface.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use dqds_core::{closed_loop, synthesize_controls, validate_kraus, KrausMap, SubspaceSplit, Tolerances};

use crate::error::{CliError, Result};
use crate::io::{self, to_json, write_text, ControlsFile};
use crate::report::AnalysisReport;
use crate::simulate::{self, Mode};
use crate::demo;

/// Environment variable naming the default tolerance preset.
pub const PROFILE_ENV: &str = "DQDS_TOLERANCE_PROFILE";

#[derive(Debug, Parser)]
#[command(name = "dqds", version, about = "Stability analysis and feedback synthesis for quantum Kraus maps")]
pub struct Cli {
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ToleranceArgs {
    /// Relative threshold for rank decisions.
    #[arg(long, global = true)]
    pub eps_rank: Option<f64>,
    /// Absolute threshold for treating a block as zero.
    #[arg(long, global = true)]
    pub eps_zero: Option<f64>,
    /// Threshold for equality of matrices and unitarity checks.
    #[arg(long, global = true)]
    pub eps_eq: Option<f64>,
    /// Margin below one required of the corner spectral radius.
    #[arg(long, global = true)]
    pub eps_spectral: Option<f64>,
}

impl ToleranceArgs {
    /// The preset named by `profile` (default preset if `None`) with any
    /// flag overrides applied.
    pub fn resolve(&self, profile: Option<&str>) -> Result<Tolerances> {
        let mut tol = match profile {
            None | Some("") => Tolerances::default(),
            Some(name) => Tolerances::from_profile(name).ok_or_else(|| {
                CliError::Usage(format!("unknown {PROFILE_ENV} {name:?}; expected default, strict or loose"))
            })?,
        };
        if let Some(v) = self.eps_rank {
            tol.eps_rank = v;
        }
        if let Some(v) = self.eps_zero {
            tol.eps_zero = v;
        }
        if let Some(v) = self.eps_eq {
            tol.eps_eq = v;
        }
        if let Some(v) = self.eps_spectral {
            tol.eps_spectral = v;
        }
        tol.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(tol)
    }
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Dimension of the target subspace.
    #[arg(long, default_value_t = 1)]
    pub dim_s: usize,
    /// Unitary whose first `dim-s` columns span the target subspace
    /// (default: standard basis).
    #[arg(long)]
    pub basis: Option<PathBuf>,
}

impl SplitArgs {
    fn split(&self, dim: usize, tol: &Tolerances) -> Result<SubspaceSplit> {
        if self.dim_s == 0 || self.dim_s >= dim {
            return Err(CliError::Usage(format!("--dim-s must lie in 1..{dim}, got {}", self.dim_s)));
        }
        let basis = match &self.basis {
            Some(path) => io::read_matrix(path, dim)?,
            None => dqds_core::ComplexMatrix::identity(dim),
        };
        Ok(SubspaceSplit::new(self.dim_s, basis, tol)?)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a Kraus file parses and satisfies completeness.
    Validate { file: PathBuf },
    /// Invariance and GAS report for a target subspace.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        split: SplitArgs,
        /// Report path (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Design stabilizing feedback controls.
    Synthesize {
        file: PathBuf,
        #[command(flatten)]
        split: SplitArgs,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Write a trajectory of `V` and the distance to the target as CSV.
    Simulate {
        file: PathBuf,
        /// Controls file from `synthesize`; the closed loop is simulated.
        #[arg(long)]
        controls: Option<PathBuf>,
        /// `maximally-mixed`, `basis:k`, or a density matrix file.
        #[arg(long)]
        init: String,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Averaged)]
        mode: Mode,
        #[command(flatten)]
        split: SplitArgs,
        /// CSV path (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Stabilize the Bell state of two decaying qubits.
    Bell {
        /// Directory for the generated files.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_text(p, text),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn say(out: &mut dyn Write, text: &str) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| CliError::io("<stdout>", e))
}

/// Runs a parsed command. `profile` is the tolerance preset name, usually
/// taken from [`PROFILE_ENV`].
pub fn run(cli: &Cli, profile: Option<&str>, out: &mut dyn Write) -> Result<()> {
    let tol = cli.tolerances.resolve(profile)?;
    match &cli.command {
        Command::Validate { file } => {
            let (ops, residual) = io::read_operators(file)?;
            say(out, &format!("completeness residual: {residual:e}"))?;
            let map = validate_kraus(ops, &tol)?;
            say(out, &format!("valid: {} operators of dimension {}", map.len(), map.dim()))
        }
        Command::Analyze { file, split, out: path } => {
            let bytes = std::fs::read(file).map_err(|e| CliError::io(file, e))?;
            let map = io::read_map(file, &tol)?;
            let split = split.split(map.dim(), &tol)?;
            let (report, _) = AnalysisReport::build(&map, &split, &tol, Some((file, &bytes)))?;
            emit(out, path.as_deref(), &to_json(&report))
        }
        Command::Synthesize { file, split, out: path } => {
            let map = io::read_map(file, &tol)?;
            let split = split.split(map.dim(), &tol)?;
            let res = synthesize_controls(&map, &split, &tol)?;
            write_text(path, &to_json(&ControlsFile::from_result(map.dim(), &res)))?;
            if !res.feasible {
                return Err(CliError::Infeasible);
            }
            say(out, &format!("feasible: {} iterations, chain {:?}", res.iterations, res.subspace_chain))
        }
        Command::Simulate { file, controls, init, steps, seed, mode, split, out: path } => {
            let mut map = io::read_map(file, &tol)?;
            if let Some(cpath) = controls {
                map = apply_controls(&map, cpath)?;
            }
            let split = split.split(map.dim(), &tol)?;
            let rho0 = simulate::parse_state(init, map.dim(), &tol)?;
            let rows = simulate::run(&map, &split, &rho0, *steps, *mode, *seed)?;
            emit(out, path.as_deref(), &simulate::to_csv(&rows))
        }
        Command::Demo { which: Demo::Bell { out_dir } } => {
            let bundle = demo::run(&tol)?;
            say(out, bundle.summary.trim_end())?;
            if let Some(dir) = out_dir {
                bundle.write(dir)?;
            }
            if !bundle.mismatches.is_empty() {
                return Err(CliError::Golden(bundle.mismatches.join("\n")));
            }
            Ok(())
        }
    }
}

fn apply_controls(map: &KrausMap, path: &Path) -> Result<KrausMap> {
    let file = io::read_controls(path)?;
    if !file.feasible {
        return Err(CliError::Usage(format!("{} holds no controls (infeasible synthesis)", path.display())));
    }
    let controls = file.matrices().map_err(|e| CliError::parse(path, e))?;
    Ok(closed_loop(map, &controls)?)
}
