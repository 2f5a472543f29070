//! Trajectories of the averaged map or of sampled measurement records.

use std::fmt::Write;
use std::path::Path;

use dqds_core::stability::distance_to_target;
use dqds_core::{apply_map, lyapunov_v, sample_outcome, DensityOperator, KrausMap, SubspaceSplit, Tolerances};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::io::read_matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Deterministic evolution `ρ ↦ Σ_k M_k ρ M_k†`.
    Averaged,
    /// One sampled outcome per step; the state is the conditioned one.
    Stochastic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub t: usize,
    pub v: f64,
    pub dist_s: f64,
    pub outcome: Option<usize>,
}

/// Parses `maximally-mixed`, `basis:k` or a path to a density matrix file.
pub fn parse_state(spec: &str, dim: usize, tol: &Tolerances) -> Result<DensityOperator> {
    if spec == "maximally-mixed" {
        return Ok(DensityOperator::maximally_mixed(dim));
    }
    if let Some(k) = spec.strip_prefix("basis:") {
        let k: usize = k
            .parse()
            .map_err(|_| CliError::Usage(format!("bad basis index in state spec {spec:?}")))?;
        if k >= dim {
            return Err(CliError::Usage(format!("basis index {k} out of range for dimension {dim}")));
        }
        return Ok(DensityOperator::basis_state(dim, k)?);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "state spec {spec:?} is neither maximally-mixed, basis:k, nor an existing file"
        )));
    }
    Ok(DensityOperator::new(read_matrix(path, dim)?, tol)?)
}

pub fn run(
    map: &KrausMap,
    split: &SubspaceSplit,
    rho0: &DensityOperator,
    steps: usize,
    mode: Mode,
    seed: u64,
) -> Result<Vec<Row>> {
    if steps == 0 {
        return Err(CliError::Usage("steps must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rho = rho0.clone();
    let mut rows = Vec::with_capacity(steps);
    for t in 1..=steps {
        let outcome = match mode {
            Mode::Averaged => {
                rho = apply_map(map, &rho)?;
                None
            }
            Mode::Stochastic => {
                let o = sample_outcome(map, &rho, rng.gen::<f64>())?;
                rho = o.state;
                Some(o.index)
            }
        };
        rows.push(Row {
            t,
            v: lyapunov_v(&rho, split)?,
            dist_s: distance_to_target(&rho, split)?,
            outcome,
        });
    }
    Ok(rows)
}

pub fn to_csv(rows: &[Row]) -> String {
    let with_outcome = rows.iter().any(|r| r.outcome.is_some());
    let mut out = String::from(if with_outcome { "t,V,dist_S,outcome\n" } else { "t,V,dist_S\n" });
    for r in rows {
        let _ = write!(out, "{},{},{}", r.t, r.v, r.dist_s);
        if let Some(k) = r.outcome {
            let _ = write!(out, ",{k}");
        }
        out.push('\n');
    }
    out
}
