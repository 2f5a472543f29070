//! The two-qubit Bell-state stabilization demo.
//!
//! Builds the decay map from its `σ₊` definition, moves it to the Bell
//! basis, and runs analysis, synthesis, closed-loop analysis and an
//! averaged simulation, checking each stage against the known values.

use std::fmt::Write;
use std::path::Path;

use dqds_core::synthesis::SynthesisResult;
use dqds_core::{
    bell, canonical_form, closed_loop, feasibility_check, synthesize_controls, ComplexMatrix, DensityOperator,
    KrausMap, SubspaceSplit, Tolerances,
};

use crate::error::{CliError, Result};
use crate::io::{to_json, write_text, ControlsFile, KrausFile};
use crate::report::AnalysisReport;
use crate::simulate::{self, Mode};

/// Entry tolerance for values known to four decimals.
pub const GOLDEN_TOL: f64 = 1e-3;
pub const SIMULATION_STEPS: usize = 200;
pub const KRAUS_FILE: &str = "bell.kraus.json";

pub struct Bundle {
    pub map: KrausMap,
    pub kraus_json: String,
    pub open_report: AnalysisReport,
    pub synthesis: SynthesisResult,
    pub closed_loop: KrausMap,
    pub closed_report: AnalysisReport,
    pub trajectory_csv: String,
    pub summary: String,
    pub mismatches: Vec<String>,
}

/// The decay map in Bell-basis coordinates as a Kraus file.
pub fn bell_kraus_json() -> Result<(KrausMap, String)> {
    let map = bell::bell_map()?;
    let file = KrausFile::from_map(
        &map,
        Some("two-qubit spontaneous emission"),
        Some("Bell basis: Phi+, Phi-, Psi+, Psi-"),
    );
    Ok((map, to_json(&file)))
}

fn max_entry_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            worst = worst.max((a.get(i, j) - b.get(i, j)).norm());
        }
    }
    worst
}

pub fn run(tol: &Tolerances) -> Result<Bundle> {
    let (map, kraus_json) = bell_kraus_json()?;
    let split = SubspaceSplit::standard(4, 1)?;
    let mut summary = String::new();
    let mut mismatches = Vec::new();
    let mut check = |ok: bool, what: String, summary: &mut String| {
        let _ = writeln!(summary, "[{}] {what}", if ok { "ok" } else { "MISMATCH" });
        if !ok {
            mismatches.push(what);
        }
    };

    for (k, (op, expected)) in map.ops().iter().zip(bell::reference_r_factors()).enumerate() {
        let r = canonical_form(op, tol)?;
        let diff = max_entry_diff(&r, &expected);
        check(diff <= GOLDEN_TOL, format!("R_{} matches reference, max entry diff {diff:.2e}", k + 1), &mut summary);
    }
    let r1 = canonical_form(&map.ops()[0], tol)?;
    let p1 = [r1.get(0, 1), r1.get(0, 2), r1.get(0, 3)];
    let target = [-(2f64.sqrt()) / 4.0, 0.0, 0.0];
    let p_diff = p1.iter().zip(target).map(|(z, t)| (z - t).norm()).fold(0.0, f64::max);
    check(p_diff <= GOLDEN_TOL, format!("R_P,1 = [-sqrt(2)/4, 0, 0], max diff {p_diff:.2e}"), &mut summary);

    let input = Some((Path::new(KRAUS_FILE), kraus_json.as_bytes()));
    let (open_report, _) = AnalysisReport::build(&map, &split, tol, input)?;
    check(!open_report.invariant, "open loop does not leave Phi+ invariant".into(), &mut summary);

    let feasible = feasibility_check(&map, &split, tol)?;
    check(feasible, "feasibility check passes".into(), &mut summary);
    let synthesis = synthesize_controls(&map, &split, tol)?;
    if !synthesis.feasible {
        return Err(CliError::Golden("synthesis reported the Bell problem infeasible".into()));
    }
    let remainders: Vec<usize> = synthesis.subspace_chain.iter().map(|&(_, r)| r).collect();
    check(
        synthesis.iterations <= 2 && remainders == [3, 2],
        format!("synthesis: {} iterations, remainder dims {remainders:?} then empty kernel", synthesis.iterations),
        &mut summary,
    );

    let closed = closed_loop(&map, &synthesis.controls)?;
    let (closed_report, _) = AnalysisReport::build(&closed, &split, tol, None)?;
    check(
        closed_report.invariant && closed_report.gas,
        format!(
            "closed loop invariant and GAS, corner spectral radius {:.6}",
            closed_report.corner_spectral_radius
        ),
        &mut summary,
    );

    let b = bell::bell_basis();
    let reference: Vec<ComplexMatrix> = bell::reference_controls()
        .iter()
        .map(|u| b.adjoint().matmul(u)?.matmul(&b))
        .collect::<dqds_core::Result<_>>()?;
    let reference_loop = closed_loop(&map, &reference)?;
    let range_diff = reference_loop
        .ops()
        .iter()
        .zip(closed.ops())
        .map(|(a, c)| a.distance(c))
        .fold(0.0, f64::max);
    let (reference_report, _) = AnalysisReport::build(&reference_loop, &split, tol, None)?;
    check(
        reference_report.gas && range_diff <= GOLDEN_TOL,
        format!("reference controls: GAS = {}, max |U_k M_k - N_k| = {range_diff:.2e}", reference_report.gas),
        &mut summary,
    );

    let rows = simulate::run(
        &closed,
        &split,
        &DensityOperator::maximally_mixed(4),
        SIMULATION_STEPS,
        Mode::Averaged,
        0,
    )?;
    let final_v = rows.last().map_or(f64::NAN, |r| r.v);
    check(final_v <= 1e-6, format!("V after {SIMULATION_STEPS} averaged steps = {final_v:.3e}"), &mut summary);

    Ok(Bundle {
        map,
        kraus_json,
        open_report,
        synthesis,
        closed_loop: closed,
        closed_report,
        trajectory_csv: simulate::to_csv(&rows),
        summary,
        mismatches,
    })
}

impl Bundle {
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let controls = ControlsFile::from_result(4, &self.synthesis);
        let closed = KrausFile::from_map(&self.closed_loop, Some("Bell closed loop"), Some("Bell basis"));
        for (name, text) in [
            (KRAUS_FILE, self.kraus_json.clone()),
            ("analysis.open.json", to_json(&self.open_report)),
            ("controls.json", to_json(&controls)),
            ("closed_loop.kraus.json", to_json(&closed)),
            ("analysis.closed.json", to_json(&self.closed_report)),
            ("trajectory.csv", self.trajectory_csv.clone()),
        ] {
            write_text(&dir.join(name), &text)?;
        }
        Ok(())
    }
}
