//! Measurement simulation by unitary feedback and iterative design of
//! stabilizing controls.
//!
//! Feedback acts after the measurement: outcome `k` is followed by the
//! unitary `U_k`, so the closed loop has Kraus operators `N_k = U_k M_k`.
//! Outcome probabilities are unchanged; only the conditioned states move.
//!
//! Since `F(U M) = F(M)` for the canonical form `F`, the set `{N_k}` is
//! reachable from `{M_k}` iff the canonical forms agree up to relabeling.
//!
//! The design loop works in split coordinates. Its invariant is
//! `A_k = V U_k M_k V†`, block upper triangular with respect to the nested
//! chain `H_S^(0) ⊕ H_S^(1) ⊕ … ⊕ H_R^(i)`. Each pass canonicalizes the
//! trailing corner in a basis where the off-diagonal block coupling it to
//! the previous level is `[R̄_P | 0]`, peeling off the directions that are
//! pushed toward the target. When the coupling vanishes altogether, a
//! Hadamard-like mixer `Y` trades populations between levels.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt::Write;

use nalgebra::DMatrix;

use crate::canonical::{canonical_qr, CanonicalQR};
use crate::error::{Error, Result};
use crate::linalg::{self, frobenius, ComplexMatrix, Tolerances, C64};
use crate::matching::maximum_matching;
use crate::stability::check_gas;
use crate::state::{validate_kraus, KrausMap, SubspaceSplit};

/// How one pass of the design loop ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The common kernel of the coupling blocks was a proper subspace;
    /// its complement becomes the next level.
    Shrink,
    /// No coupling, `dim H_R ≥ dim H_S`: the next level is the first
    /// `dim H_S` remainder directions, mixed with the current level.
    MixRemainder,
    /// No coupling, `dim H_R < dim H_S`: the remainder is mixed with the
    /// first `dim H_R` directions of the current level. Terminal.
    MixTarget,
    /// Trivial kernel or empty remainder. Terminal.
    Complete,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    pub feasible: bool,
    /// One unitary per Kraus operator, original coordinates. Empty when
    /// infeasible.
    pub controls: Vec<ComplexMatrix>,
    /// `(dim H_S^(i), dim H_R^(i))` for every pass.
    pub subspace_chain: Vec<(usize, usize)>,
    /// Number of kernel computations performed.
    pub iterations: usize,
    pub branches: Vec<Branch>,
    /// The accumulated basis change `V`, split coordinates.
    pub accumulated_basis: ComplexMatrix,
    /// The accumulated mixer `Z`, split coordinates.
    pub mixing: ComplexMatrix,
    pub diagnostics: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationMatch {
    /// `permutation[k] = j`: target operator `k` is realized from source `j`.
    pub permutation: Vec<usize>,
    /// `U_k` with `U_k M_{permutation[k]} ≈ N_k`.
    pub controls: Vec<ComplexMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Simulation {
    Match(SimulationMatch),
    /// No relabeling matches canonical forms. `distances[k][j]` is
    /// `‖F(N_k) − F(M_j)‖_F`.
    Infeasible { distances: Vec<Vec<f64>> },
}

/// Decides whether `target` can be produced from `source` by unitary
/// feedback and, if so, returns the relabeling and the controls.
pub fn simulate_measurement(source: &KrausMap, target: &KrausMap, tol: &Tolerances) -> Result<Simulation> {
    tol.validate()?;
    if source.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("dimension {}", source.dim()),
            found: format!("{}", target.dim()),
        });
    }
    if source.len() != target.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} operators", source.len()),
            found: format!("{}", target.len()),
        });
    }
    let fs: Vec<CanonicalQR> = source.ops().iter().map(|m| canonical_qr(m, tol)).collect::<Result<_>>()?;
    let ft: Vec<CanonicalQR> = target.ops().iter().map(|n| canonical_qr(n, tol)).collect::<Result<_>>()?;
    let distances: Vec<Vec<f64>> = ft
        .iter()
        .map(|t| fs.iter().map(|s| t.r.distance(&s.r)).collect())
        .collect();

    let n_ops = source.len();
    let pairing = maximum_matching(n_ops, n_ops, |k, j| distances[k][j] <= tol.eps_eq);
    let Some(permutation) = pairing.into_iter().collect::<Option<Vec<usize>>>() else {
        return Ok(Simulation::Infeasible { distances });
    };

    let mut controls = Vec::with_capacity(n_ops);
    for (k, &j) in permutation.iter().enumerate() {
        let u = ComplexMatrix::new(ft[k].q.as_dmatrix() * fs[j].q.as_dmatrix().adjoint())?;
        let n_k = &target.ops()[k];
        let err = u.matmul(&source.ops()[j])?.distance(n_k);
        let bound = 2.0 * tol.eps_eq * n_k.frobenius_norm().max(1.0);
        if err > bound {
            return Err(Error::Internal(format!(
                "simulation control {k} misses its target by {err:e} (bound {bound:e})"
            )));
        }
        controls.push(u);
    }
    Ok(Simulation::Match(SimulationMatch { permutation, controls }))
}

/// True iff some canonical `R` factor, in split coordinates, has a coupling
/// block `‖R_{P,k}‖_F > eps_zero`.
pub fn feasibility_check(map: &KrausMap, split: &SubspaceSplit, tol: &Tolerances) -> Result<bool> {
    tol.validate()?;
    let m = split.dim_s();
    let r = split.dim_r();
    for op in map.ops() {
        let f = canonical_qr(&split.to_split(op)?, tol)?;
        if f.r.block(0, m, m, r).frobenius_norm() > tol.eps_zero {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Designs controls `U_k` such that `{U_k M_k}` leaves `H_S` invariant and
/// makes it globally asymptotically stable, or reports infeasibility.
///
/// A feasible result is re-checked with [`check_gas`]; a failure there is
/// returned as [`Error::Internal`] together with the run's diagnostics.
pub fn synthesize_controls(map: &KrausMap, split: &SubspaceSplit, tol: &Tolerances) -> Result<SynthesisResult> {
    tol.validate()?;
    let n = split.dim_total();
    if map.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("dimension {n}"),
            found: format!("{}", map.dim()),
        });
    }
    let m = split.dim_s();
    let mut diagnostics = String::new();

    let mut ops: Vec<DMatrix<C64>> = Vec::with_capacity(map.len());
    let mut controls: Vec<DMatrix<C64>> = Vec::with_capacity(map.len());
    for (k, op) in map.ops().iter().enumerate() {
        let f = canonical_qr(&split.to_split(op)?, tol)?;
        note_boundary(&mut diagnostics, &f, k, 0);
        controls.push(f.q.as_dmatrix().adjoint());
        ops.push(f.r.into_dmatrix());
    }

    let identity = DMatrix::<C64>::identity(n, n);
    let feasible = ops
        .iter()
        .any(|a| frobenius(&a.view((0, m), (m, n - m)).into_owned()) > tol.eps_zero);
    if !feasible {
        let _ = writeln!(diagnostics, "all coupling blocks R_P vanish: no control can stabilize H_S");
        return Ok(SynthesisResult {
            feasible: false,
            controls: Vec::new(),
            subspace_chain: vec![(m, n - m)],
            iterations: 0,
            branches: Vec::new(),
            accumulated_basis: ComplexMatrix::new(identity.clone())?,
            mixing: ComplexMatrix::new(identity)?,
            diagnostics,
        });
    }

    let mut basis_v = identity.clone();
    let mut mixing_z = identity.clone();
    let mut chain = Vec::new();
    let mut branches = Vec::new();
    let mut s_off = 0;
    let mut s_dim = m;

    loop {
        let r_off = s_off + s_dim;
        let r_dim = n - r_off;
        chain.push((s_dim, r_dim));
        if chain.len() > n {
            return Err(Error::Internal(format!(
                "design loop exceeded {n} passes; chain {chain:?}\n{diagnostics}"
            )));
        }
        if r_dim == 0 {
            branches.push(Branch::Complete);
            break;
        }
        let couplings: Vec<ComplexMatrix> = ops
            .iter()
            .map(|a| ComplexMatrix::new(a.view((s_off, r_off), (s_dim, r_dim)).into_owned()))
            .collect::<Result<_>>()?;
        let kernel = linalg::kernel_intersection(&couplings, tol)?;
        let kappa = kernel.cols();
        let _ = writeln!(
            diagnostics,
            "pass {}: dim H_S = {s_dim}, dim H_R = {r_dim}, common kernel dim = {kappa}",
            chain.len()
        );
        if kappa == 0 {
            branches.push(Branch::Complete);
            break;
        }

        let (w, next_s_dim) = if kappa < r_dim {
            // Rows of W: complement of the kernel first, then the kernel.
            let completed = linalg::orthonormal_completion(&kernel, tol)?.into_dmatrix();
            let mut c = DMatrix::<C64>::zeros(r_dim, r_dim);
            c.columns_mut(0, r_dim - kappa)
                .copy_from(&completed.columns(kappa, r_dim - kappa));
            c.columns_mut(r_dim - kappa, kappa).copy_from(&completed.columns(0, kappa));
            branches.push(Branch::Shrink);
            (c.adjoint(), r_dim - kappa)
        } else if r_dim >= s_dim {
            mixing_z *= hadamard_mixer(n, s_off, r_off, s_dim);
            branches.push(Branch::MixRemainder);
            (DMatrix::identity(r_dim, r_dim), s_dim)
        } else {
            mixing_z *= hadamard_mixer(n, s_off, r_off, r_dim);
            branches.push(Branch::MixTarget);
            break;
        };

        let mut big_w = DMatrix::<C64>::identity(n, n);
        big_w.view_mut((r_off, r_off), (r_dim, r_dim)).copy_from(&w);
        let basis_from = basis_v.adjoint();
        for (k, (a, u)) in ops.iter_mut().zip(controls.iter_mut()).enumerate() {
            let corner = a.view((r_off, r_off), (r_dim, r_dim)).into_owned();
            let f = canonical_qr(&ComplexMatrix::new(&w * corner * w.adjoint())?, tol)?;
            note_boundary(&mut diagnostics, &f, k, chain.len());
            let q_adj = f.q.as_dmatrix().adjoint();
            let mut left = DMatrix::<C64>::identity(n, n);
            left.view_mut((r_off, r_off), (r_dim, r_dim)).copy_from(&(&q_adj * &w));
            *a = left * &*a * big_w.adjoint();

            let mut step = DMatrix::<C64>::identity(n, n);
            step.view_mut((r_off, r_off), (r_dim, r_dim))
                .copy_from(&(w.adjoint() * q_adj * &w));
            *u = &basis_from * step * &basis_v * &*u;
        }
        basis_v = big_w * basis_v;
        s_off = r_off;
        s_dim = next_s_dim;
    }

    let feedback = basis_v.adjoint() * &mixing_z * &basis_v;
    let b = split.basis().as_dmatrix();
    let controls: Vec<ComplexMatrix> = controls
        .iter()
        .map(|u| ComplexMatrix::new(b * (&feedback * u) * b.adjoint()))
        .collect::<Result<_>>()?;

    let result = SynthesisResult {
        feasible: true,
        iterations: chain.len(),
        controls,
        subspace_chain: chain,
        branches,
        accumulated_basis: ComplexMatrix::new(basis_v)?,
        mixing: ComplexMatrix::new(mixing_z)?,
        diagnostics,
    };
    verify(map, split, tol, result)
}

fn verify(map: &KrausMap, split: &SubspaceSplit, tol: &Tolerances, result: SynthesisResult) -> Result<SynthesisResult> {
    let worst_unitarity = result
        .controls
        .iter()
        .map(ComplexMatrix::unitarity_residual)
        .fold(0.0, f64::max);
    if worst_unitarity > tol.eps_eq {
        return Err(Error::Internal(format!(
            "synthesized control not unitary (residual {worst_unitarity:e})\n{}",
            result.diagnostics
        )));
    }
    let report = check_gas(&closed_loop(map, &result.controls)?, split, tol)?;
    if !report.invariant || !report.gas {
        return Err(Error::Internal(format!(
            "closed loop failed verification: invariant = {}, gas = {}, max ‖N_Q‖ = {:e}, corner radius = {:?}\nchain {:?}, branches {:?}\n{}",
            report.invariant,
            report.gas,
            report.max_q_norm,
            report.corner_spectral_radius,
            result.subspace_chain,
            result.branches,
            result.diagnostics
        )));
    }
    Ok(result)
}

fn note_boundary(diagnostics: &mut String, f: &CanonicalQR, k: usize, pass: usize) {
    if f.near_rank_boundary() {
        let _ = writeln!(
            diagnostics,
            "pass {pass}, operator {k}: pivot {:e} within 10x of rank threshold {:e}",
            f.smallest_pivot.unwrap_or(0.0),
            f.rank_threshold
        );
    }
}

/// Identity except on the pairs `(a + t, b + t)`, `t < d`, where it acts as
/// `[[1, 1], [1, −1]] / √2`.
fn hadamard_mixer(n: usize, a: usize, b: usize, d: usize) -> DMatrix<C64> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut y = DMatrix::<C64>::identity(n, n);
    for t in 0..d {
        let (i, j) = (a + t, b + t);
        y[(i, i)] = h;
        y[(i, j)] = h;
        y[(j, i)] = h;
        y[(j, j)] = -h;
    }
    y
}

/// The closed loop `{U_k M_k}`. Controls must be unitary within `eps_eq` of
/// the map's tolerances.
pub fn closed_loop(map: &KrausMap, controls: &[ComplexMatrix]) -> Result<KrausMap> {
    if controls.len() != map.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} controls", map.len()),
            found: format!("{}", controls.len()),
        });
    }
    let tol = map.tolerances();
    let mut ops = Vec::with_capacity(map.len());
    for (u, m) in controls.iter().zip(map.ops()) {
        let residual = u.unitarity_residual();
        if residual > tol.eps_eq {
            return Err(Error::NotUnitary { residual });
        }
        ops.push(u.matmul(m)?);
    }
    validate_kraus(ops, tol)
}
