//! Invariance and global asymptotic stability of a target subspace.
//!
//! Relative to a [`SubspaceSplit`] `H = H_S ⊕ H_R`, every operator has the
//! block form
//!
//! ```text
//! X = [ X_S  X_P ]
//!     [ X_Q  X_R ]
//! ```
//!
//! The set of states supported on `H_S` is invariant iff every Kraus
//! operator has `M_Q = 0`. For an invariant map, `V(ρ) = Tr(Π_R ρ)` is a
//! Lyapunov function and the subspace is GAS iff no invariant state lives
//! on `∩_k ker M_{k,P}`. That condition is decided here through the
//! spectral radius of the corner map `X ↦ Σ_k M_{k,R} X M_{k,R}†`, which is
//! strictly below one exactly when no such state exists.
//!
//! Functions taking a map or state accept them in the original coordinates
//! and convert through `split.basis()` internally; [`block_split`] expects
//! its argument already in split coordinates.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{self, frobenius, ComplexMatrix, Tolerances, C64};
use crate::state::{apply_map, apply_ops, DensityOperator, KrausMap, SubspaceSplit};

/// The four blocks of a matrix relative to `H_S ⊕ H_R`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSplit {
    /// `m × m`, `H_S → H_S`.
    pub s: ComplexMatrix,
    /// `m × r`, `H_R → H_S`.
    pub p: ComplexMatrix,
    /// `r × m`, `H_S → H_R`.
    pub q: ComplexMatrix,
    /// `r × r`, `H_R → H_R`.
    pub r_block: ComplexMatrix,
}

impl BlockSplit {
    pub fn assemble(&self) -> ComplexMatrix {
        let m = self.s.rows();
        let n = m + self.r_block.rows();
        let mut out = DMatrix::zeros(n, n);
        out.view_mut((0, 0), (m, m)).copy_from(self.s.as_dmatrix());
        out.view_mut((0, m), (m, n - m)).copy_from(self.p.as_dmatrix());
        out.view_mut((m, 0), (n - m, m)).copy_from(self.q.as_dmatrix());
        out.view_mut((m, m), (n - m, n - m)).copy_from(self.r_block.as_dmatrix());
        ComplexMatrix::new(out).expect("blocks are finite")
    }
}

/// Splits `x`, given in split coordinates, into its S/P/Q/R blocks.
pub fn block_split(x: &ComplexMatrix, split: &SubspaceSplit) -> Result<BlockSplit> {
    let n = split.dim_total();
    if x.rows() != n || x.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n}"),
            found: format!("{}x{}", x.rows(), x.cols()),
        });
    }
    let m = split.dim_s();
    let r = n - m;
    Ok(BlockSplit {
        s: x.block(0, 0, m, m),
        p: x.block(0, m, m, r),
        q: x.block(m, 0, r, m),
        r_block: x.block(m, m, r, r),
    })
}

/// Blocks of every Kraus operator, in split coordinates.
pub fn operator_blocks(map: &KrausMap, split: &SubspaceSplit) -> Result<Vec<BlockSplit>> {
    map.ops()
        .iter()
        .map(|m| block_split(&split.to_split(m)?, split))
        .collect()
}

fn max_q_norm(blocks: &[BlockSplit]) -> f64 {
    blocks.iter().map(|b| b.q.frobenius_norm()).fold(0.0, f64::max)
}

/// True iff `‖M_{k,Q}‖_F ≤ eps_zero` for every `k`.
pub fn check_invariance(map: &KrausMap, split: &SubspaceSplit, tol: &Tolerances) -> Result<bool> {
    Ok(max_q_norm(&operator_blocks(map, split)?) <= tol.eps_zero)
}

fn require_invariant(blocks: &[BlockSplit], tol: &Tolerances) -> Result<()> {
    let max_q_norm = max_q_norm(blocks);
    if max_q_norm > tol.eps_zero {
        return Err(Error::NotInvariant { max_q_norm });
    }
    Ok(())
}

fn check_state_dim(rho: &DensityOperator, split: &SubspaceSplit) -> Result<()> {
    if rho.dim() != split.dim_total() {
        return Err(Error::DimensionMismatch {
            expected: format!("dimension {}", split.dim_total()),
            found: format!("{}", rho.dim()),
        });
    }
    Ok(())
}

/// `V(ρ) = Tr(Π_R ρ)`, the population outside the target subspace.
pub fn lyapunov_v(rho: &DensityOperator, split: &SubspaceSplit) -> Result<f64> {
    check_state_dim(rho, split)?;
    let local = split.to_split(rho.matrix())?;
    let m = split.dim_s();
    Ok((m..split.dim_total()).map(|i| local.get(i, i).re).sum())
}

/// `ΔV(ρ) = V(T[ρ]) − V(ρ)` for an invariant map.
///
/// The value is computed directly and through the corner formula
/// `Tr[Σ_k M_{k,R} ρ_R M_{k,R}† − ρ_R]`; disagreement beyond `eps_eq` is
/// reported as an internal error.
pub fn delta_v(map: &KrausMap, rho: &DensityOperator, split: &SubspaceSplit, tol: &Tolerances) -> Result<f64> {
    check_state_dim(rho, split)?;
    let blocks = operator_blocks(map, split)?;
    require_invariant(&blocks, tol)?;

    let direct = lyapunov_v(&apply_map(map, rho)?, split)? - lyapunov_v(rho, split)?;

    let local = block_split(&split.to_split(rho.matrix())?, split)?;
    let rho_r = local.r_block.as_dmatrix();
    let mut corner = -rho_r.trace().re;
    for b in &blocks {
        let mr = b.r_block.as_dmatrix();
        corner += (mr * rho_r * mr.adjoint()).trace().re;
    }
    if (direct - corner).abs() > tol.eps_eq {
        return Err(Error::Internal(format!(
            "ΔV mismatch: direct {direct:e}, corner formula {corner:e}"
        )));
    }
    Ok(direct)
}

/// Orthonormal basis, in `H_R` coordinates, of `∩_k ker M_{k,P}`: the only
/// directions that states with `V = 1` may occupy without `V` decreasing.
pub fn zero_difference_locus(map: &KrausMap, split: &SubspaceSplit, tol: &Tolerances) -> Result<ComplexMatrix> {
    let blocks = operator_blocks(map, split)?;
    require_invariant(&blocks, tol)?;
    locus(&blocks, tol)
}

fn locus(blocks: &[BlockSplit], tol: &Tolerances) -> Result<ComplexMatrix> {
    let ps: Vec<ComplexMatrix> = blocks.iter().map(|b| b.p.clone()).collect();
    linalg::kernel_intersection(&ps, tol)
}

/// Matrix of the corner map `X ↦ Σ_k M_{k,R} X M_{k,R}†` acting on
/// column-stacked `vec(X)`: `Σ_k conj(M_{k,R}) ⊗ M_{k,R}`.
///
/// The result is `r² × r²` complex, i.e. `16·r⁴` bytes (about 16 MB at
/// `r = 32`).
pub fn corner_superoperator(map: &KrausMap, split: &SubspaceSplit) -> Result<ComplexMatrix> {
    let blocks = operator_blocks(map, split)?;
    Ok(superoperator_of(&blocks))
}

fn superoperator_of(blocks: &[BlockSplit]) -> ComplexMatrix {
    let r = blocks[0].r_block.rows();
    let mut sup = DMatrix::zeros(r * r, r * r);
    for b in blocks {
        let mr = b.r_block.as_dmatrix();
        sup += mr.conjugate().kronecker(mr);
    }
    ComplexMatrix::new(sup).expect("finite")
}

/// Evidence behind a GAS verdict.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// The map has a nonzero `Q` block; nothing further is claimed.
    NotInvariant,
    /// Corner spectral radius below `1 − eps_spectral`.
    Contractive,
    /// An invariant state supported on `H_R`, given in the original
    /// coordinates. `residual = ‖T[ρ̄] − ρ̄‖_F`; `locus_residual` is
    /// `‖Σ_k M_{k,P} ρ̄_R M_{k,P}†‖_F`, zero when the support lies in
    /// `∩_k ker M_{k,P}`.
    FixedState {
        state: ComplexMatrix,
        residual: f64,
        locus_residual: f64,
    },
    /// No fixed state could be extracted at the required accuracy.
    Unresolved,
}

impl Certificate {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::NotInvariant => "not-invariant",
            Certificate::Contractive => "contractive-corner",
            Certificate::FixedState { .. } => "fixed-state",
            Certificate::Unresolved => "unresolved",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub invariant: bool,
    /// Invariant and corner spectral radius `< 1 − eps_spectral`.
    pub gas: bool,
    pub corner_spectral_radius: f64,
    pub kernel_intersection_dim: usize,
    /// Structural sufficient condition for attractivity; `None` when the map
    /// is not invariant.
    pub sufficient_structural_test: Option<bool>,
    pub max_q_norm: f64,
    pub certificate: Certificate,
    pub details: String,
}

/// Maximum residual accepted for a fixed-state certificate.
pub const FIXED_STATE_RESIDUAL: f64 = 1e-6;

pub fn check_gas(map: &KrausMap, split: &SubspaceSplit, tol: &Tolerances) -> Result<StabilityReport> {
    let blocks = operator_blocks(map, split)?;
    let max_q = max_q_norm(&blocks);
    let invariant = max_q <= tol.eps_zero;
    let sup = superoperator_of(&blocks);
    let radius = linalg::spectral_radius(&sup, tol)?;
    let kernel = locus(&blocks, tol)?;
    let gas = invariant && radius < 1.0 - tol.eps_spectral;

    let mut details = String::new();
    let _ = write!(
        details,
        "max |M_Q| = {max_q:.3e}; corner spectral radius = {radius:.12}; dim ∩ker M_P = {}",
        kernel.cols()
    );

    let structural = if invariant {
        let passed = structural_test(&blocks, &kernel, tol)?;
        let _ = write!(
            details,
            "; structural sufficient test {}",
            if passed { "passed" } else { "not satisfied" }
        );
        Some(passed)
    } else {
        None
    };

    let certificate = if !invariant {
        Certificate::NotInvariant
    } else if gas {
        Certificate::Contractive
    } else {
        let cert = fixed_state(map, split, &blocks, &sup)?;
        match &cert {
            Certificate::FixedState { residual, locus_residual, .. } => {
                let _ = write!(
                    details,
                    "; invariant state on H_R found (residual {residual:.3e}, locus residual {locus_residual:.3e})"
                );
            }
            _ => details.push_str("; no invariant state could be extracted"),
        }
        cert
    };

    Ok(StabilityReport {
        invariant,
        gas,
        corner_spectral_radius: radius,
        kernel_intersection_dim: kernel.cols(),
        sufficient_structural_test: structural,
        max_q_norm: max_q,
        certificate,
        details,
    })
}

/// With `H_R = H_R' ⊕ H_R''`, `H_R'' = ∩_k ker M_{k,P}`, checks
/// `∩_k ker M_{k,R2} = {0}` (coupling `H_R'' → H_R'`) and `M_{k,R3} = 0`
/// (no coupling `H_R' → H_R''`).
fn structural_test(blocks: &[BlockSplit], kernel: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
    let r = blocks[0].r_block.rows();
    let inner = kernel.cols();
    if inner == 0 {
        return Ok(true);
    }
    if inner == r {
        return Ok(false);
    }
    let outer = r - inner;
    // Columns: H_R' first, then H_R''.
    let completed = linalg::orthonormal_completion(kernel, tol)?;
    let mut g = DMatrix::zeros(r, r);
    g.view_mut((0, 0), (r, outer))
        .copy_from(&completed.as_dmatrix().view((0, inner), (r, outer)));
    g.view_mut((0, outer), (r, inner)).copy_from(kernel.as_dmatrix());

    let mut r2s = Vec::with_capacity(blocks.len());
    for b in blocks {
        let local = g.adjoint() * b.r_block.as_dmatrix() * &g;
        let r3 = local.view((outer, 0), (inner, outer));
        if frobenius(&r3.into_owned()) > tol.eps_zero {
            return Ok(false);
        }
        r2s.push(ComplexMatrix::new(local.view((0, outer), (outer, inner)).into_owned())?);
    }
    Ok(linalg::kernel_intersection(&r2s, tol)?.cols() == 0)
}

/// Extracts an invariant state on `H_R` from the eigenvalue-1 eigenspace of
/// the corner superoperator.
fn fixed_state(
    map: &KrausMap,
    split: &SubspaceSplit,
    blocks: &[BlockSplit],
    sup: &ComplexMatrix,
) -> Result<Certificate> {
    let r = blocks[0].r_block.rows();
    let m = split.dim_s();
    let n = split.dim_total();
    let shifted = sup.as_dmatrix() - DMatrix::identity(r * r, r * r);
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");

    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));

    let ps: Vec<&DMatrix<C64>> = blocks.iter().map(|b| b.p.as_dmatrix()).collect();
    for &idx in order.iter().take(r * r) {
        if svd.singular_values[idx] > 1e-6 {
            break;
        }
        let v = v_t.row(idx).adjoint();
        let x = DMatrix::from_column_slice(r, r, v.as_slice());
        for candidate in hermitian_candidates(&x)? {
            let mut local = DMatrix::zeros(n, n);
            local.view_mut((m, m), (r, r)).copy_from(&candidate);
            let state = split.from_split(&ComplexMatrix::new(local)?)?;
            let image = apply_ops(map.ops(), state.as_dmatrix());
            let residual = frobenius(&(image - state.as_dmatrix()));
            if residual <= FIXED_STATE_RESIDUAL {
                let mut leak = DMatrix::zeros(m, m);
                for p in &ps {
                    leak += *p * &candidate * p.adjoint();
                }
                return Ok(Certificate::FixedState {
                    state,
                    residual,
                    locus_residual: frobenius(&leak),
                });
            }
        }
    }
    Ok(Certificate::Unresolved)
}

/// Unit-trace PSD matrices derived from a (possibly non-Hermitian) fixed
/// point: positive and negative parts of its Hermitian and anti-Hermitian
/// components. Fixed points of positive trace-non-increasing maps keep
/// these parts fixed.
fn hermitian_candidates(x: &DMatrix<C64>) -> Result<Vec<DMatrix<C64>>> {
    let herm = (x + x.adjoint()) * C64::new(0.5, 0.0);
    let anti = (x - x.adjoint()) * C64::new(0.0, -0.5);
    let mut out = Vec::new();
    for h in [herm, anti] {
        if frobenius(&h) < 1e-8 * frobenius(x).max(f64::MIN_POSITIVE) {
            continue;
        }
        let (values, vectors) = linalg::hermitian_eigen(&ComplexMatrix::new(h)?)?;
        for sign in [1.0, -1.0] {
            let part = linalg::spectral_map(&values, &vectors, |l| (sign * l).max(0.0));
            let trace = part.trace().re;
            if trace > 1e-12 {
                out.push(part.into_dmatrix() / C64::new(trace, 0.0));
            }
        }
    }
    Ok(out)
}

/// `‖ρ(t) − Π_S ρ(t) Π_S‖_F` for `t = 1..=steps`.
pub fn attractivity_distance(
    map: &KrausMap,
    rho0: &DensityOperator,
    split: &SubspaceSplit,
    steps: usize,
) -> Result<Vec<f64>> {
    check_state_dim(rho0, split)?;
    let trajectory = crate::state::iterate_map(map, rho0, steps)?;
    trajectory.iter().map(|rho| distance_to_target(rho, split)).collect()
}

/// `‖ρ − Π_S ρ Π_S‖_F` for a single state.
pub fn distance_to_target(rho: &DensityOperator, split: &SubspaceSplit) -> Result<f64> {
    let mut local = split.to_split(rho.matrix())?.into_dmatrix();
    let m = split.dim_s();
    local.view_mut((0, 0), (m, m)).fill(C64::new(0.0, 0.0));
    Ok(frobenius(&local))
}
