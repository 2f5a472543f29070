//! Canonical QR decomposition.
//!
//! The factorization is built column by column with Gram–Schmidt, keeping
//! track of the rank profile `ρ_j` (rank of the first `j` columns). Entries
//! `r_ij` with `i > ρ_j` are exactly zero and each nonzero row of `R` starts
//! with a real positive pivot. Under these rules `R` is a canonical form for
//! the action of the unitary group by left multiplication: `F(UA) = F(A)`,
//! and `F(A) = F(B)` iff `A = WB` for some unitary `W`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::linalg::{self, require_square, ComplexMatrix, Tolerances, C64, ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalQR {
    /// Unitary factor. Columns past the rank come from the deterministic
    /// orthonormal completion.
    pub q: ComplexMatrix,
    /// Canonical upper triangular factor.
    pub r: ComplexMatrix,
    /// `rank_profile[j]` is the rank of columns `0..=j` of the input.
    pub rank_profile: Vec<usize>,
    /// Smallest residual norm that was accepted as a pivot.
    pub smallest_pivot: Option<f64>,
    /// The dependence threshold `eps_rank · ‖A‖_F` used for this input.
    pub rank_threshold: f64,
}

impl CanonicalQR {
    pub fn rank(&self) -> usize {
        self.rank_profile.last().copied().unwrap_or(0)
    }

    /// True when some accepted pivot was within 10x of the dependence
    /// threshold, i.e. a small perturbation could change the rank profile
    /// and hence the canonical form.
    pub fn near_rank_boundary(&self) -> bool {
        self.smallest_pivot
            .is_some_and(|p| p <= 10.0 * self.rank_threshold)
    }
}

/// Computes the canonical QR decomposition of a square matrix.
pub fn canonical_qr(a: &ComplexMatrix, tol: &Tolerances) -> Result<CanonicalQR> {
    let n = require_square(a)?;
    let m = a.as_dmatrix();
    let threshold = tol.eps_rank * a.frobenius_norm();

    let mut basis: Vec<DVector<C64>> = Vec::with_capacity(n);
    let mut r = DMatrix::<C64>::zeros(n, n);
    let mut rank_profile = Vec::with_capacity(n);
    let mut smallest_pivot: Option<f64> = None;

    for i in 0..n {
        let column = m.column(i);
        let mut residual: DVector<C64> = column.into_owned();
        let mut coeffs = alloc::vec![ZERO; basis.len()];
        // Project twice; the second pass restores orthogonality lost to
        // cancellation.
        for _ in 0..2 {
            for (l, q) in basis.iter().enumerate() {
                let c = q.dotc(&residual);
                coeffs[l] += c;
                residual.axpy(-c, q, ONE);
            }
        }
        for (l, c) in coeffs.into_iter().enumerate() {
            r[(l, i)] = c;
        }
        let norm = residual.norm();
        if norm > threshold && norm > 0.0 {
            r[(basis.len(), i)] = C64::new(norm, 0.0);
            basis.push(residual / C64::new(norm, 0.0));
            smallest_pivot = Some(smallest_pivot.map_or(norm, |p: f64| p.min(norm)));
        }
        rank_profile.push(basis.len());
    }

    let partial = if basis.is_empty() {
        ComplexMatrix::zeros(n, 0)
    } else {
        ComplexMatrix::new(DMatrix::from_columns(&basis))?
    };
    let q = linalg::orthonormal_completion(&partial, tol)?;
    Ok(CanonicalQR {
        q,
        r: ComplexMatrix::new(r)?,
        rank_profile,
        smallest_pivot,
        rank_threshold: threshold,
    })
}

/// The canonical form `F(A)`: the `R` factor of [`canonical_qr`].
pub fn canonical_form(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    Ok(canonical_qr(a, tol)?.r)
}

/// Checks the canonical-form conditions on `r` for the given rank profile:
/// well-formed profile, upper triangularity, zeros below the profile, and a
/// real positive leading entry on every nonzero row.
pub fn is_canonical(r: &ComplexMatrix, rank_profile: &[usize], tol: &Tolerances) -> bool {
    let Ok(n) = require_square(r) else {
        return false;
    };
    if rank_profile.len() != n {
        return false;
    }
    let mut prev = 0;
    for (j, &rho) in rank_profile.iter().enumerate() {
        if rho < prev || rho - prev > 1 || rho > j + 1 {
            return false;
        }
        prev = rho;
    }
    for j in 0..n {
        for i in 0..n {
            let entry = r.get(i, j).norm();
            if (i > j || i >= rank_profile[j]) && entry > tol.eps_zero {
                return false;
            }
        }
    }
    (0..n).all(|i| {
        match (0..n).map(|j| r.get(i, j)).find(|z| z.norm() > tol.eps_zero) {
            Some(lead) => lead.im.abs() <= tol.eps_zero && lead.re > 0.0,
            None => true,
        }
    })
}
