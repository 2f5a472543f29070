//! Density operators, Kraus maps and generalized measurements.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{self, frobenius, require_square, ComplexMatrix, Tolerances, C64, ONE};

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    mat: ComplexMatrix,
}

impl DensityOperator {
    /// Validates `mat` as a state.
    ///
    /// The matrix is symmetrized; eigenvalues in `[-eps_zero, 0)` are clamped
    /// to zero and the trace is renormalized when it is within `eps_eq` of 1.
    /// Larger violations are errors.
    pub fn new(mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        require_square(&mat)?;
        let residual = mat.hermiticity_residual();
        if residual > tol.eps_eq {
            return Err(Error::NotHermitian { residual });
        }
        let (values, vectors) = linalg::hermitian_eigen(&mat)?;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -tol.eps_zero {
            return Err(Error::NotPositive { eigenvalue: min });
        }
        let mut m = if min < 0.0 {
            linalg::spectral_map(&values, &vectors, |l| l.max(0.0)).into_dmatrix()
        } else {
            (mat.as_dmatrix() + mat.as_dmatrix().adjoint()) * C64::new(0.5, 0.0)
        };
        let trace = m.trace().re;
        if (trace - 1.0).abs() > tol.eps_eq {
            return Err(Error::BadTrace { trace });
        }
        m /= C64::new(trace, 0.0);
        Ok(Self {
            mat: ComplexMatrix::new(m)?,
        })
    }

    /// `I/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(n).scale(C64::new(1.0 / n as f64, 0.0)),
        }
    }

    /// The pure basis state `|k⟩⟨k|`.
    pub fn basis_state(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidArgument(format!("basis index {k} out of range for dimension {n}")));
        }
        let mut m = DMatrix::zeros(n, n);
        m[(k, k)] = ONE;
        Ok(Self {
            mat: ComplexMatrix::new(m)?,
        })
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if psi.is_empty() || !(norm_sqr > 0.0) {
            return Err(Error::InvalidArgument("pure state vector must be nonzero".into()));
        }
        let v = nalgebra::DVector::from_column_slice(psi) / C64::new(libm::sqrt(norm_sqr), 0.0);
        Ok(Self {
            mat: ComplexMatrix::new(&v * v.adjoint())?,
        })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

/// `‖Σ_k M_k†M_k − I‖_F`. Fails on empty input or unequal square shapes.
pub fn completeness_residual(ops: &[ComplexMatrix]) -> Result<f64> {
    let first = ops.first().ok_or(Error::Empty("a Kraus map needs at least one operator"))?;
    let n = require_square(first)?;
    let mut sum = DMatrix::<C64>::zeros(n, n);
    for (k, m) in ops.iter().enumerate() {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n} operators"),
                found: format!("operator {k} is {}x{}", m.rows(), m.cols()),
            });
        }
        sum += m.as_dmatrix().adjoint() * m.as_dmatrix();
    }
    Ok(frobenius(&(sum - DMatrix::identity(n, n))))
}

/// An ordered set of Kraus operators satisfying `Σ_k M_k†M_k = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap {
    ops: Vec<ComplexMatrix>,
    tol: Tolerances,
}

impl KrausMap {
    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.ops[0].rows()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Tolerances the map was validated with; reused for states it produces.
    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn completeness_residual(&self) -> f64 {
        completeness_residual(&self.ops).expect("validated at construction")
    }

    /// Re-expresses every operator as `B† M_k B`.
    pub fn change_basis(&self, basis: &ComplexMatrix) -> Result<KrausMap> {
        let ops = self
            .ops
            .iter()
            .map(|m| change_basis(m, basis, &self.tol))
            .collect::<Result<Vec<_>>>()?;
        validate_kraus(ops, &self.tol)
    }
}

pub fn validate_kraus(ops: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<KrausMap> {
    let residual = completeness_residual(&ops)?;
    if residual > tol.eps_eq {
        return Err(Error::Incomplete { residual });
    }
    Ok(KrausMap { ops, tol: *tol })
}

fn check_dim(map: &KrausMap, rho: &DensityOperator) -> Result<()> {
    if map.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("dimension {}", map.dim()),
            found: format!("{}", rho.dim()),
        });
    }
    Ok(())
}

/// `Σ_k M_k X M_k†` on raw matrices.
pub(crate) fn apply_ops(ops: &[ComplexMatrix], x: &DMatrix<C64>) -> DMatrix<C64> {
    let mut out = DMatrix::zeros(x.nrows(), x.ncols());
    for m in ops {
        let m = m.as_dmatrix();
        out += m * x * m.adjoint();
    }
    out
}

/// `T[ρ] = Σ_k M_k ρ M_k†`.
pub fn apply_map(map: &KrausMap, rho: &DensityOperator) -> Result<DensityOperator> {
    check_dim(map, rho)?;
    let out = apply_ops(&map.ops, rho.mat.as_dmatrix());
    DensityOperator::new(ComplexMatrix::new(out)?, &map.tol)
}

/// `[T(ρ₀), T²(ρ₀), …, T^steps(ρ₀)]`.
pub fn iterate_map(map: &KrausMap, rho0: &DensityOperator, steps: usize) -> Result<Vec<DensityOperator>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(steps);
    let mut rho = rho0.clone();
    for _ in 0..steps {
        rho = apply_map(map, &rho)?;
        out.push(rho.clone());
    }
    Ok(out)
}

/// A sampled measurement branch.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub index: usize,
    pub state: DensityOperator,
    pub probability: f64,
}

/// Outcome probabilities `p_k = Tr(M_k ρ M_k†)`.
pub fn outcome_probabilities(map: &KrausMap, rho: &DensityOperator) -> Result<Vec<f64>> {
    check_dim(map, rho)?;
    let r = rho.mat.as_dmatrix();
    Ok(map
        .ops
        .iter()
        .map(|m| {
            let m = m.as_dmatrix();
            (m * r * m.adjoint()).trace().re
        })
        .collect())
}

/// Samples a measurement outcome by inverse CDF over the ordered outcomes.
///
/// `u` must lie in `[0, 1)`. Returns the outcome index, its probability and
/// the post-measurement state `M_k ρ M_k† / p_k`.
pub fn sample_outcome(map: &KrausMap, rho: &DensityOperator, u: f64) -> Result<Outcome> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!("uniform sample {u} outside [0, 1)")));
    }
    let probs = outcome_probabilities(map, rho)?;
    let total: f64 = probs.iter().sum();
    let target = u * total;
    let mut cumulative = 0.0;
    let mut index = probs.len() - 1;
    for (k, &p) in probs.iter().enumerate() {
        cumulative += p;
        if target < cumulative {
            index = k;
            break;
        }
    }
    let probability = probs[index];
    if probability <= map.tol.eps_zero {
        return Err(Error::MeasureZero { index, probability });
    }
    let m = map.ops[index].as_dmatrix();
    let post = (m * rho.mat.as_dmatrix() * m.adjoint()) / C64::new(probability, 0.0);
    Ok(Outcome {
        index,
        state: DensityOperator::new(ComplexMatrix::new(post)?, &map.tol)?,
        probability,
    })
}

/// `B† X B` for a unitary `B`.
pub fn change_basis(x: &ComplexMatrix, basis: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    require_square(basis)?;
    let residual = basis.unitarity_residual();
    if residual > tol.eps_eq {
        return Err(Error::NotUnitary { residual });
    }
    let b = basis.as_dmatrix();
    if x.rows() != b.nrows() || x.cols() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", b.nrows()),
            found: format!("{}x{}", x.rows(), x.cols()),
        });
    }
    ComplexMatrix::new(b.adjoint() * x.as_dmatrix() * b)
}

/// Orthogonal decomposition `H = H_S ⊕ H_R`: the first `dim_s` columns of
/// `basis` span the target subspace, the rest span the remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSplit {
    dim_s: usize,
    basis: ComplexMatrix,
}

impl SubspaceSplit {
    pub fn new(dim_s: usize, basis: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let n = require_square(&basis)?;
        if dim_s == 0 || dim_s >= n {
            return Err(Error::InvalidSplit { dim_s, dim_total: n });
        }
        let residual = basis.unitarity_residual();
        if residual > tol.eps_eq {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { dim_s, basis })
    }

    /// Split along the standard basis: `H_S = span{e₁, …, e_m}`.
    pub fn standard(dim_total: usize, dim_s: usize) -> Result<Self> {
        Self::new(dim_s, ComplexMatrix::identity(dim_total), &Tolerances::default())
    }

    pub fn dim_total(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn dim_r(&self) -> usize {
        self.dim_total() - self.dim_s
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// `B† X B`: coordinates of `x` in the split basis.
    pub fn to_split(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check(x)?;
        let b = self.basis.as_dmatrix();
        ComplexMatrix::new(b.adjoint() * x.as_dmatrix() * b)
    }

    /// `B X B†`: back from split coordinates.
    pub fn from_split(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check(x)?;
        let b = self.basis.as_dmatrix();
        ComplexMatrix::new(b * x.as_dmatrix() * b.adjoint())
    }

    fn check(&self, x: &ComplexMatrix) -> Result<()> {
        let n = self.dim_total();
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", x.rows(), x.cols()),
            });
        }
        Ok(())
    }

    /// Projector onto `H_S` in the original coordinates.
    pub fn projector_s(&self) -> ComplexMatrix {
        let cols = self.basis.block(0, 0, self.dim_total(), self.dim_s);
        ComplexMatrix::new(cols.as_dmatrix() * cols.as_dmatrix().adjoint()).expect("finite")
    }
}
