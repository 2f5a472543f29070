//! Dense complex matrices and the numerical kernel used by every other
//! module.
//!
//! All rank decisions are explicit: a direction is treated as null when its
//! singular value is at most `eps_rank · ‖A‖_F`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Numerical thresholds used for rank, zero-block, equality and spectral
/// decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Column dependence threshold, relative to the Frobenius norm.
    pub eps_rank: f64,
    /// A block whose Frobenius norm is at most this is zero.
    pub eps_zero: f64,
    /// Matrix equality threshold (Frobenius distance).
    pub eps_eq: f64,
    /// Margin below 1 a spectral radius must clear to count as contractive.
    pub eps_spectral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_rank: 1e-10,
            eps_zero: 1e-9,
            eps_eq: 1e-8,
            eps_spectral: 1e-9,
        }
    }
}

impl Tolerances {
    pub const STRICT: Tolerances = Tolerances {
        eps_rank: 1e-12,
        eps_zero: 1e-11,
        eps_eq: 1e-10,
        eps_spectral: 1e-11,
    };

    pub const LOOSE: Tolerances = Tolerances {
        eps_rank: 1e-8,
        eps_zero: 1e-7,
        eps_eq: 1e-6,
        eps_spectral: 1e-7,
    };

    pub fn new(eps_rank: f64, eps_zero: f64, eps_eq: f64, eps_spectral: f64) -> Result<Self> {
        let tol = Self {
            eps_rank,
            eps_zero,
            eps_eq,
            eps_spectral,
        };
        tol.validate()?;
        Ok(tol)
    }

    /// Looks up a named preset: `default`, `strict` or `loose`.
    pub fn from_profile(name: &str) -> Option<Self> {
        match name {
            "default" => Some(Self::default()),
            "strict" => Some(Self::STRICT),
            "loose" => Some(Self::LOOSE),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("eps_rank", self.eps_rank),
            ("eps_zero", self.eps_zero),
            ("eps_eq", self.eps_eq),
            ("eps_spectral", self.eps_spectral),
        ] {
            if !(value > 0.0 && value < 1e-2) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }
}

/// A dense complex matrix with finite entries.
///
/// Zero-sized dimensions are allowed so that empty subspace bases (an `n×0`
/// matrix) have a representation.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{}) [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "\n  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
        }
        write!(f, "\n]")
    }
}

impl ComplexMatrix {
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        if inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(inner))
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        Self::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    /// Builds a real matrix from its rows.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let zeros: Vec<Vec<f64>> = rows.iter().map(|r| alloc::vec![0.0; r.as_ref().len()]).collect();
        Self::from_parts(rows, &zeros)
    }

    /// Builds a matrix from separate real and imaginary row arrays.
    pub fn from_parts<R: AsRef<[f64]>, I: AsRef<[f64]>>(re: &[R], im: &[I]) -> Result<Self> {
        let rows = re.len();
        let cols = re.first().map_or(0, |r| r.as_ref().len());
        if im.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{rows} imaginary rows"),
                found: format!("{}", im.len()),
            });
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for (r, (re_row, im_row)) in re.iter().zip(im).enumerate() {
            let (re_row, im_row) = (re_row.as_ref(), im_row.as_ref());
            if re_row.len() != cols || im_row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: format!("{cols} columns in row {r}"),
                    found: format!("{} / {}", re_row.len(), im_row.len()),
                });
            }
            entries.extend(re_row.iter().zip(im_row).map(|(&a, &b)| C64::new(a, b)));
        }
        Self::from_row_slice(rows, cols, &entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        self.0.transpose().iter().copied().collect()
    }

    pub fn real_part(&self) -> Vec<Vec<f64>> {
        self.row_iter_map(|z| z.re)
    }

    pub fn imag_part(&self) -> Vec<Vec<f64>> {
        self.row_iter_map(|z| z.im)
    }

    fn row_iter_map(&self, f: impl Fn(C64) -> f64) -> Vec<Vec<f64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| f(self.0[(i, j)])).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        matmul(self, other)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_shape(self, other)?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_shape(self, other)?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.0)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows().min(self.cols())).map(|i| self.0[(i, i)]).sum()
    }

    /// Frobenius distance, or infinity when the shapes differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return f64::INFINITY;
        }
        frobenius(&(&self.0 - &other.0))
    }

    /// Copies the `rows × cols` block starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Self {
        Self(self.0.view((row, col), (rows, cols)).into_owned())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// `‖A†A − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.0.adjoint() * &self.0;
        frobenius(&(gram - DMatrix::identity(self.cols(), self.cols())))
    }

    /// `‖A − A†‖_F`, infinite for non-square input.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        frobenius(&(&self.0 - self.0.adjoint()))
    }
}

pub(crate) fn frobenius(m: &DMatrix<C64>) -> f64 {
    libm::sqrt(m.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

fn same_shape(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", a.rows(), a.cols()),
            found: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    Ok(())
}

pub(crate) fn require_square(a: &ComplexMatrix) -> Result<usize> {
    if a.is_square() {
        Ok(a.rows())
    } else {
        Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        })
    }
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} rows on the right operand", a.cols()),
            found: format!("{}", b.rows()),
        });
    }
    Ok(ComplexMatrix(&a.0 * &b.0))
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

/// Orthonormal basis (as columns) of the numerical kernel of `a`.
///
/// A right singular direction is null when its singular value is at most
/// `eps_rank · ‖a‖_F`. Returns a `cols × 0` matrix for a trivial kernel.
pub fn kernel_basis(a: &ComplexMatrix, tol: &Tolerances) -> ComplexMatrix {
    let n = a.cols();
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    if a.rows() == 0 {
        return ComplexMatrix::identity(n);
    }
    let threshold = tol.eps_rank * a.frobenius_norm();
    // Pad with zero rows so the SVD yields a full n×n right factor.
    let padded = if a.rows() < n {
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((0, 0), (a.rows(), n)).copy_from(&a.0);
        m
    } else {
        a.0.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let null: Vec<DVector<C64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect();
    if null.is_empty() {
        return ComplexMatrix::zeros(n, 0);
    }
    ComplexMatrix(DMatrix::from_columns(&null))
}

/// Orthonormal basis of `∩_k ker(mats[k])`, from the kernel of the vertical
/// stack of all matrices. A stack with `‖·‖_F ≤ eps_zero` counts as zero and
/// yields the identity.
pub fn kernel_intersection(mats: &[ComplexMatrix], tol: &Tolerances) -> Result<ComplexMatrix> {
    let first = mats.first().ok_or(Error::Empty("kernel_intersection needs at least one matrix"))?;
    let cols = first.cols();
    if let Some(bad) = mats.iter().find(|m| m.cols() != cols) {
        return Err(Error::DimensionMismatch {
            expected: format!("{cols} columns"),
            found: format!("{}", bad.cols()),
        });
    }
    let total_rows: usize = mats.iter().map(ComplexMatrix::rows).sum();
    let mut stacked = DMatrix::zeros(total_rows, cols);
    let mut row = 0;
    for m in mats {
        stacked.view_mut((row, 0), (m.rows(), cols)).copy_from(&m.0);
        row += m.rows();
    }
    if frobenius(&stacked) <= tol.eps_zero {
        return Ok(ComplexMatrix::identity(cols));
    }
    Ok(kernel_basis(&ComplexMatrix(stacked), tol))
}

/// Extends orthonormal columns to a square unitary.
///
/// The new columns come from Gram–Schmidt over `e₁, e₂, …` in index order
/// (two projection passes each), skipping candidates whose residual norm is
/// at most `eps_rank`.
pub fn orthonormal_completion(partial: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let n = partial.rows();
    let k = partial.cols();
    if k > n {
        return Err(Error::DimensionMismatch {
            expected: format!("at most {n} columns"),
            found: format!("{k}"),
        });
    }
    let residual = partial.unitarity_residual();
    if residual > tol.eps_eq {
        return Err(Error::NotOrthonormal { residual });
    }
    let mut basis: Vec<DVector<C64>> = (0..k).map(|j| partial.0.column(j).into_owned()).collect();
    for i in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = DVector::zeros(n);
        v[i] = ONE;
        for _ in 0..2 {
            for q in &basis {
                let c = q.dotc(&v);
                v.axpy(-c, q, ONE);
            }
        }
        let norm = v.norm();
        if norm > tol.eps_rank {
            basis.push(v / C64::new(norm, 0.0));
        }
    }
    if basis.len() != n {
        return Err(Error::Internal(format!(
            "orthonormal completion produced {} of {n} columns",
            basis.len()
        )));
    }
    Ok(ComplexMatrix(DMatrix::from_columns(&basis)))
}

/// Eigen-decomposition of a Hermitian matrix: real eigenvalues and the
/// unitary whose columns are the matching eigenvectors.
///
/// The input is symmetrized as `(A + A†)/2` first; no Hermiticity check is
/// made here.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    require_square(a)?;
    let sym = (&a.0 + a.0.adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    Ok((eig.eigenvalues.iter().copied().collect(), ComplexMatrix(eig.eigenvectors)))
}

/// Rebuilds `V diag(f(λ)) V†` from a Hermitian eigen-decomposition.
pub(crate) fn spectral_map(values: &[f64], vectors: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let mut scaled = vectors.0.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let s = C64::new(f(lambda), 0.0);
        for z in scaled.column_mut(j).iter_mut() {
            *z *= s;
        }
    }
    ComplexMatrix(scaled * vectors.0.adjoint())
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `[-eps_zero, 0)` are clamped to zero.
pub fn psd_sqrt(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    require_square(a)?;
    let residual = a.hermiticity_residual();
    if residual > tol.eps_eq {
        return Err(Error::NotHermitian { residual });
    }
    let (values, vectors) = hermitian_eigen(a)?;
    if let Some(&worst) = values.iter().find(|&&l| l < -tol.eps_zero) {
        return Err(Error::NotPositive { eigenvalue: worst });
    }
    Ok(spectral_map(&values, &vectors, |l| libm::sqrt(l.max(0.0))))
}

/// All eigenvalues of a square matrix, from its complex Schur form.
///
/// Deflation starts at machine epsilon; if the QR iteration stalls, which
/// happens with clusters of unimodular eigenvalues, it is retried with a
/// deflation threshold of a few ulps and a larger iteration budget.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = require_square(a)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let budget = 100 * n.max(10);
    let schur = [(1.0, budget), (4.0, 10 * budget), (64.0, 10 * budget)]
        .into_iter()
        .find_map(|(ulps, iters)| Schur::try_new(a.0.clone(), ulps * f64::EPSILON, iters))
        .ok_or_else(|| Error::Internal(format!("Schur iteration did not converge ({n}x{n})")))?;
    let values = schur
        .eigenvalues()
        .ok_or_else(|| Error::Internal(format!("Schur form not triangular ({n}x{n})")))?;
    Ok(values.iter().copied().collect())
}

/// Largest eigenvalue modulus. Zero for an empty matrix.
pub fn spectral_radius(a: &ComplexMatrix, _tol: &Tolerances) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn identity_product() {
        let a = real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(matmul(&ComplexMatrix::identity(2), &a).unwrap(), a);
    }

    #[test]
    fn raising_operator_is_nilpotent() {
        let sp = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(matmul(&sp, &sp).unwrap(), ComplexMatrix::zeros(2, 2));
        assert_eq!(sp.adjoint(), real(&[&[0.0, 0.0], &[1.0, 0.0]]));
    }

    #[test]
    fn matmul_rejects_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(matmul(&a, &a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn non_finite_entries_rejected() {
        let r = ComplexMatrix::from_real_rows(&[[f64::NAN]]);
        assert_eq!(r, Err(Error::NonFinite));
    }

    #[test]
    fn kernel_of_zero_and_invertible() {
        let k = kernel_basis(&ComplexMatrix::zeros(3, 3), &tol());
        assert_eq!(k.cols(), 3);
        assert!(k.unitarity_residual() < 1e-12);
        let inv = real(&[&[2.0, 1.0], &[1.0, 3.0]]);
        assert_eq!(kernel_basis(&inv, &tol()).cols(), 0);
    }

    #[test]
    fn kernel_of_wide_row() {
        let a = real(&[&[1.0, 0.0, 0.0]]);
        let k = kernel_basis(&a, &tol());
        assert_eq!((k.rows(), k.cols()), (3, 2));
        assert!(matmul(&a, &k).unwrap().frobenius_norm() < 1e-14);
        assert!(k.unitarity_residual() < 1e-12);
        // No weight on e₁.
        for j in 0..2 {
            assert!(k.get(0, j).norm() < 1e-14);
        }
    }

    #[test]
    fn kernel_intersection_cases() {
        let a = real(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let alone = kernel_basis(&a, &tol());
        let both = kernel_intersection(&[a.clone(), ComplexMatrix::zeros(2, 2)], &tol()).unwrap();
        assert_eq!(alone.cols(), 1);
        assert_eq!(both.cols(), 1);
        let p1 = matmul(&alone, &alone.adjoint()).unwrap();
        let p2 = matmul(&both, &both.adjoint()).unwrap();
        assert!(p1.distance(&p2) < 1e-12);

        let id = kernel_intersection(&[ComplexMatrix::identity(3)], &tol()).unwrap();
        assert_eq!(id.cols(), 0);
        assert!(kernel_intersection(&[], &tol()).is_err());
        let bad = kernel_intersection(&[ComplexMatrix::zeros(1, 2), ComplexMatrix::zeros(1, 3)], &tol());
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));

        let noise = real(&[&[1e-17, -3e-17], &[2e-17, 1e-17]]);
        assert_eq!(kernel_basis(&noise, &tol()).cols(), 0);
        assert_eq!(kernel_intersection(&[noise], &tol()).unwrap(), ComplexMatrix::identity(2));
    }

    #[test]
    fn completion_is_deterministic() {
        assert_eq!(
            orthonormal_completion(&ComplexMatrix::zeros(2, 0), &tol()).unwrap(),
            ComplexMatrix::identity(2)
        );
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let partial = real(&[&[h], &[h]]);
        let u = orthonormal_completion(&partial, &tol()).unwrap();
        assert!(u.distance(&real(&[&[h, h], &[h, -h]])) < 1e-15);
        assert!(u.unitarity_residual() < 1e-14);
    }

    #[test]
    fn completion_rejects_non_orthonormal() {
        let partial = real(&[&[1.0], &[1.0]]);
        assert!(matches!(
            orthonormal_completion(&partial, &tol()),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn sqrt_of_diagonal() {
        let a = real(&[&[4.0, 0.0], &[0.0, 9.0]]);
        let s = psd_sqrt(&a, &tol()).unwrap();
        assert!(s.distance(&real(&[&[2.0, 0.0], &[0.0, 3.0]])) < 1e-14);
        let id = psd_sqrt(&ComplexMatrix::identity(3), &tol()).unwrap();
        assert!(id.distance(&ComplexMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn sqrt_rejects_bad_input() {
        let skew = real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        assert!(matches!(psd_sqrt(&skew, &tol()), Err(Error::NotHermitian { .. })));
        let neg = real(&[&[1.0, 0.0], &[0.0, -0.5]]);
        assert!(matches!(psd_sqrt(&neg, &tol()), Err(Error::NotPositive { .. })));
        // Tiny negative eigenvalues are clamped.
        let almost = real(&[&[1.0, 0.0], &[0.0, -1e-12]]);
        let s = psd_sqrt(&almost, &tol()).unwrap();
        assert!(s.get(1, 1).norm() < 1e-12);
    }

    #[test]
    fn spectral_radius_simple() {
        assert!((spectral_radius(&ComplexMatrix::identity(3), &tol()).unwrap() - 1.0).abs() < 1e-14);
        let d = real(&[&[0.5, 0.0], &[0.0, -0.9]]);
        assert!((spectral_radius(&d, &tol()).unwrap() - 0.9).abs() < 1e-14);
        // Rotation: eigenvalues ±i.
        let rot = real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!((spectral_radius(&rot, &tol()).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(
            spectral_radius(&ComplexMatrix::zeros(2, 3), &tol()),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerances::default().validate().is_ok());
        assert!(Tolerances::new(0.0, 1e-9, 1e-8, 1e-9).is_err());
        assert!(Tolerances::new(1e-10, 1e-9, 0.5, 1e-9).is_err());
        assert_eq!(Tolerances::from_profile("strict"), Some(Tolerances::STRICT));
        assert_eq!(Tolerances::from_profile("nope"), None);
    }

    #[test]
    fn row_major_roundtrip() {
        let entries = vec![C64::new(1.0, 2.0), C64::new(3.0, 0.0), C64::new(0.0, -1.0), C64::new(5.0, 5.0)];
        let m = ComplexMatrix::from_row_slice(2, 2, &entries).unwrap();
        assert_eq!(m.get(0, 1), C64::new(3.0, 0.0));
        assert_eq!(m.to_row_major(), entries);
        let back = ComplexMatrix::from_parts(&m.real_part(), &m.imag_part()).unwrap();
        assert_eq!(back, m);
    }
}
