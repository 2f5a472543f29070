//! Two-qubit Bell-state stabilization problem.
//!
//! Two qubits undergo discrete-time spontaneous emission: each qubit decays
//! with probability 1/4 per step (`M₁ = ½ σ₊⊗I`, `M₂ = ½ I⊗σ₊`), and
//! `M₃ = √(I − M₁†M₁ − M₂†M₂)` is the no-decay branch. The target is the
//! maximally entangled state `(|00⟩ + |11⟩)/√2`.
//!
//! The computational basis is ordered `|00⟩, |01⟩, |10⟩, |11⟩`; the Bell
//! basis is `Φ+, Φ−, Ψ+, Ψ−` with `Φ± = (|00⟩ ± |11⟩)/√2` and
//! `Ψ± = (|01⟩ ± |10⟩)/√2`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::error::Result;
use crate::linalg::{self, ComplexMatrix, Tolerances, C64};
use crate::state::{validate_kraus, DensityOperator, KrausMap, SubspaceSplit};

/// `σ₊ = |0⟩⟨1|`.
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).expect("finite")
}

/// `M₁, M₂, M₃` in the computational basis.
pub fn computational_ops() -> Result<Vec<ComplexMatrix>> {
    let tol = Tolerances::default();
    let half = C64::new(0.5, 0.0);
    let id = ComplexMatrix::identity(2);
    let m1 = sigma_plus().kron(&id).scale(half);
    let m2 = id.kron(&sigma_plus()).scale(half);
    let decay = m1.adjoint().matmul(&m1)?.add(&m2.adjoint().matmul(&m2)?)?;
    let m3 = linalg::psd_sqrt(&ComplexMatrix::identity(4).sub(&decay)?, &tol)?;
    Ok(vec![m1, m2, m3])
}

pub fn computational_map() -> Result<KrausMap> {
    validate_kraus(computational_ops()?, &Tolerances::default())
}

/// Unitary `B` whose columns are the Bell states; `ρ^B = B† ρ B`.
pub fn bell_basis() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[
        [h, h, 0.0, 0.0],
        [0.0, 0.0, h, h],
        [0.0, 0.0, h, -h],
        [h, -h, 0.0, 0.0],
    ])
    .expect("finite")
}

/// The decay map expressed in the Bell basis.
pub fn bell_map() -> Result<KrausMap> {
    computational_map()?.change_basis(&bell_basis())
}

/// `H_S = span{Φ+}` inside the computational-basis Hilbert space.
pub fn split() -> Result<SubspaceSplit> {
    SubspaceSplit::new(1, bell_basis(), &Tolerances::default())
}

/// `|Φ+⟩⟨Φ+|` in the computational basis.
pub fn target_state() -> Result<DensityOperator> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    DensityOperator::pure(&[one, zero, zero, one])
}

/// Published canonical `R` factors of `M₁ᴮ, M₂ᴮ, M₃ᴮ`, to four decimals.
pub fn reference_r_factors() -> [ComplexMatrix; 3] {
    let q = SQRT_2 / 4.0;
    let r = |rows: [[f64; 4]; 4]| ComplexMatrix::from_real_rows(&rows).expect("finite");
    [
        r([
            [q, -q, 0.0, 0.0],
            [0.0, 0.0, q, -q],
            [0.0; 4],
            [0.0; 4],
        ]),
        r([
            [q, -q, 0.0, 0.0],
            [0.0, 0.0, q, q],
            [0.0; 4],
            [0.0; 4],
        ]),
        r([
            [0.8660, 0.2887, 0.0, 0.0],
            [0.0, 0.8165, 0.0, 0.0],
            [0.0, 0.0, 0.8660, 0.0],
            [0.0, 0.0, 0.0, 0.8660],
        ]),
    ]
}

/// Published `R_P` blocks (first row, Bell columns 2-4) of the canonical factors.
pub fn reference_p_blocks() -> [[f64; 3]; 3] {
    let q = SQRT_2 / 4.0;
    [[-q, 0.0, 0.0], [-q, 0.0, 0.0], [0.2887, 0.0, 0.0]]
}

/// Controls as tabulated for this problem, computational basis, with the
/// printed decimals `0.9856` / `0.1691` replaced by their exact values.
///
/// The table lists `B Q_k B†`, the adjoint of the stabilizing feedback
/// `B Q_k† B†`; see [`reference_controls`].
pub fn tabulated_controls() -> [ComplexMatrix; 3] {
    let h = FRAC_1_SQRT_2;
    let s3 = libm::sqrt(3.0);
    let c = (1.0 + h) / s3;
    let s = (1.0 - h) / s3;
    let m = |rows: [[f64; 4]; 4]| ComplexMatrix::from_real_rows(&rows).expect("finite");
    [
        m([
            [h, 0.0, 0.0, -h],
            [h, 0.0, 0.0, h],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ]),
        m([
            [h, 0.0, 0.0, -h],
            [0.0, 1.0, 0.0, 0.0],
            [h, 0.0, 0.0, h],
            [0.0, 0.0, -1.0, 0.0],
        ]),
        m([
            [c, 0.0, 0.0, s],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [-s, 0.0, 0.0, c],
        ]),
    ]
}

/// Stabilizing reference controls `U_k = B Q_k† B†`: the adjoints of
/// [`tabulated_controls`].
pub fn reference_controls() -> [ComplexMatrix; 3] {
    tabulated_controls().map(|u| u.adjoint())
}
