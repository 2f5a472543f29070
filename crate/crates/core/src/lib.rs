//! Analysis and feedback synthesis for discrete-time quantum dynamical
//! semigroups generated by Kraus maps.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - [`linalg`]: the dense complex matrix kernel (products, kernels,
//!   orthonormal completion, PSD square roots, spectral radius).
//! - [`canonical`]: the canonical QR decomposition, whose `R` factor is a
//!   canonical form for matrices under left multiplication by unitaries.
//! - [`state`]: density operators, Kraus maps and generalized measurement
//!   sampling.
//! - [`stability`]: invariance and global asymptotic stability (GAS) of a
//!   target subspace, Lyapunov function `V(ρ) = Tr(Π_R ρ)`.
//! - [`synthesis`]: measurement simulation by unitary feedback and the
//!   iterative design of stabilizing controls.
//! - [`bell`]: the two-qubit Bell-state stabilization problem used as a
//!   worked example and golden reference.

#![no_std]

extern crate alloc;

pub mod bell;
pub mod canonical;
mod error;
pub mod linalg;
mod matching;
pub mod stability;
pub mod state;
pub mod synthesis;

pub use canonical::{canonical_form, canonical_qr, is_canonical, CanonicalQR};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Tolerances, C64};
pub use stability::{
    attractivity_distance, block_split, check_gas, check_invariance, delta_v, lyapunov_v,
    zero_difference_locus, BlockSplit, Certificate, StabilityReport,
};
pub use state::{
    apply_map, change_basis, completeness_residual, iterate_map, sample_outcome, validate_kraus,
    DensityOperator, KrausMap, Outcome, SubspaceSplit,
};
pub use synthesis::{
    closed_loop, feasibility_check, simulate_measurement, synthesize_controls, Simulation,
    SimulationMatch, SynthesisResult,
};
