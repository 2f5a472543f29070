#![allow(dead_code)]

use dqds_core::{canonical_qr, validate_kraus, ComplexMatrix, DensityOperator, KrausMap, Tolerances, C64};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn random_dmatrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::new(random_dmatrix(rng, n, n)).unwrap()
}

/// Product of random `n×k` and `k×n` factors: rank at most `k`.
pub fn random_low_rank(rng: &mut impl Rng, n: usize, k: usize) -> ComplexMatrix {
    ComplexMatrix::new(random_dmatrix(rng, n, k) * random_dmatrix(rng, k, n)).unwrap()
}

pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::new(random_dmatrix(rng, n, n).qr().q()).unwrap()
}

/// Kraus operators cut from a random `kn × n` isometry.
pub fn random_kraus(rng: &mut impl Rng, n: usize, k: usize) -> KrausMap {
    let iso = random_dmatrix(rng, n * k, n).qr().q();
    let ops = (0..k)
        .map(|j| ComplexMatrix::new(iso.rows(j * n, n).into_owned()).unwrap())
        .collect();
    validate_kraus(ops, &tol()).unwrap()
}

/// A map leaving `span{e₁, …, e_m}` invariant for every `m`: the canonical
/// `R` factors of a random map, each rotated by a unitary that is block
/// diagonal for the split at `m`.
pub fn random_invariant(rng: &mut impl Rng, n: usize, k: usize, m: usize) -> KrausMap {
    let base = random_kraus(rng, n, k);
    let ops = base
        .ops()
        .iter()
        .map(|op| {
            let r = canonical_qr(op, &tol()).unwrap().r;
            block_diagonal(&random_unitary(rng, m), &random_unitary(rng, n - m)).matmul(&r).unwrap()
        })
        .collect();
    validate_kraus(ops, &tol()).unwrap()
}

pub fn block_diagonal(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = (a.rows(), b.rows());
    let mut out = DMatrix::zeros(p + q, p + q);
    out.view_mut((0, 0), (p, p)).copy_from(a.as_dmatrix());
    out.view_mut((p, p), (q, q)).copy_from(b.as_dmatrix());
    ComplexMatrix::new(out).unwrap()
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> DensityOperator {
    let g = random_dmatrix(rng, n, n);
    let rho = &g * g.adjoint();
    let trace = rho.trace();
    DensityOperator::new(ComplexMatrix::new(rho / trace).unwrap(), &tol()).unwrap()
}

pub fn real_diag(values: &[f64]) -> ComplexMatrix {
    let d: Vec<C64> = values.iter().map(|&v| C64::new(v, 0.0)).collect();
    ComplexMatrix::from_diagonal(&d)
}
