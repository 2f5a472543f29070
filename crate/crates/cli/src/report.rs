//! The JSON analysis report.

use std::path::Path;

use dqds_core::stability::{check_gas, Certificate, StabilityReport};
use dqds_core::{canonical_qr, KrausMap, SubspaceSplit, Tolerances};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::io::MatrixJson;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancesJson {
    pub eps_rank: f64,
    pub eps_zero: f64,
    pub eps_eq: f64,
    pub eps_spectral: f64,
}

impl From<&Tolerances> for TolerancesJson {
    fn from(t: &Tolerances) -> Self {
        Self {
            eps_rank: t.eps_rank,
            eps_zero: t.eps_zero,
            eps_eq: t.eps_eq,
            eps_spectral: t.eps_spectral,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputJson {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateJson {
    NotInvariant,
    ContractiveCorner,
    FixedState {
        residual: f64,
        locus_residual: f64,
        state: MatrixJson,
    },
    Unresolved,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        match c {
            Certificate::NotInvariant => CertificateJson::NotInvariant,
            Certificate::Contractive => CertificateJson::ContractiveCorner,
            Certificate::FixedState { state, residual, locus_residual } => CertificateJson::FixedState {
                residual: *residual,
                locus_residual: *locus_residual,
                state: MatrixJson::from_matrix(state),
            },
            Certificate::Unresolved => CertificateJson::Unresolved,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: Option<InputJson>,
    pub dim: usize,
    pub dim_s: usize,
    pub tolerances: TolerancesJson,
    pub invariant: bool,
    pub gas: bool,
    pub corner_spectral_radius: f64,
    pub kernel_intersection_dim: usize,
    pub sufficient_structural_test: Option<bool>,
    pub max_q_norm: f64,
    /// `‖R_{P,k}‖_F` of each operator's canonical `R` factor in split
    /// coordinates.
    pub r_p_norms: Vec<f64>,
    pub certificate: CertificateJson,
    pub details: String,
    /// Seconds since the epoch from `SOURCE_DATE_EPOCH`, if set.
    pub generated_at: Option<u64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn source_date_epoch() -> Option<u64> {
    std::env::var("SOURCE_DATE_EPOCH").ok()?.trim().parse().ok()
}

/// Canonical `R_P` norms of every operator.
pub fn r_p_norms(map: &KrausMap, split: &SubspaceSplit, tol: &Tolerances) -> Result<Vec<f64>> {
    let m = split.dim_s();
    let r = split.dim_r();
    map.ops()
        .iter()
        .map(|op| {
            let f = canonical_qr(&split.to_split(op)?, tol)?;
            Ok(f.r.block(0, m, m, r).frobenius_norm())
        })
        .collect()
}

impl AnalysisReport {
    pub fn build(
        map: &KrausMap,
        split: &SubspaceSplit,
        tol: &Tolerances,
        input: Option<(&Path, &[u8])>,
    ) -> Result<(Self, StabilityReport)> {
        let stability = check_gas(map, split, tol)?;
        let report = Self {
            input: input.map(|(path, bytes)| InputJson {
                path: path.display().to_string(),
                sha256: sha256_hex(bytes),
            }),
            dim: split.dim_total(),
            dim_s: split.dim_s(),
            tolerances: tol.into(),
            invariant: stability.invariant,
            gas: stability.gas,
            corner_spectral_radius: stability.corner_spectral_radius,
            kernel_intersection_dim: stability.kernel_intersection_dim,
            sufficient_structural_test: stability.sufficient_structural_test,
            max_q_norm: stability.max_q_norm,
            r_p_norms: r_p_norms(map, split, tol)?,
            certificate: (&stability.certificate).into(),
            details: stability.details.clone(),
            generated_at: source_date_epoch(),
        };
        Ok((report, stability))
    }
}
