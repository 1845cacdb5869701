//! Quantum discrimination: state and channel distances, impossibility
//! certificates and adaptive strategy simulation.

mod certificate;
mod diamond;
pub mod exact;
pub mod sdp;
mod strategy;

pub use certificate::{
    nonadaptive_impossibility_certificate, overlap_operator, pairwise_overlap_max,
    CertificateOutcome, CoefficientMatrix, OverlapCertificate, Rejection, CERTIFICATE_MIN_EIG,
};
pub use diamond::{
    check_copy_capacity, choi_difference_norm, diamond_norm_distance, inner_optimum,
    n_copy_diamond, n_copy_nonadaptive_success, one_shot_success, DiamondNormResult,
    DEFAULT_TOL, MAX_CHOI_DIM, MAX_SCHUR_DIM,
};
pub use strategy::{two_step_strategy, simulate_strategy, AdaptiveQuantumStrategy};

use crate::channel::DensityOperator;
use crate::error::{shape_err, Result};
use crate::matrix::trace_norm;

/// Optimal equal-prior success probability for telling two states apart.
pub fn helstrom_success(rho0: &DensityOperator, rho1: &DensityOperator) -> Result<f64> {
    if rho0.dim() != rho1.dim() {
        return shape_err(format!("state dims {} and {} differ", rho0.dim(), rho1.dim()));
    }
    Ok(0.5 + trace_norm(&(rho0.matrix() - rho1.matrix()))? / 4.0)
}
