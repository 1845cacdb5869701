//! Overlap-operator certificates against perfect non-adaptive discrimination.
//!
//! If `Φ₀(ψ)` and `Φ₁(ψ)` had orthogonal supports then `⟨ψ|B_j†A_k|ψ⟩ = 0`
//! for every pair of Kraus operators, hence `⟨ψ|P|ψ⟩ = 0` for any
//! combination `P = Σ α_jk B_j†A_k`. A positive definite `P` rules that out
//! for every `ψ`. Since `P^{⊗n} ⊗ 𝟙_W` is again positive definite and is the
//! same combination built from the Kraus operators of `Φ^{⊗n} ⊗ 𝟙_W`, one
//! certificate covers every number of parallel copies and every ancilla.

use std::f64::consts::SQRT_2;

use crate::channel::KrausChannel;
use crate::error::{shape_err, Result};
use crate::matrix::{c64, min_eigenvalue, tensor_all, ComplexMatrix, StateVector, C64, HERMITIAN_TOL};

/// Positive-definiteness threshold for a certificate.
pub const CERTIFICATE_MIN_EIG: f64 = 1e-9;

/// Coefficients `α_jk`; row `j` indexes the second channel's Kraus operators,
/// column `k` the first channel's.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientMatrix {
    alpha: ComplexMatrix,
}

impl CoefficientMatrix {
    pub fn new(alpha: ComplexMatrix) -> Self {
        Self { alpha }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            alpha: ComplexMatrix::zeros(rows, cols),
        }
    }

    /// The 5×5 choice that turns the separating pair's overlaps into a
    /// positive definite operator (entries given 1-based as `α(j,k)`):
    /// `α(1,1) = α(2,2) = √2`, `α(3,5) = α(4,3) = 1`, `α(4,4) = −2√2`.
    pub fn separating_pair() -> Self {
        let mut alpha = ComplexMatrix::zeros(5, 5);
        alpha[(0, 0)] = c64(SQRT_2, 0.0);
        alpha[(1, 1)] = c64(SQRT_2, 0.0);
        alpha[(2, 4)] = c64(1.0, 0.0);
        alpha[(3, 2)] = c64(1.0, 0.0);
        alpha[(3, 3)] = c64(-2.0 * SQRT_2, 0.0);
        Self { alpha }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.alpha
    }
}

/// A verified positive definite overlap combination.
#[derive(Clone, Debug)]
pub struct OverlapCertificate {
    pub alpha: CoefficientMatrix,
    pub p: ComplexMatrix,
    pub min_eig: f64,
}

impl OverlapCertificate {
    /// Smallest eigenvalue of `P^{⊗n}`, which is `min_eig^n`.
    pub fn tensor_power_min_eig(&self, n: u32) -> f64 {
        self.min_eig.powi(n as i32)
    }

    /// `P^{⊗n}` built explicitly.
    pub fn tensor_power(&self, n: usize) -> ComplexMatrix {
        tensor_all(std::iter::repeat_n(&self.p, n))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rejection {
    Shape(String),
    NotHermitian { deviation: f64 },
    NotPositiveDefinite { min_eig: f64 },
}

#[derive(Clone, Debug)]
pub enum CertificateOutcome {
    Certified(OverlapCertificate),
    Rejected(Rejection),
}

impl CertificateOutcome {
    pub fn certificate(&self) -> Option<&OverlapCertificate> {
        match self {
            Self::Certified(c) => Some(c),
            Self::Rejected(_) => None,
        }
    }
}

/// `Σ_jk α_jk B_j† A_k`
pub fn overlap_operator(
    kraus_a: &[ComplexMatrix],
    kraus_b: &[ComplexMatrix],
    alpha: &CoefficientMatrix,
) -> Result<ComplexMatrix> {
    let al = &alpha.alpha;
    if al.shape() != (kraus_b.len(), kraus_a.len()) {
        return shape_err(format!(
            "coefficients are {}x{}, Kraus counts are {}x{}",
            al.rows(),
            al.cols(),
            kraus_b.len(),
            kraus_a.len()
        ));
    }
    let (Some(a0), Some(b0)) = (kraus_a.first(), kraus_b.first()) else {
        return shape_err("empty Kraus list");
    };
    if kraus_a.iter().chain(kraus_b).any(|k| k.shape() != a0.shape()) || b0.shape() != a0.shape() {
        return shape_err("Kraus operators have inconsistent shapes");
    }
    let dim_in = a0.cols();
    let mut p = ComplexMatrix::zeros(dim_in, dim_in);
    for (j, b) in kraus_b.iter().enumerate() {
        let bd = b.adjoint();
        for (k, a) in kraus_a.iter().enumerate() {
            let coeff = al[(j, k)];
            if coeff == c64(0.0, 0.0) {
                continue;
            }
            p = &p + &(&bd * a).scale(coeff);
        }
    }
    Ok(p)
}

/// Builds `P` for `(c0, c1)` and checks that it certifies imperfectability.
pub fn nonadaptive_impossibility_certificate(
    c0: &KrausChannel,
    c1: &KrausChannel,
    alpha: &CoefficientMatrix,
) -> CertificateOutcome {
    let p = match overlap_operator(c0.kraus(), c1.kraus(), alpha) {
        Ok(p) => p,
        Err(e) => return CertificateOutcome::Rejected(Rejection::Shape(e.to_string())),
    };
    let deviation = p.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return CertificateOutcome::Rejected(Rejection::NotHermitian { deviation });
    }
    let p = p.hermitian_part();
    let min_eig = min_eigenvalue(&p).expect("Hermitian by construction");
    if min_eig <= CERTIFICATE_MIN_EIG {
        return CertificateOutcome::Rejected(Rejection::NotPositiveDefinite { min_eig });
    }
    CertificateOutcome::Certified(OverlapCertificate {
        alpha: alpha.clone(),
        p,
        min_eig,
    })
}

/// `max_jk |⟨ψ|B_j†A_k|ψ⟩|`; zero exactly when `ψ` makes every overlap vanish.
pub fn pairwise_overlap_max(c0: &KrausChannel, c1: &KrausChannel, psi: &StateVector) -> Result<f64> {
    if psi.dim() != c0.dim_in() || c0.dim_in() != c1.dim_in() || c0.dim_out() != c1.dim_out() {
        return shape_err("state and channel dimensions disagree");
    }
    let v = psi.amplitudes();
    let images_a: Vec<Vec<C64>> = c0.kraus().iter().map(|a| a.mat_vec(v)).collect();
    let images_b: Vec<Vec<C64>> = c1.kraus().iter().map(|b| b.mat_vec(v)).collect();
    let mut best: f64 = 0.0;
    for bv in &images_b {
        for av in &images_a {
            let z: C64 = bv.iter().zip(av).map(|(b, a)| b.conj() * a).sum();
            best = best.max(z.norm());
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{phi0, phi1};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn printed_p() -> ComplexMatrix {
        ComplexMatrix::from_real(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.5, -0.5, //
                0.0, 0.0, -0.5, 1.5,
            ],
        )
        .unwrap()
    }

    #[test]
    fn zero_alpha_gives_zero() {
        let p = overlap_operator(phi0().kraus(), phi1().kraus(), &CoefficientMatrix::zeros(5, 5)).unwrap();
        assert_eq!(p, ComplexMatrix::zeros(4, 4));
    }

    #[test]
    fn separating_alpha_gives_printed_p() {
        let p = overlap_operator(
            phi0().kraus(),
            phi1().kraus(),
            &CoefficientMatrix::separating_pair(),
        )
        .unwrap();
        assert!(p.max_abs_diff(&printed_p()) < 1e-15, "{p:?}");
    }

    #[test]
    fn single_term_selects_product() {
        let mut al = ComplexMatrix::zeros(5, 5);
        al[(2, 4)] = c64(1.0, 0.0);
        let p = overlap_operator(phi0().kraus(), phi1().kraus(), &CoefficientMatrix::new(al)).unwrap();
        let want = &phi1().kraus()[2].adjoint() * &phi0().kraus()[4];
        assert_eq!(p, want);
    }

    #[test]
    fn wrong_alpha_shape_is_error() {
        assert!(overlap_operator(phi0().kraus(), phi1().kraus(), &CoefficientMatrix::zeros(4, 5)).is_err());
    }

    #[test]
    fn certificate_for_separating_pair() {
        let out = nonadaptive_impossibility_certificate(&phi0(), &phi1(), &CoefficientMatrix::separating_pair());
        let cert = out.certificate().expect("certified");
        assert!((cert.min_eig - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-12);
        let p2 = cert.tensor_power(2);
        let m2 = min_eigenvalue(&p2).unwrap();
        assert!((m2 - cert.tensor_power_min_eig(2)).abs() < 1e-12);
    }

    #[test]
    fn zero_alpha_rejected() {
        let out = nonadaptive_impossibility_certificate(&phi0(), &phi1(), &CoefficientMatrix::zeros(5, 5));
        assert!(matches!(
            out,
            CertificateOutcome::Rejected(Rejection::NotPositiveDefinite { min_eig }) if min_eig == 0.0
        ));
    }

    #[test]
    fn identity_channel_against_itself() {
        let id = KrausChannel::identity(2);
        let out = nonadaptive_impossibility_certificate(
            &id,
            &id,
            &CoefficientMatrix::new(ComplexMatrix::identity(1)),
        );
        let cert = out.certificate().expect("certified");
        assert_eq!(cert.p, ComplexMatrix::identity(2));
    }

    #[test]
    fn non_hermitian_combination_rejected() {
        let mut al = ComplexMatrix::zeros(5, 5);
        al[(2, 4)] = c64(1.0, 0.0);
        let out = nonadaptive_impossibility_certificate(&phi0(), &phi1(), &CoefficientMatrix::new(al));
        assert!(matches!(out, CertificateOutcome::Rejected(Rejection::NotHermitian { .. })));
    }

    #[test]
    fn overlap_at_basis_input() {
        let v = pairwise_overlap_max(&phi0(), &phi1(), &StateVector::basis(4, 0)).unwrap();
        assert!(v >= FRAC_1_SQRT_2 - 1e-15);
        assert!(pairwise_overlap_max(&phi0(), &phi1(), &StateVector::basis(2, 0)).is_err());
    }
}
