//! Quantum channels in Kraus form.
//!
//! Conventions used throughout the crate:
//! * two-qubit basis order is `|00⟩, |01⟩, |10⟩, |11⟩`;
//! * an extended input `ρ` on `input ⊗ ancilla` lists the channel input first;
//! * Choi matrices are ordered `output ⊗ input`, i.e. `J(Φ) = Σ_ij Φ(E_ij) ⊗ E_ij`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{shape_err, Error, Result};
use crate::matrix::{
    c64, hermitian_eigenvalues, partial_trace, singular_values, tensor, ComplexMatrix, StateVector,
    C64, HERMITIAN_TOL, PSD_TOL,
};

/// Completeness tolerance for `Σ K†K = 𝟙`.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Second singular value below which an operator counts as rank one.
pub const RANK_ONE_TOL: f64 = 1e-10;

/// Completely positive trace-preserving map stored as Kraus operators.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

/// Outcome of checking a Kraus list for shape conformity and completeness.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// Max-entry deviation of `Σ K†K` from the identity; infinite when shapes are wrong.
    pub completeness_deviation: f64,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn check(dim_in: usize, dim_out: usize, kraus: &[ComplexMatrix]) -> Self {
        let mut violations = Vec::new();
        if dim_in == 0 || dim_out == 0 {
            violations.push("channel dimensions must be positive".to_string());
        }
        if kraus.is_empty() {
            violations.push("Kraus list is empty".to_string());
        }
        for (j, k) in kraus.iter().enumerate() {
            if k.shape() != (dim_out, dim_in) {
                violations.push(format!(
                    "Kraus operator {j} is {}x{}, expected {dim_out}x{dim_in}",
                    k.rows(),
                    k.cols()
                ));
            }
        }
        if !violations.is_empty() {
            return Self {
                completeness_deviation: f64::INFINITY,
                violations,
            };
        }
        let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
        for k in kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        let completeness_deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim_in));
        if completeness_deviation > COMPLETENESS_TOL {
            violations.push(format!(
                "completeness deviation {completeness_deviation:.3e} (sum of K†K vs identity)"
            ));
        }
        Self {
            completeness_deviation,
            violations,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "ok (completeness deviation {:.3e})", self.completeness_deviation)
        } else {
            write!(f, "{}", self.violations.join("; "))
        }
    }
}

impl KrausChannel {
    pub fn new(dim_in: usize, dim_out: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let report = ValidationReport::check(dim_in, dim_out, &kraus);
        if !report.is_ok() {
            return Err(Error::Validation(report.to_string()));
        }
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// `X ↦ tr(X)·σ` for a fixed output state.
    pub fn constant(dim_in: usize, output: &DensityOperator) -> Result<Self> {
        let eig = crate::matrix::hermitian_eig(output.matrix())?;
        let mut kraus = Vec::new();
        for (k, &p) in eig.eigenvalues.iter().enumerate() {
            if p <= 1e-15 {
                continue;
            }
            let v = eig.eigenvector(k);
            for i in 0..dim_in {
                let mut e = vec![c64(0.0, 0.0); dim_in];
                e[i] = c64(1.0, 0.0);
                kraus.push(ComplexMatrix::outer(&v, &e).scale_real(p.sqrt()));
            }
        }
        Self::new(dim_in, output.dim(), kraus)
    }

    /// Sequential composition: apply `self`, then `after`.
    pub fn then(&self, after: &KrausChannel) -> Result<Self> {
        if after.dim_in != self.dim_out {
            return shape_err(format!(
                "cannot compose: output dim {} feeds input dim {}",
                self.dim_out, after.dim_in
            ));
        }
        let kraus = after
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| b * a))
            .collect();
        Ok(Self {
            dim_in: self.dim_in,
            dim_out: after.dim_out,
            kraus,
        })
    }

    /// Qubit depolarizing channel `ρ ↦ (1−p)ρ + p·𝟙/2`.
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidValue(format!("depolarizing strength {p} not in [0,1]")));
        }
        let i = ComplexMatrix::identity(2);
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])?;
        let y = ComplexMatrix::new(
            2,
            2,
            vec![c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)],
        )?;
        let z = ComplexMatrix::diag_real(&[1.0, -1.0]);
        let w0 = (1.0 - 0.75 * p).sqrt();
        let w = (p / 4.0).sqrt();
        Self::new(
            2,
            2,
            vec![i.scale_real(w0), x.scale_real(w), y.scale_real(w), z.scale_real(w)],
        )
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn is_real(&self) -> bool {
        self.kraus.iter().all(ComplexMatrix::is_real)
    }
}

pub fn validate_channel(c: &KrausChannel) -> ValidationReport {
    ValidationReport::check(c.dim_in, c.dim_out, &c.kraus)
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return shape_err("density operator must be square");
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidValue(format!("density operator has trace {tr}")));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < PSD_TOL {
            return Err(Error::InvalidValue(format!(
                "density operator has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix known to be a state up to rounding.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn pure(psi: &StateVector) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        Self {
            matrix: tensor(&self.matrix, &other.matrix),
        }
    }
}

/// Choi matrix ordered `output ⊗ input`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    pub dim_in: usize,
    pub dim_out: usize,
    pub matrix: ComplexMatrix,
}

impl ChoiMatrix {
    /// `Tr_out J`, which equals `𝟙_in` for trace-preserving maps.
    pub fn input_marginal(&self) -> ComplexMatrix {
        partial_trace(&self.matrix, &[self.dim_out, self.dim_in], &[1])
            .expect("Choi dimensions are consistent")
    }
}

/// `Σ_j K_j ρ K_j†`
pub fn apply(c: &KrausChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    if rho.dim() != c.dim_in {
        return shape_err(format!(
            "channel input dim {} but state dim {}",
            c.dim_in,
            rho.dim()
        ));
    }
    Ok(DensityOperator::from_matrix_unchecked(apply_kraus(
        &c.kraus,
        rho.matrix(),
    )))
}

pub(crate) fn apply_kraus(kraus: &[ComplexMatrix], x: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(kraus[0].rows(), kraus[0].rows());
    for k in kraus {
        out = &out + &k.sandwich(x);
    }
    out
}

/// Applies `c ⊗ 𝟙_W` to a state on `input ⊗ W`.
pub fn apply_extended(
    c: &KrausChannel,
    rho: &DensityOperator,
    ancilla_dim: usize,
) -> Result<DensityOperator> {
    if ancilla_dim == 0 || rho.dim() != c.dim_in * ancilla_dim {
        return shape_err(format!(
            "extended input needs dim {}·{ancilla_dim}, state has dim {}",
            c.dim_in,
            rho.dim()
        ));
    }
    if ancilla_dim == 1 {
        return apply(c, rho);
    }
    let id = ComplexMatrix::identity(ancilla_dim);
    let kraus: Vec<ComplexMatrix> = c.kraus.iter().map(|k| tensor(k, &id)).collect();
    Ok(DensityOperator::from_matrix_unchecked(apply_kraus(
        &kraus,
        rho.matrix(),
    )))
}

/// `c1 ⊗ c2` with Kraus operators `{K ⊗ L}`.
pub fn tensor_channels(c1: &KrausChannel, c2: &KrausChannel) -> KrausChannel {
    let kraus = c1
        .kraus
        .iter()
        .flat_map(|k| c2.kraus.iter().map(move |l| tensor(k, l)))
        .collect();
    KrausChannel {
        dim_in: c1.dim_in * c2.dim_in,
        dim_out: c1.dim_out * c2.dim_out,
        kraus,
    }
}

/// `c^{⊗n}`
pub fn tensor_power(c: &KrausChannel, n: usize) -> KrausChannel {
    assert!(n >= 1, "tensor power needs n ≥ 1");
    (1..n).fold(c.clone(), |acc, _| tensor_channels(&acc, c))
}

/// Vectorization matching the `output ⊗ input` Choi ordering:
/// `vec(K)[o·d_in + i] = K[o, i]`, i.e. the row-major data.
fn vectorize(k: &ComplexMatrix) -> &[C64] {
    k.as_slice()
}

/// `J(c) = Σ_k vec(K_k) vec(K_k)†`.
pub fn choi(c: &KrausChannel) -> ChoiMatrix {
    let n = c.dim_in * c.dim_out;
    let mut matrix = ComplexMatrix::zeros(n, n);
    for k in &c.kraus {
        matrix = &matrix + &ComplexMatrix::outer(vectorize(k), vectorize(k));
    }
    ChoiMatrix {
        dim_in: c.dim_in,
        dim_out: c.dim_out,
        matrix,
    }
}

fn ket(bits: &[StateVector]) -> StateVector {
    bits.iter()
        .skip(1)
        .fold(bits[0].clone(), |acc, b| acc.tensor(b))
}

/// `s·|out⟩⟨in|`
fn rank_one(out: &StateVector, inp: &StateVector, s: f64) -> ComplexMatrix {
    ComplexMatrix::outer(out.amplitudes(), inp.amplitudes()).scale_real(s)
}

/// First channel of the separating pair.
///
/// Measures the first qubit; on 0 it emits `|0⟩`, on 1 it measures the
/// second qubit in the standard basis and emits `|0⟩` (result 0) or the
/// maximally mixed state (result 1).
pub fn phi0() -> KrausChannel {
    let (z, o) = (StateVector::basis(2, 0), StateVector::basis(2, 1));
    let h = FRAC_1_SQRT_2;
    KrausChannel {
        dim_in: 4,
        dim_out: 2,
        kraus: vec![
            rank_one(&z, &ket(&[z.clone(), z.clone()]), 1.0),
            rank_one(&z, &ket(&[z.clone(), o.clone()]), 1.0),
            rank_one(&z, &ket(&[o.clone(), z.clone()]), 1.0),
            rank_one(&z, &ket(&[o.clone(), o.clone()]), h),
            rank_one(&o, &ket(&[o.clone(), o.clone()]), h),
        ],
    }
}

/// Second channel of the separating pair.
///
/// Measures the first qubit; on 0 it emits `|+⟩`, on 1 it measures the
/// second qubit in the `{|+⟩, |−⟩}` basis and emits `|1⟩` (result +) or the
/// maximally mixed state (result −).
pub fn phi1() -> KrausChannel {
    let (z, o) = (StateVector::basis(2, 0), StateVector::basis(2, 1));
    let (p, m) = (StateVector::plus(), StateVector::minus());
    let h = FRAC_1_SQRT_2;
    KrausChannel {
        dim_in: 4,
        dim_out: 2,
        kraus: vec![
            rank_one(&p, &ket(&[z.clone(), z.clone()]), 1.0),
            rank_one(&p, &ket(&[z.clone(), o.clone()]), 1.0),
            rank_one(&o, &ket(&[o.clone(), p.clone()]), 1.0),
            rank_one(&z, &ket(&[o.clone(), m.clone()]), h),
            rank_one(&o, &ket(&[o.clone(), m.clone()]), h),
        ],
    }
}

/// True when every Kraus operator has numerical rank one, a sufficient
/// condition for the channel to be entanglement-breaking.
pub fn all_kraus_rank_one(c: &KrausChannel) -> bool {
    c.kraus.iter().all(|k| {
        let sv = singular_values(k);
        sv[0] > RANK_ONE_TOL && sv.get(1).is_none_or(|&s| s < RANK_ONE_TOL)
    })
}
