//! Exact simulation of sequential strategies that query one channel
//! several times, carrying quantum memory between queries.

use crate::channel::{apply, apply_extended, validate_channel, DensityOperator, KrausChannel};
use crate::error::{shape_err, Error, Result};
use crate::matrix::{hermitian_eig, min_eigenvalue, ComplexMatrix, StateVector, HERMITIAN_TOL};

const POVM_TOL: f64 = 1e-9;

/// Processing maps interleaved with channel calls, then a final measurement.
///
/// Round `r` maps the current memory to `channel input ⊗ new memory`; the
/// channel then acts on the first factor, and its output together with the
/// new memory becomes the memory of round `r + 1`. The POVM acts on
/// `channel output ⊗ last memory`.
#[derive(Clone, Debug)]
pub struct AdaptiveQuantumStrategy {
    initial_memory_dim: usize,
    rounds: Vec<KrausChannel>,
    povm: Vec<ComplexMatrix>,
}

impl AdaptiveQuantumStrategy {
    pub fn new(initial_memory_dim: usize, rounds: Vec<KrausChannel>, povm: Vec<ComplexMatrix>) -> Result<Self> {
        if initial_memory_dim == 0 {
            return shape_err("memory dimension must be positive");
        }
        if rounds.is_empty() {
            return shape_err("a strategy needs at least one round");
        }
        for (r, round) in rounds.iter().enumerate() {
            let report = validate_channel(round);
            if !report.is_ok() {
                return Err(Error::Validation(format!("round {}: {report}", r + 1)));
            }
        }
        let Some(first) = povm.first() else {
            return shape_err("empty POVM");
        };
        let d = first.rows();
        let mut total = ComplexMatrix::zeros(d, d);
        for (i, e) in povm.iter().enumerate() {
            if e.shape() != (d, d) {
                return shape_err("POVM elements have inconsistent shapes");
            }
            let deviation = e.hermitian_deviation();
            if deviation > HERMITIAN_TOL {
                return Err(Error::NotHermitian { deviation });
            }
            let min = min_eigenvalue(e)?;
            if min < -POVM_TOL {
                return Err(Error::Validation(format!(
                    "POVM element {i} has eigenvalue {min:.3e}"
                )));
            }
            total = &total + e;
        }
        let deviation = total.max_abs_diff(&ComplexMatrix::identity(d));
        if deviation > POVM_TOL {
            return Err(Error::Validation(format!(
                "POVM sums to identity only within {deviation:.3e}"
            )));
        }
        Ok(Self {
            initial_memory_dim,
            rounds,
            povm,
        })
    }

    pub fn initial_memory_dim(&self) -> usize {
        self.initial_memory_dim
    }

    pub fn rounds(&self) -> &[KrausChannel] {
        &self.rounds
    }

    pub fn povm(&self) -> &[ComplexMatrix] {
        &self.povm
    }
}

/// Outcome probabilities, indexed like the POVM.
pub fn simulate_strategy(s: &AdaptiveQuantumStrategy, c: &KrausChannel) -> Result<Vec<f64>> {
    let m = s.initial_memory_dim;
    let mut state = DensityOperator::from_matrix_unchecked(
        StateVector::basis(m, 0).projector(),
    );
    for (r, round) in s.rounds.iter().enumerate() {
        if round.dim_in() != state.dim() {
            return shape_err(format!(
                "round {} expects memory dim {}, have {}",
                r + 1,
                round.dim_in(),
                state.dim()
            ));
        }
        if round.dim_out() % c.dim_in() != 0 {
            return shape_err(format!(
                "round {} output dim {} is not a multiple of channel input dim {}",
                r + 1,
                round.dim_out(),
                c.dim_in()
            ));
        }
        let memory = round.dim_out() / c.dim_in();
        let prepared = apply(round, &state)?;
        state = apply_extended(c, &prepared, memory)?;
    }
    if s.povm[0].rows() != state.dim() {
        return shape_err(format!(
            "POVM acts on dim {}, final state has dim {}",
            s.povm[0].rows(),
            state.dim()
        ));
    }
    Ok(s
        .povm
        .iter()
        .map(|e| e.inner_re(state.matrix()))
        .collect())
}

/// The two-query protocol that identifies the separating pair with certainty.
///
/// The first query sends `|0⟩ ⊗ ρ`; the channel answers with its key state.
/// The second query sends `|1⟩ ⊗ key`, after which the output is `|a⟩` for
/// channel `a`. A standard-basis measurement reads it off.
pub fn two_step_strategy(rho_second: &DensityOperator) -> Result<AdaptiveQuantumStrategy> {
    if rho_second.dim() != 2 {
        return shape_err(format!(
            "second-qubit state must be 2-dimensional, got {}",
            rho_second.dim()
        ));
    }
    let eig = hermitian_eig(rho_second.matrix())?;
    let zero = StateVector::basis(2, 0);
    let mut first = Vec::new();
    for k in 0..2 {
        let p = eig.eigenvalues[k].max(0.0);
        if p == 0.0 {
            continue;
        }
        let v = StateVector::normalized(eig.eigenvector(k))?;
        let col = zero.tensor(&v);
        let data = col.amplitudes().iter().map(|a| a * p.sqrt()).collect();
        first.push(ComplexMatrix::new(4, 1, data)?);
    }
    let total: f64 = eig.eigenvalues.iter().map(|p| p.max(0.0)).sum();
    for k in &mut first {
        *k = k.scale_real(1.0 / total.sqrt());
    }
    let one = ComplexMatrix::from_real(2, 1, &[0.0, 1.0])?;
    let second = crate::matrix::tensor(&one, &ComplexMatrix::identity(2));
    let rounds = vec![KrausChannel::new(1, 4, first)?, KrausChannel::new(2, 4, vec![second])?];
    let povm = vec![
        StateVector::basis(2, 0).projector(),
        StateVector::basis(2, 1).projector(),
    ];
    AdaptiveQuantumStrategy::new(1, rounds, povm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{phi0, phi1};

    fn named_states() -> Vec<DensityOperator> {
        vec![
            DensityOperator::pure(&StateVector::basis(2, 0)),
            DensityOperator::pure(&StateVector::basis(2, 1)),
            DensityOperator::pure(&StateVector::plus()),
            DensityOperator::maximally_mixed(2),
        ]
    }

    #[test]
    fn two_step_identifies_each_channel() {
        for rho in named_states() {
            let s = two_step_strategy(&rho).unwrap();
            let d0 = simulate_strategy(&s, &phi0()).unwrap();
            let d1 = simulate_strategy(&s, &phi1()).unwrap();
            assert!((d0[0] - 1.0).abs() < 1e-12 && d0[1].abs() < 1e-12, "{d0:?}");
            assert!(d1[0].abs() < 1e-12 && (d1[1] - 1.0).abs() < 1e-12, "{d1:?}");
        }
    }

    #[test]
    fn uniform_povm_is_uninformative() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let base = two_step_strategy(&DensityOperator::maximally_mixed(2)).unwrap();
        let s = AdaptiveQuantumStrategy::new(1, base.rounds().to_vec(), vec![half.clone(), half]).unwrap();
        for c in [phi0(), phi1()] {
            let d = simulate_strategy(&s, &c).unwrap();
            assert!((d[0] - 0.5).abs() < 1e-12 && (d[1] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn wrong_dimensions() {
        assert!(two_step_strategy(&DensityOperator::maximally_mixed(4)).is_err());
        let s = two_step_strategy(&DensityOperator::maximally_mixed(2)).unwrap();
        assert!(simulate_strategy(&s, &KrausChannel::identity(2)).is_err());
    }

    #[test]
    fn bad_povm_rejected() {
        let base = two_step_strategy(&DensityOperator::maximally_mixed(2)).unwrap();
        let povm = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(2)];
        assert!(AdaptiveQuantumStrategy::new(1, base.rounds().to_vec(), povm).is_err());
    }
}
