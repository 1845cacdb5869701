use crate::error::{shape_err, Error, Result};

use super::stochastic::{check_pair, Prob, StochasticChannel};

/// Outcome probability `q` and the posteriors it induces.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorState<P> {
    pub q: P,
    /// `(p₀, p₁)`, or `None` when `q = 0` and the posterior is undefined.
    pub posterior: Option<(P, P)>,
}

impl<P: Prob> PosteriorState<P> {
    pub fn is_defined(&self) -> bool {
        self.posterior.is_some()
    }

    pub fn posteriors(&self) -> Option<(&P, &P)> {
        self.posterior.as_ref().map(|(a, b)| (a, b))
    }
}

/// Posterior after seeing output `j` on input `k`, with prior `prior` on
/// channel 0.
pub fn posterior<P: Prob>(
    m0: &StochasticChannel<P>,
    m1: &StochasticChannel<P>,
    k: usize,
    j: usize,
    prior: &P,
) -> Result<PosteriorState<P>> {
    check_pair(m0, m1)?;
    if k >= m0.inputs() || j >= m0.outputs() {
        return shape_err(format!(
            "input {} / output {} out of range for a {}x{} channel",
            k + 1,
            j + 1,
            m0.outputs(),
            m0.inputs()
        ));
    }
    if *prior < P::zero() || *prior > P::one() {
        return Err(Error::InvalidValue(format!("prior {prior} outside [0, 1]")));
    }
    let a = prior.clone() * m0.get(j, k).clone();
    let b = (P::one() - prior.clone()) * m1.get(j, k).clone();
    let q = a.clone() + b;
    if q.is_zero() {
        return Ok(PosteriorState { q, posterior: None });
    }
    let p0 = a / q.clone();
    let p1 = P::one() - p0.clone();
    Ok(PosteriorState {
        q,
        posterior: Some((p0, p1)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::examples::example1;
    use num_rational::BigRational;

    #[test]
    fn symmetric_likelihoods() {
        let m = StochasticChannel::from_rows(vec![vec![0.3], vec![0.7]]).unwrap();
        let s = posterior(&m, &m, 0, 1, &0.5).unwrap();
        assert_eq!(s.posterior, Some((0.5, 0.5)));
        assert!((s.q - 0.7).abs() < 1e-15);
    }

    #[test]
    fn excluded_hypothesis() {
        let (m0, m1) = example1();
        let s = posterior(&m0, &m1, 0, 0, &BigRational::ratio(1, 2)).unwrap();
        assert_eq!(s.q, BigRational::ratio(1, 6));
        assert_eq!(
            s.posterior,
            Some((BigRational::ratio(1, 1), BigRational::ratio(0, 1)))
        );
    }

    #[test]
    fn zero_probability_outcome_is_undefined() {
        let m0 = StochasticChannel::from_rows(vec![vec![1.0], vec![0.0]]).unwrap();
        let s = posterior(&m0, &m0, 0, 1, &0.5).unwrap();
        assert_eq!(s.q, 0.0);
        assert!(!s.is_defined());
    }

    #[test]
    fn rejects_bad_arguments() {
        let (m0, m1) = example1();
        assert!(posterior(&m0, &m1, 2, 0, &BigRational::ratio(1, 2)).is_err());
        assert!(posterior(&m0, &m1, 0, 0, &BigRational::ratio(3, 2)).is_err());
    }
}
